//! Pulse-level Monte-Carlo of the BB84 and SARG04 quantum stages.
//!
//! States are tracked abstractly as a basis (0 = rectilinear, 1 = diagonal)
//! and a bit. Measuring in the wrong basis gives a uniformly random outcome,
//! which reproduces the 1/2 overlap statistics between the two sets.
//!
//! Every call owns one seeded ChaCha8 stream, so a given seed produces a
//! bit-identical transcript on every platform.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardware::{
    link_quantities, system_transmittance, HardwareConfig, PhotonSource,
};
use crate::numerics::{CdfSampler, DistributionVec, DEFAULT_N_MAX};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackKind {
    None,
    InterceptResend,
    PhotonNumberSplitting,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackSpec {
    pub kind: AttackKind,
    /// Fraction of pulses attacked.
    pub fraction: f64,
}

impl AttackSpec {
    pub const NONE: AttackSpec = AttackSpec {
        kind: AttackKind::None,
        fraction: 0.0,
    };

    pub fn intercept_resend(fraction: f64) -> Self {
        Self {
            kind: AttackKind::InterceptResend,
            fraction,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.fraction) {
            return Err(Error::Domain(format!(
                "attack fraction {} outside [0, 1]",
                self.fraction
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageProtocol {
    Bb84,
    Sarg04,
}

/// Per-pulse record of a simulated quantum stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTranscript {
    pub protocol: StageProtocol,
    pub photon_numbers: Vec<u8>,
    pub sent_bits: Vec<u8>,
    pub sent_bases: Vec<u8>,
    pub measured_bases: Vec<u8>,
    /// Raw measurement outcome, `None` when the detector did not click.
    pub received_outcomes: Vec<Option<u8>>,
    pub conclusive_flags: Vec<bool>,
    pub sifted_key_a: Vec<u8>,
    pub sifted_key_b: Vec<u8>,
    pub qber: f64,
    pub sift_fraction: f64,
    pub counts: StageCounts,
}

/// Aggregate counts of a quantum-stage run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StageCounts {
    pub pulses: u64,
    pub clicks: u64,
    pub conclusive: u64,
    pub errors: u64,
}

impl StageCounts {
    pub fn gain(&self) -> f64 {
        self.clicks as f64 / self.pulses as f64
    }

    pub fn qber(&self) -> f64 {
        if self.conclusive == 0 {
            return 0.0;
        }
        self.errors as f64 / self.conclusive as f64
    }

    pub fn sift_fraction(&self) -> f64 {
        self.conclusive as f64 / self.pulses as f64
    }
}

#[derive(Debug, Clone, Copy)]
struct PulseRecord {
    photons: u8,
    alice_bit: u8,
    alice_basis: u8,
    bob_basis: u8,
    outcome: Option<u8>,
    /// Bob's decoded key bit when the pulse is conclusive.
    bob_bit: Option<u8>,
}

struct Channel {
    sampler: CdfSampler,
    detect_by_n: Vec<f64>,
    dark: f64,
    misalignment: f64,
}

impl Channel {
    fn new(source: &PhotonSource, hw: &HardwareConfig) -> Result<Self> {
        let dist = source.distribution(DEFAULT_N_MAX)?;
        let eta = system_transmittance(&hw.channel, &hw.detector);
        Ok(Self {
            sampler: CdfSampler::new(&dist),
            detect_by_n: (0..=DEFAULT_N_MAX)
                .map(|n| 1.0 - (1.0 - eta).powi(n as i32))
                .collect(),
            dark: hw.detector.dark_prob,
            misalignment: hw.detector.misalignment,
        })
    }
}

/// One signal state in flight: basis, bit, photon number.
#[derive(Debug, Clone, Copy)]
struct InFlight {
    basis: u8,
    bit: u8,
    photons: usize,
}

fn random_bit<R: Rng>(rng: &mut R) -> u8 {
    (rng.next_u32() & 1) as u8
}

fn intercept_resend<R: Rng>(state: InFlight, rng: &mut R) -> InFlight {
    if state.photons == 0 {
        return state;
    }
    let eve_basis = random_bit(rng);
    let eve_bit = if eve_basis == state.basis {
        state.bit
    } else {
        random_bit(rng)
    };
    InFlight {
        basis: eve_basis,
        bit: eve_bit,
        photons: state.photons,
    }
}

/// Bob's detection in `bob_basis`: `None` without a click.
fn detect<R: Rng>(channel: &Channel, state: InFlight, bob_basis: u8, rng: &mut R) -> Option<u8> {
    let signal = rng.gen::<f64>() < channel.detect_by_n[state.photons];
    let dark = rng.gen::<f64>() < channel.dark;
    if dark {
        // a background click carries no information about the state
        Some(random_bit(rng))
    } else if signal {
        if bob_basis == state.basis {
            let flip = rng.gen::<f64>() < channel.misalignment;
            Some(state.bit ^ flip as u8)
        } else {
            Some(random_bit(rng))
        }
    } else {
        None
    }
}

/// SARG04 state index `2 * sign + basis` for states S0..S3.
fn sarg_index(basis: u8, sign: u8) -> u8 {
    basis + 2 * sign
}

/// Decode a SARG04 outcome against the announced set {S_k, S_{k+1}}.
/// Returns the key bit (the basis of the inferred state) when conclusive.
fn sarg_decode(set: u8, outcome_index: u8) -> Option<u8> {
    if outcome_index == (set + 2) % 4 {
        // orthogonal to S_k, so S_{k+1} was sent
        Some((set + 1) % 2)
    } else if outcome_index == (set + 3) % 4 {
        Some(set % 2)
    } else {
        None
    }
}

fn run_stage<F>(
    protocol: StageProtocol,
    n_pulses: usize,
    hw: &HardwareConfig,
    source: &PhotonSource,
    attack: &AttackSpec,
    seed: u64,
    mut record: F,
) -> Result<StageCounts>
where
    F: FnMut(PulseRecord),
{
    if n_pulses == 0 {
        return Err(Error::Domain("need at least one pulse".into()));
    }
    attack.validate()?;
    if attack.kind == AttackKind::PhotonNumberSplitting {
        return Err(Error::Domain(
            "photon-number splitting is simulated by pns_detection_demo".into(),
        ));
    }
    let channel = Channel::new(source, hw)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = StageCounts {
        pulses: n_pulses as u64,
        ..StageCounts::default()
    };

    for _ in 0..n_pulses {
        let photons = channel.sampler.sample(rng.gen::<f64>());
        let alice_basis = random_bit(&mut rng);
        let alice_sign = random_bit(&mut rng);
        let sent = InFlight {
            basis: alice_basis,
            bit: alice_sign,
            photons,
        };
        let attacked = attack.kind == AttackKind::InterceptResend
            && rng.gen::<f64>() < attack.fraction;
        let arriving = if attacked {
            intercept_resend(sent, &mut rng)
        } else {
            sent
        };
        let bob_basis = random_bit(&mut rng);
        let outcome = detect(&channel, arriving, bob_basis, &mut rng);
        if outcome.is_some() {
            counts.clicks += 1;
        }

        let (alice_bit, bob_bit) = match protocol {
            StageProtocol::Bb84 => {
                let kept = outcome.filter(|_| bob_basis == alice_basis);
                (alice_sign, kept)
            }
            StageProtocol::Sarg04 => {
                let state = sarg_index(alice_basis, alice_sign);
                // announce one of the two sets containing the sent state
                let set = if random_bit(&mut rng) == 0 {
                    state
                } else {
                    (state + 3) % 4
                };
                let decoded =
                    outcome.and_then(|o| sarg_decode(set, sarg_index(bob_basis, o)));
                (alice_basis, decoded)
            }
        };
        if let Some(b) = bob_bit {
            counts.conclusive += 1;
            if b != alice_bit {
                counts.errors += 1;
            }
        }
        record(PulseRecord {
            photons: photons.min(u8::MAX as usize) as u8,
            alice_bit,
            alice_basis,
            bob_basis,
            outcome,
            bob_bit,
        });
    }
    if counts.conclusive == 0 {
        return Err(Error::ZeroConclusive { pulses: n_pulses });
    }
    Ok(counts)
}

fn simulate_transcript(
    protocol: StageProtocol,
    n_pulses: usize,
    hw: &HardwareConfig,
    source: &PhotonSource,
    attack: &AttackSpec,
    seed: u64,
) -> Result<StageTranscript> {
    let mut t = StageTranscript {
        protocol,
        photon_numbers: Vec::with_capacity(n_pulses),
        sent_bits: Vec::with_capacity(n_pulses),
        sent_bases: Vec::with_capacity(n_pulses),
        measured_bases: Vec::with_capacity(n_pulses),
        received_outcomes: Vec::with_capacity(n_pulses),
        conclusive_flags: Vec::with_capacity(n_pulses),
        sifted_key_a: Vec::new(),
        sifted_key_b: Vec::new(),
        qber: 0.0,
        sift_fraction: 0.0,
        counts: StageCounts::default(),
    };
    let counts = run_stage(protocol, n_pulses, hw, source, attack, seed, |r| {
        t.photon_numbers.push(r.photons);
        t.sent_bits.push(r.alice_bit);
        t.sent_bases.push(r.alice_basis);
        t.measured_bases.push(r.bob_basis);
        t.received_outcomes.push(r.outcome);
        t.conclusive_flags.push(r.bob_bit.is_some());
        if let Some(b) = r.bob_bit {
            t.sifted_key_a.push(r.alice_bit);
            t.sifted_key_b.push(b);
        }
    })?;
    t.qber = counts.qber();
    t.sift_fraction = counts.sift_fraction();
    t.counts = counts;
    Ok(t)
}

/// BB84 quantum stage with basis sifting.
pub fn simulate_bb84(
    n_pulses: usize,
    hw: &HardwareConfig,
    source: &PhotonSource,
    attack: &AttackSpec,
    seed: u64,
) -> Result<StageTranscript> {
    simulate_transcript(StageProtocol::Bb84, n_pulses, hw, source, attack, seed)
}

/// SARG04 quantum stage: the sender announces a two-state set containing the
/// sent state; a pulse is conclusive when the outcome is orthogonal to one
/// member of the set.
pub fn simulate_sarg04(
    n_pulses: usize,
    hw: &HardwareConfig,
    source: &PhotonSource,
    attack: &AttackSpec,
    seed: u64,
) -> Result<StageTranscript> {
    simulate_transcript(StageProtocol::Sarg04, n_pulses, hw, source, attack, seed)
}

/// Counts only, for runs too long to keep per-pulse records. Uses the same
/// random stream as the transcript-producing calls.
pub fn simulate_counts(
    protocol: StageProtocol,
    n_pulses: usize,
    hw: &HardwareConfig,
    source: &PhotonSource,
    attack: &AttackSpec,
    seed: u64,
) -> Result<StageCounts> {
    run_stage(protocol, n_pulses, hw, source, attack, seed, |_| {})
}

/// Per-pulse CSV dump of a transcript.
pub fn write_transcript_csv<W: Write>(t: &StageTranscript, mut out: W) -> std::io::Result<()> {
    writeln!(out, "pulse,photons,sent_bit,sent_basis,measured_basis,outcome,conclusive")?;
    for i in 0..t.sent_bits.len() {
        let outcome = t.received_outcomes[i].map_or(String::new(), |o| o.to_string());
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            i,
            t.photon_numbers[i],
            t.sent_bits[i],
            t.sent_bases[i],
            t.measured_bases[i],
            outcome,
            t.conclusive_flags[i] as u8
        )?;
    }
    Ok(())
}

/// Gain observed at one intensity in the PNS demonstration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntensityGain {
    pub intensity: f64,
    pub pulses: u64,
    pub clicks: u64,
    pub measured_gain: f64,
    /// Gain predicted by the lossy-channel model without an attack.
    pub expected_gain: f64,
    pub std_error: f64,
    /// `(measured - expected) / std_error`.
    pub z_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PnsReport {
    pub attack: AttackKind,
    /// Probability with which single-photon pulses are blocked.
    pub single_block_prob: f64,
    /// False when no blocking probability in [0, 1] reproduces the lossy
    /// signal gain (the clamped value is used instead).
    pub calibrated: bool,
    pub signal: IntensityGain,
    pub decoys: Vec<IntensityGain>,
    /// Signal gain within 3 standard errors of the lossy model.
    pub signal_consistent: bool,
    /// Every decoy gain within 5 standard errors of the lossy model.
    pub decoy_consistency: bool,
}

/// Block probability for single-photon pulses that makes the PNS channel
/// reproduce the lossy-channel gain at `mean`.
fn calibrate_single_block(mean: f64, hw: &HardwareConfig) -> Result<(f64, bool)> {
    let dist = DistributionVec::poisson(mean, DEFAULT_N_MAX)?;
    let eta_det = hw.detector.efficiency;
    let y0 = hw.detector.dark_prob;
    let target = link_quantities(&PhotonSource::poisson(mean, 1.0), hw)?.gain;
    let forwarded: f64 = (2..dist.len())
        .map(|n| dist.get(n) * (1.0 - (1.0 - eta_det).powi(n as i32 - 1)))
        .sum();
    let single = dist.get(1) * eta_det;
    // target = y0 + (1 - y0) * ((1 - b) * single + forwarded)
    let b = 1.0 - ((target - y0) / (1.0 - y0) - forwarded) / single;
    if (0.0..=1.0).contains(&b) {
        Ok((b, true))
    } else {
        Ok((b.clamp(0.0, 1.0), false))
    }
}

/// Photon-number-splitting demonstration.
///
/// Each pulse picks its intensity uniformly from the signal mean and the
/// decoy intensities. Under attack the lossy channel is replaced by a
/// lossless one: single-photon pulses are blocked with a calibrated
/// probability, multi-photon pulses lose one photon to the eavesdropper and
/// the remainder reaches the detector without channel loss. Gains are then
/// compared with the honest lossy-channel model at every intensity.
pub fn pns_detection_demo(
    n_pulses: usize,
    hw: &HardwareConfig,
    source: &PhotonSource,
    decoys: &[f64],
    attack: AttackKind,
    seed: u64,
) -> Result<PnsReport> {
    if n_pulses == 0 {
        return Err(Error::Domain("need at least one pulse".into()));
    }
    let mut intensities = vec![source.mean_photons];
    intensities.extend_from_slice(decoys);
    let samplers = intensities
        .iter()
        .map(|&m| Ok(CdfSampler::new(&DistributionVec::poisson(m, DEFAULT_N_MAX)?)))
        .collect::<Result<Vec<_>>>()?;

    let eta_sys = system_transmittance(&hw.channel, &hw.detector);
    let eta_det = hw.detector.efficiency;
    let dark = hw.detector.dark_prob;
    let pns = attack == AttackKind::PhotonNumberSplitting;
    let (block, calibrated) = if pns {
        calibrate_single_block(source.mean_photons, hw)?
    } else {
        (0.0, true)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pulses = vec![0u64; intensities.len()];
    let mut clicks = vec![0u64; intensities.len()];
    for _ in 0..n_pulses {
        let which = rng.gen_range(0..intensities.len() as u32) as usize;
        let n = samplers[which].sample(rng.gen::<f64>()) as i32;
        let p_signal = if !pns {
            1.0 - (1.0 - eta_sys).powi(n)
        } else if n == 0 {
            0.0
        } else if n == 1 {
            if rng.gen::<f64>() < block {
                0.0
            } else {
                eta_det
            }
        } else {
            1.0 - (1.0 - eta_det).powi(n - 1)
        };
        let click = rng.gen::<f64>() < p_signal || rng.gen::<f64>() < dark;
        pulses[which] += 1;
        clicks[which] += click as u64;
    }

    let gains = intensities
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let expected = link_quantities(&PhotonSource::poisson(m, 1.0), hw)?.gain;
            let n = pulses[i].max(1) as f64;
            let measured = clicks[i] as f64 / n;
            let std_error = (expected * (1.0 - expected) / n).sqrt().max(f64::MIN_POSITIVE);
            Ok(IntensityGain {
                intensity: m,
                pulses: pulses[i],
                clicks: clicks[i],
                measured_gain: measured,
                expected_gain: expected,
                std_error,
                z_score: (measured - expected) / std_error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut gains = gains.into_iter();
    let signal = gains.next().expect("signal intensity present");
    let decoys: Vec<IntensityGain> = gains.collect();
    Ok(PnsReport {
        attack,
        single_block_prob: block,
        calibrated,
        signal_consistent: signal.z_score.abs() <= 3.0,
        decoy_consistency: decoys.iter().all(|g| g.z_score.abs() <= 5.0),
        signal,
        decoys,
    })
}

/// Bitwise exclusive-or of `message` with the leading bits of `key`.
pub fn one_time_pad(message: &[u8], key: &[u8]) -> Result<Vec<u8>> {
    if key.len() < message.len() {
        return Err(Error::KeyTooShort {
            key: key.len(),
            message: message.len(),
        });
    }
    Ok(message.iter().zip(key).map(|(m, k)| (m ^ k) & 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardware::{ChannelSpec, DetectorSpec};
    use proptest::prelude::*;

    fn ideal() -> HardwareConfig {
        HardwareConfig::new(
            ChannelSpec::fiber(0.0, 0.0),
            DetectorSpec {
                efficiency: 1.0,
                dark_prob: 0.0,
                misalignment: 0.0,
            },
        )
    }

    fn single() -> PhotonSource {
        PhotonSource::single_photon(1e6)
    }

    #[test]
    fn ideal_bb84_sifts_half() {
        let t = simulate_bb84(100_000, &ideal(), &single(), &AttackSpec::NONE, 1).unwrap();
        assert_eq!(t.qber, 0.0);
        assert!((t.sift_fraction - 0.5).abs() < 0.005);
        assert_eq!(t.sifted_key_a, t.sifted_key_b);
        assert_eq!(t.sent_bits.len(), 100_000);
    }

    #[test]
    fn intercept_resend_error_scales_with_fraction() {
        for (fraction, expected) in [(1.0, 0.25), (0.5, 0.125)] {
            let c = simulate_counts(
                StageProtocol::Bb84,
                400_000,
                &ideal(),
                &single(),
                &AttackSpec::intercept_resend(fraction),
                2,
            )
            .unwrap();
            assert!((c.qber() - expected).abs() < 0.005, "{fraction}: {}", c.qber());
        }
    }

    #[test]
    fn ideal_sarg_conclusive_quarter() {
        let t = simulate_sarg04(200_000, &ideal(), &single(), &AttackSpec::NONE, 3).unwrap();
        assert!((t.sift_fraction - 0.25).abs() < 0.005);
        assert!(t.qber.abs() < 0.002);
    }

    /// Exhaustive enumeration of sent state, announced set, Bob's basis and
    /// his outcome for ideal hardware.
    fn sarg_enumeration(misalignment: f64) -> (f64, f64) {
        let mut conclusive = 0.0;
        let mut errors = 0.0;
        for state in 0u8..4 {
            for set in [state, (state + 3) % 4] {
                for bob_basis in 0u8..2 {
                    for sign in 0u8..2 {
                        let (basis, bit) = (state % 2, state / 2);
                        let p_outcome = if bob_basis == basis {
                            if sign == bit {
                                1.0 - misalignment
                            } else {
                                misalignment
                            }
                        } else {
                            0.5
                        };
                        let weight = 0.25 * 0.5 * 0.5 * p_outcome;
                        if let Some(b) = sarg_decode(set, sarg_index(bob_basis, sign)) {
                            conclusive += weight;
                            if b != basis {
                                errors += weight;
                            }
                        }
                    }
                }
            }
        }
        (conclusive, errors / conclusive)
    }

    #[test]
    fn sarg_enumeration_oracle() {
        let (c, e) = sarg_enumeration(0.0);
        assert_eq!(c, 0.25);
        assert_eq!(e, 0.0);
        let (c, e) = sarg_enumeration(0.03);
        assert!((c - (0.25 + 0.015)).abs() < 1e-15);
        assert!((e - 0.06 / 1.06).abs() < 1e-15);
    }

    #[test]
    fn sarg_misalignment_matches_enumeration() {
        let mut hw = ideal();
        hw.detector.misalignment = 0.03;
        let c = simulate_counts(
            StageProtocol::Sarg04,
            1_000_000,
            &hw,
            &single(),
            &AttackSpec::NONE,
            9,
        )
        .unwrap();
        let (frac, err) = sarg_enumeration(0.03);
        let se = (err * (1.0 - err) / c.conclusive as f64).sqrt();
        assert!((c.qber() - err).abs() < 4.0 * se);
        assert!((c.sift_fraction() - frac).abs() < 0.002);
    }

    #[test]
    fn sarg_intercept_resend_exceeds_bb84() {
        let attack = AttackSpec::intercept_resend(1.0);
        let sarg =
            simulate_counts(StageProtocol::Sarg04, 400_000, &ideal(), &single(), &attack, 4)
                .unwrap();
        // enumeration of the intercept-resend channel gives 1/3 errors and 3/8 conclusive
        assert!((sarg.qber() - 1.0 / 3.0).abs() < 0.005, "{}", sarg.qber());
        assert!((sarg.sift_fraction() - 0.375).abs() < 0.005);
        assert!(sarg.qber() > 0.25);
    }

    #[test]
    fn fixed_seed_reproduces_transcript() {
        let mut hw = ideal();
        hw.detector.dark_prob = 0.01;
        hw.detector.misalignment = 0.05;
        let src = PhotonSource::poisson(0.5, 1e6);
        let a = simulate_bb84(20_000, &hw, &src, &AttackSpec::intercept_resend(0.3), 42).unwrap();
        let b = simulate_bb84(20_000, &hw, &src, &AttackSpec::intercept_resend(0.3), 42).unwrap();
        assert_eq!(a, b);
        let c = simulate_counts(
            StageProtocol::Bb84,
            20_000,
            &hw,
            &src,
            &AttackSpec::intercept_resend(0.3),
            42,
        )
        .unwrap();
        assert_eq!(a.counts, c);
    }

    #[test]
    fn transcript_invariants() {
        let mut hw = ideal();
        hw.detector.efficiency = 0.3;
        hw.detector.dark_prob = 0.001;
        let t = simulate_bb84(10_000, &hw, &PhotonSource::poisson(0.6, 1e6), &AttackSpec::NONE, 5)
            .unwrap();
        assert_eq!(t.sifted_key_a.len(), t.sifted_key_b.len());
        let conclusive = t.conclusive_flags.iter().filter(|c| **c).count();
        assert_eq!(conclusive, t.sifted_key_a.len());
        assert_eq!(t.sift_fraction, conclusive as f64 / 10_000.0);
        for i in 0..t.sent_bits.len() {
            if t.conclusive_flags[i] {
                assert!(t.received_outcomes[i].is_some());
                assert_eq!(t.sent_bases[i], t.measured_bases[i]);
            }
        }
    }

    #[test]
    fn no_clicks_is_an_error() {
        let vacuum = PhotonSource::poisson(0.0, 1e6);
        assert!(matches!(
            simulate_bb84(1000, &ideal(), &vacuum, &AttackSpec::NONE, 1),
            Err(Error::ZeroConclusive { .. })
        ));
        assert!(simulate_bb84(0, &ideal(), &single(), &AttackSpec::NONE, 1).is_err());
    }

    #[test]
    fn csv_has_one_row_per_pulse() {
        let t = simulate_bb84(50, &ideal(), &single(), &AttackSpec::NONE, 1).unwrap();
        let mut buf = Vec::new();
        write_transcript_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 51);
        assert!(text.starts_with("pulse,photons,"));
    }

    #[test]
    fn pad_examples() {
        assert_eq!(one_time_pad(&[1, 0, 1, 0], &[0, 0, 0, 0]).unwrap(), vec![1, 0, 1, 0]);
        assert_eq!(one_time_pad(&[1, 0, 1, 0], &[1, 0, 1, 0]).unwrap(), vec![0, 0, 0, 0]);
        assert!(matches!(
            one_time_pad(&[1, 0, 1], &[1]),
            Err(Error::KeyTooShort { key: 1, message: 3 })
        ));
    }

    #[test]
    fn pad_random_1024_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let m: Vec<u8> = (0..1024).map(|_| random_bit(&mut rng)).collect();
        let k: Vec<u8> = (0..1024).map(|_| random_bit(&mut rng)).collect();
        let c = one_time_pad(&m, &k).unwrap();
        assert_eq!(one_time_pad(&c, &k).unwrap(), m);
    }

    proptest! {
        #[test]
        fn pad_is_an_involution(
            m in proptest::collection::vec(0u8..2, 0..256),
            extra in proptest::collection::vec(0u8..2, 0..16),
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut k: Vec<u8> = (0..m.len()).map(|_| random_bit(&mut rng)).collect();
            k.extend(extra);
            let c = one_time_pad(&m, &k).unwrap();
            prop_assert_eq!(one_time_pad(&c, &k).unwrap(), m);
        }
    }
}
