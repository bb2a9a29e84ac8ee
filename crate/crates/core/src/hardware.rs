//! Physical component parameters and the effective link quantities
//! (yields, gain, error rates) derived from them.
//!
//! Channel model: an `n`-photon pulse is detected with probability
//! `eta_n = 1 - (1 - eta_sys)^n`; background clicks occur with probability
//! `Y0 = p_dark` independently, so `Y_n = Y0 + eta_n - Y0 * eta_n`. A
//! background click yields a random bit (error 1/2); a signal click without
//! background is flipped with the misalignment probability.

use serde::{Deserialize, Serialize};

use crate::error::{Error, FieldError, Result};
use crate::numerics::{DistributionVec, DEFAULT_N_MAX};

/// Error probability of a background (dark) click.
pub const BACKGROUND_ERROR: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Poisson,
    Thermal,
    SinglePhoton,
    HeraldedPdc,
}

/// Photon-number statistics of the transmitter.
///
/// For `HeraldedPdc` sources `herald_efficiency` is the detection efficiency
/// of the triggering arm. With a herald, only triggered pulses are emitted:
/// the photon-number distribution is conditioned on the trigger and the
/// effective repetition rate is `rep_rate * P(trigger)`. Without one the
/// source is an untriggered thermal pair source (the entangled scheme).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotonSource {
    pub kind: SourceKind,
    pub mean_photons: f64,
    pub rep_rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub herald_efficiency: Option<f64>,
}

impl PhotonSource {
    pub fn poisson(mean_photons: f64, rep_rate: f64) -> Self {
        Self {
            kind: SourceKind::Poisson,
            mean_photons,
            rep_rate,
            herald_efficiency: None,
        }
    }

    pub fn single_photon(rep_rate: f64) -> Self {
        Self {
            kind: SourceKind::SinglePhoton,
            mean_photons: 1.0,
            rep_rate,
            herald_efficiency: None,
        }
    }

    pub fn thermal(mean_photons: f64, rep_rate: f64) -> Self {
        Self {
            kind: SourceKind::Thermal,
            mean_photons,
            rep_rate,
            herald_efficiency: None,
        }
    }

    pub fn pdc(mean_photons: f64, rep_rate: f64, herald_efficiency: Option<f64>) -> Self {
        Self {
            kind: SourceKind::HeraldedPdc,
            mean_photons,
            rep_rate,
            herald_efficiency,
        }
    }

    /// Photon-number distribution of emitted pulses over `0..=n_max`.
    pub fn distribution(&self, n_max: usize) -> Result<DistributionVec> {
        match self.kind {
            SourceKind::Poisson => DistributionVec::poisson(self.mean_photons, n_max),
            SourceKind::Thermal => DistributionVec::thermal(self.mean_photons, n_max),
            SourceKind::SinglePhoton => {
                let mut e = vec![0.0; n_max + 1];
                if n_max >= 1 {
                    e[1] = 1.0;
                }
                Ok(DistributionVec::from_raw(e))
            }
            SourceKind::HeraldedPdc => {
                let pairs = DistributionVec::thermal(self.mean_photons, n_max)?;
                match self.herald_efficiency {
                    None => Ok(pairs),
                    Some(eta) => {
                        let weighted: Vec<f64> = pairs
                            .entries()
                            .iter()
                            .enumerate()
                            .map(|(n, p)| p * (1.0 - (1.0 - eta).powi(n as i32)))
                            .collect();
                        DistributionVec::from_raw(weighted).normalized()
                    }
                }
            }
        }
    }

    /// Probability that a pump pulse produces a trigger. One for
    /// untriggered sources.
    pub fn trigger_probability(&self) -> Result<f64> {
        match (self.kind, self.herald_efficiency) {
            (SourceKind::HeraldedPdc, Some(eta)) => {
                let pairs = DistributionVec::thermal(self.mean_photons, DEFAULT_N_MAX)?;
                Ok(pairs
                    .entries()
                    .iter()
                    .enumerate()
                    .map(|(n, p)| p * (1.0 - (1.0 - eta).powi(n as i32)))
                    .sum())
            }
            _ => Ok(1.0),
        }
    }

    /// Rate of emitted (triggered) pulses per second.
    pub fn effective_rep_rate(&self) -> Result<f64> {
        Ok(self.rep_rate * self.trigger_probability()?)
    }

    pub fn validate(&self, path: &str, errors: &mut Vec<FieldError>) {
        if !(self.mean_photons >= 0.0 && self.mean_photons.is_finite()) {
            errors.push(FieldError::new(
                format!("{path}.mean_photons"),
                "must be a finite value >= 0",
            ));
        }
        if !(self.rep_rate > 0.0 && self.rep_rate.is_finite()) {
            errors.push(FieldError::new(format!("{path}.rep_rate"), "must be > 0"));
        }
        if let Some(eta) = self.herald_efficiency {
            if self.kind != SourceKind::HeraldedPdc {
                errors.push(FieldError::new(
                    format!("{path}.herald_efficiency"),
                    "only valid for heralded_pdc sources",
                ));
            } else if !(eta > 0.0 && eta <= 1.0) {
                errors.push(FieldError::new(
                    format!("{path}.herald_efficiency"),
                    "must be in (0, 1]",
                ));
            }
        }
    }
}

/// Fiber or free-space link. A fixed total loss, when present, overrides the
/// per-kilometre attenuation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub attenuation_db_per_km: f64,
    pub length_km: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_loss_db: Option<f64>,
}

impl ChannelSpec {
    pub fn fiber(attenuation_db_per_km: f64, length_km: f64) -> Self {
        Self {
            attenuation_db_per_km,
            length_km,
            fixed_loss_db: None,
        }
    }

    pub fn fixed_loss(loss_db: f64) -> Self {
        Self {
            attenuation_db_per_km: 0.0,
            length_km: 0.0,
            fixed_loss_db: Some(loss_db),
        }
    }

    pub fn loss_db(&self) -> f64 {
        self.fixed_loss_db
            .unwrap_or(self.attenuation_db_per_km * self.length_km)
    }

    pub fn transmittance(&self) -> f64 {
        10f64.powf(-self.loss_db() / 10.0)
    }

    pub fn validate(&self, path: &str, errors: &mut Vec<FieldError>) {
        if !(self.attenuation_db_per_km >= 0.0 && self.attenuation_db_per_km.is_finite()) {
            errors.push(FieldError::new(
                format!("{path}.attenuation_db_per_km"),
                "must be a finite value >= 0",
            ));
        }
        if !(self.length_km >= 0.0 && self.length_km.is_finite()) {
            errors.push(FieldError::new(format!("{path}.length_km"), "must be >= 0"));
        }
        if let Some(loss) = self.fixed_loss_db {
            if !(loss >= 0.0 && loss.is_finite()) {
                errors.push(FieldError::new(format!("{path}.fixed_loss_db"), "must be >= 0"));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorSpec {
    /// Single-photon detection probability.
    pub efficiency: f64,
    /// Background click probability per gated pulse.
    pub dark_prob: f64,
    /// Probability that a signal click decodes to the wrong bit.
    pub misalignment: f64,
}

impl DetectorSpec {
    pub fn validate(&self, path: &str, errors: &mut Vec<FieldError>) {
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            errors.push(FieldError::new(format!("{path}.efficiency"), "must be in (0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.dark_prob) {
            errors.push(FieldError::new(format!("{path}.dark_prob"), "must be in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.misalignment) {
            errors.push(FieldError::new(format!("{path}.misalignment"), "must be in [0, 1]"));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardwareConfig {
    pub channel: ChannelSpec,
    pub detector: DetectorSpec,
    /// Measured QBER to use in place of the modeled one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qber_override: Option<f64>,
}

impl HardwareConfig {
    pub fn new(channel: ChannelSpec, detector: DetectorSpec) -> Self {
        Self {
            channel,
            detector,
            qber_override: None,
        }
    }

    pub fn with_length(&self, length_km: f64) -> Self {
        let mut hw = self.clone();
        hw.channel.length_km = length_km;
        hw
    }

    /// Split the link in half for a source placed midway between the parties.
    pub fn split_symmetric(&self) -> (HardwareConfig, HardwareConfig) {
        let mut arm = self.clone();
        arm.channel.length_km = self.channel.length_km / 2.0;
        arm.channel.fixed_loss_db = self.channel.fixed_loss_db.map(|l| l / 2.0);
        (arm.clone(), arm)
    }

    pub fn validate(&self, path: &str, errors: &mut Vec<FieldError>) {
        self.channel.validate(&format!("{path}.channel"), errors);
        self.detector.validate(&format!("{path}.detector"), errors);
        if let Some(q) = self.qber_override {
            if !(0.0..=0.5).contains(&q) {
                errors.push(FieldError::new(format!("{path}.qber_override"), "must be in [0, 0.5]"));
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolKind {
    Bb84,
    Bb84DecoyActive,
    Bb84DecoyPassive,
    Sarg04,
    EntangledPdc,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 5] = [
        ProtocolKind::Bb84,
        ProtocolKind::Bb84DecoyActive,
        ProtocolKind::Bb84DecoyPassive,
        ProtocolKind::Sarg04,
        ProtocolKind::EntangledPdc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Bb84 => "bb84",
            ProtocolKind::Bb84DecoyActive => "bb84_decoy_active",
            ProtocolKind::Bb84DecoyPassive => "bb84_decoy_passive",
            ProtocolKind::Sarg04 => "sarg04",
            ProtocolKind::EntangledPdc => "entangled_pdc",
        }
    }
}

impl std::str::FromStr for ProtocolKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_").to_ascii_lowercase();
        ProtocolKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| Error::Domain(format!("unknown protocol '{s}'")))
    }
}

/// Default error-correction inefficiency.
pub const DEFAULT_EC_EFFICIENCY: f64 = 1.22;

fn default_ec_efficiency() -> f64 {
    DEFAULT_EC_EFFICIENCY
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSpec {
    pub kind: ProtocolKind,
    pub sifting_q: f64,
    #[serde(default = "default_ec_efficiency")]
    pub ec_efficiency: f64,
    /// Decoy intensities for the active scheme; `0.0` is the vacuum decoy.
    #[serde(default)]
    pub decoy_means: Vec<f64>,
    /// Number of two-way privacy-amplification steps.
    #[serde(default)]
    pub two_way_steps: u32,
}

impl ProtocolSpec {
    pub fn new(kind: ProtocolKind) -> Self {
        Self {
            kind,
            sifting_q: if kind == ProtocolKind::Sarg04 { 0.25 } else { 1.0 },
            ec_efficiency: DEFAULT_EC_EFFICIENCY,
            decoy_means: Vec::new(),
            two_way_steps: 0,
        }
    }

    pub fn validate(&self, path: &str, signal_mean: f64, errors: &mut Vec<FieldError>) {
        if !(self.sifting_q > 0.0 && self.sifting_q <= 1.0) {
            errors.push(FieldError::new(format!("{path}.sifting_q"), "must be in (0, 1]"));
        }
        if !(self.ec_efficiency >= 1.0 && self.ec_efficiency.is_finite()) {
            errors.push(FieldError::new(format!("{path}.ec_efficiency"), "must be >= 1"));
        }
        let active = self.kind == ProtocolKind::Bb84DecoyActive;
        if active && self.decoy_means.is_empty() {
            errors.push(FieldError::new(
                format!("{path}.decoy_means"),
                "active decoy protocol needs at least one decoy intensity",
            ));
        }
        if !active && !self.decoy_means.is_empty() {
            errors.push(FieldError::new(
                format!("{path}.decoy_means"),
                "decoy intensities are only used by bb84_decoy_active",
            ));
        }
        for (i, nu) in self.decoy_means.iter().enumerate() {
            if !(*nu >= 0.0 && *nu < signal_mean) {
                errors.push(FieldError::new(
                    format!("{path}.decoy_means[{i}]"),
                    format!("must be in [0, signal mean {signal_mean})"),
                ));
            }
        }
        if active && !self.decoy_means.iter().any(|nu| *nu > 0.0) {
            errors.push(FieldError::new(
                format!("{path}.decoy_means"),
                "needs a nonzero weak decoy intensity",
            ));
        }
    }
}

/// Effective quantities of one source/link/detector combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkQuantities {
    /// Overall gain Q.
    pub gain: f64,
    /// Overall QBER E.
    pub qber: f64,
    /// Single-photon gain Q1.
    pub single_gain: f64,
    /// Single-photon error rate e1.
    pub single_error: f64,
    /// Single-photon fraction of conclusive events, Q1 / Q.
    pub omega: f64,
    /// Conditional yields Y_n.
    pub yields: DistributionVec,
}

pub fn system_transmittance(channel: &ChannelSpec, detector: &DetectorSpec) -> f64 {
    detector.efficiency * channel.transmittance()
}

fn yield_for(eta_sys: f64, dark: f64, n: usize) -> f64 {
    let eta_n = 1.0 - (1.0 - eta_sys).powi(n as i32);
    dark + eta_n - dark * eta_n
}

/// Detection probability given `n` photons entered the channel.
pub fn yield_n(hw: &HardwareConfig, n: usize) -> f64 {
    let eta = system_transmittance(&hw.channel, &hw.detector);
    yield_for(eta, hw.detector.dark_prob, n)
}

/// Link quantities for a prepare-and-measure scheme with the true channel
/// model (no estimation).
pub fn link_quantities(source: &PhotonSource, hw: &HardwareConfig) -> Result<LinkQuantities> {
    link_quantities_with_error(source, hw, hw.detector.misalignment)
}

/// Like [`link_quantities`] but with an explicit per-signal-click error
/// probability in place of the detector misalignment.
pub fn link_quantities_with_error(
    source: &PhotonSource,
    hw: &HardwareConfig,
    signal_error: f64,
) -> Result<LinkQuantities> {
    let dist = source.distribution(DEFAULT_N_MAX)?;
    let eta = system_transmittance(&hw.channel, &hw.detector);
    let y0 = hw.detector.dark_prob;
    let yields: Vec<f64> = (0..dist.len()).map(|n| yield_for(eta, y0, n)).collect();

    let gain: f64 = dist
        .entries()
        .iter()
        .zip(&yields)
        .map(|(p, y)| p * y)
        .sum();
    if !(gain > 0.0) {
        return Err(Error::Degenerate("overall gain is zero".into()));
    }
    // background clicks occur on every pulse with probability Y0
    let error_gain = BACKGROUND_ERROR * y0 + signal_error * (gain - y0);
    let modeled_qber = (error_gain / gain).clamp(0.0, 0.5);
    let qber = hw.qber_override.unwrap_or(modeled_qber);

    let y1 = yields.get(1).copied().unwrap_or(0.0);
    let single_gain = dist.get(1) * y1;
    let single_error = if y1 > 0.0 {
        (BACKGROUND_ERROR * y0 + signal_error * eta * (1.0 - y0)) / y1
    } else {
        BACKGROUND_ERROR
    };

    Ok(LinkQuantities {
        gain,
        qber,
        single_gain,
        single_error,
        omega: single_gain / gain,
        yields: DistributionVec::from_raw(yields),
    })
}

/// Coincidence quantities for a pair source between two receivers.
///
/// Both arms see the same pair number `n`; per-arm yields are independent.
/// Coincidences involving any background click are random (error 1/2),
/// pure signal coincidences carry the mean misalignment of the two arms.
pub fn entangled_link_quantities(
    source: &PhotonSource,
    hw_a: &HardwareConfig,
    hw_b: &HardwareConfig,
) -> Result<LinkQuantities> {
    let dist = source.distribution(DEFAULT_N_MAX)?;
    let eta_a = system_transmittance(&hw_a.channel, &hw_a.detector);
    let eta_b = system_transmittance(&hw_b.channel, &hw_b.detector);
    let (dark_a, dark_b) = (hw_a.detector.dark_prob, hw_b.detector.dark_prob);
    let misalignment = 0.5 * (hw_a.detector.misalignment + hw_b.detector.misalignment);

    let mut gain = 0.0;
    let mut signal_gain = 0.0;
    let mut yields = Vec::with_capacity(dist.len());
    for (n, p) in dist.entries().iter().enumerate() {
        let ya = yield_for(eta_a, dark_a, n);
        let yb = yield_for(eta_b, dark_b, n);
        let sa = yield_for(eta_a, 0.0, n);
        let sb = yield_for(eta_b, 0.0, n);
        yields.push(ya * yb);
        gain += p * ya * yb;
        signal_gain += p * sa * sb;
    }
    if !(gain > 0.0) {
        return Err(Error::Degenerate("coincidence gain is zero".into()));
    }
    let error_gain = BACKGROUND_ERROR * (gain - signal_gain) + misalignment * signal_gain;
    let modeled_qber = (error_gain / gain).clamp(0.0, 0.5);
    let qber = hw_b.qber_override.or(hw_a.qber_override).unwrap_or(modeled_qber);

    let y1 = yields.get(1).copied().unwrap_or(0.0);
    let s1 = yield_for(eta_a, 0.0, 1) * yield_for(eta_b, 0.0, 1);
    let single_gain = dist.get(1) * y1;
    let single_error = if y1 > 0.0 {
        (BACKGROUND_ERROR * (y1 - s1) + misalignment * s1) / y1
    } else {
        BACKGROUND_ERROR
    };

    Ok(LinkQuantities {
        gain,
        qber,
        single_gain,
        single_error,
        omega: single_gain / gain,
        yields: DistributionVec::from_raw(yields),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gys(length_km: f64) -> HardwareConfig {
        HardwareConfig::new(
            ChannelSpec::fiber(0.21, length_km),
            DetectorSpec {
                efficiency: 0.045,
                dark_prob: 8e-7,
                misalignment: 0.03,
            },
        )
    }

    fn ideal(length_km: f64) -> HardwareConfig {
        HardwareConfig::new(
            ChannelSpec::fiber(0.0, length_km),
            DetectorSpec {
                efficiency: 1.0,
                dark_prob: 0.0,
                misalignment: 0.0,
            },
        )
    }

    #[test]
    fn transmittance_examples() {
        let det = |e| DetectorSpec {
            efficiency: e,
            dark_prob: 0.0,
            misalignment: 0.0,
        };
        assert_eq!(system_transmittance(&ChannelSpec::fiber(0.21, 0.0), &det(1.0)), 1.0);
        let t = system_transmittance(&ChannelSpec::fiber(0.21, 100.0), &det(1.0));
        assert!((t - 10f64.powf(-2.1)).abs() < 1e-15);
        assert!((t - 7.943e-3).abs() < 1e-6);
        let t = system_transmittance(&ChannelSpec::fixed_loss(35.0), &det(0.10));
        assert!((t - 3.162e-5).abs() < 1e-8);
    }

    #[test]
    fn yield_examples() {
        let mut hw = gys(30.0);
        assert_eq!(yield_n(&hw, 0), 8e-7);

        // eta_sys = 0.5 via detector efficiency on a lossless channel
        hw.channel = ChannelSpec::fiber(0.0, 0.0);
        hw.detector.efficiency = 0.5;
        hw.detector.dark_prob = 0.0;
        assert_eq!(yield_n(&hw, 1), 0.5);
        hw.detector.dark_prob = 0.01;
        // 0.01 + 0.75 - 0.0075
        assert!((yield_n(&hw, 2) - 0.7525).abs() < 1e-12);
    }

    #[test]
    fn vacuum_source_sees_only_background() {
        let lq = link_quantities(&PhotonSource::poisson(0.0, 1e6), &gys(10.0)).unwrap();
        assert!((lq.gain - 8e-7).abs() < 1e-20);
        assert!((lq.qber - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gys_back_to_back() {
        let lq = link_quantities(&PhotonSource::poisson(0.48, 1e6), &gys(0.0)).unwrap();
        assert!((lq.gain - 0.02137).abs() < 1e-4, "{}", lq.gain);
        assert!((lq.qber - 0.030).abs() < 0.002, "{}", lq.qber);
    }

    #[test]
    fn perfect_single_photon_link() {
        let lq = link_quantities(&PhotonSource::single_photon(1e6), &ideal(0.0)).unwrap();
        assert_eq!(lq.gain, 1.0);
        assert_eq!(lq.qber, 0.0);
        assert_eq!(lq.omega, 1.0);
    }

    #[test]
    fn omega_is_single_gain_over_gain() {
        let lq = link_quantities(&PhotonSource::poisson(0.6, 1e6), &gys(40.0)).unwrap();
        assert!((lq.omega - lq.single_gain / lq.gain).abs() < 1e-12);
    }

    #[test]
    fn qber_override_replaces_modeled_error() {
        let mut hw = gys(20.0);
        hw.qber_override = Some(0.05);
        let lq = link_quantities(&PhotonSource::poisson(0.5, 1e6), &hw).unwrap();
        assert_eq!(lq.qber, 0.05);
    }

    #[test]
    fn gain_and_qber_monotone_in_length() {
        let src = PhotonSource::poisson(0.48, 1e6);
        let mut prev: Option<LinkQuantities> = None;
        for i in 0..50 {
            let lq = link_quantities(&src, &gys(i as f64 * 6.0)).unwrap();
            assert!(lq.gain >= 8e-7);
            assert!((0.0..=0.5).contains(&lq.qber));
            if let Some(p) = prev {
                assert!(lq.gain <= p.gain);
                assert!(lq.qber >= p.qber);
            }
            prev = Some(lq);
        }
    }

    #[test]
    fn analytic_poisson_shortcut_agrees() {
        let mut hw = gys(25.0);
        hw.detector.dark_prob = 0.0;
        let eta = system_transmittance(&hw.channel, &hw.detector);
        for mean in [0.01, 0.1, 0.48, 1.0] {
            let lq = link_quantities(&PhotonSource::poisson(mean, 1e6), &hw).unwrap();
            let shortcut = 1.0 - (-eta * mean).exp();
            assert!(((lq.gain - shortcut) / shortcut).abs() < 1e-8);
        }
    }

    #[test]
    fn entangled_examples() {
        let mut hw = ideal(0.0);
        hw.detector.misalignment = 0.02;
        let lq =
            entangled_link_quantities(&PhotonSource::single_photon(1e6), &hw, &hw).unwrap();
        assert!((lq.gain - 1.0).abs() < 1e-15);
        assert!((lq.qber - 0.02).abs() < 1e-15);

        let noisy = gys(50.0);
        let lq =
            entangled_link_quantities(&PhotonSource::pdc(0.0, 1e6, None), &noisy, &noisy).unwrap();
        assert!((lq.gain - 8e-7 * 8e-7).abs() < 1e-25);
        assert!((lq.qber - 0.5).abs() < 1e-12);
    }

    #[test]
    fn heralded_distribution_removes_vacuum() {
        let src = PhotonSource::pdc(0.1, 2e7, Some(0.7));
        let d = src.distribution(DEFAULT_N_MAX).unwrap();
        assert_eq!(d.get(0), 0.0);
        assert!((d.sum() - 1.0).abs() < 1e-12);
        let p = src.trigger_probability().unwrap();
        // thermal trigger probability has a closed form: 1 - 1/(1 + eta * mean)
        assert!((p - (1.0 - 1.0 / (1.0 + 0.7 * 0.1))).abs() < 1e-12);
    }

    #[test]
    fn protocol_validation() {
        let mut p = ProtocolSpec::new(ProtocolKind::Bb84DecoyActive);
        let mut errs = Vec::new();
        p.validate("protocol", 0.5, &mut errs);
        assert!(errs.iter().any(|e| e.field == "protocol.decoy_means"));

        p.decoy_means = vec![0.0, 0.6];
        errs.clear();
        p.validate("protocol", 0.5, &mut errs);
        assert!(errs.iter().any(|e| e.field == "protocol.decoy_means[1]"));

        p.decoy_means = vec![0.0, 0.1];
        errs.clear();
        p.validate("protocol", 0.5, &mut errs);
        assert!(errs.is_empty(), "{errs:?}");
    }

    #[test]
    fn detector_validation_names_field() {
        let mut hw = gys(0.0);
        hw.detector.efficiency = -0.1;
        let mut errs = Vec::new();
        hw.validate("hardware", &mut errs);
        assert_eq!(errs[0].field, "hardware.detector.efficiency");
    }
}
