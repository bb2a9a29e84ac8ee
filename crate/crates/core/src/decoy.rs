//! Decoy-state estimation of single-photon quantities, and the
//! time-multiplexed-detector (TMD) statistics inversion used for passive
//! decoy selection.

use std::collections::BTreeMap;
use std::io::BufRead;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardware::{link_quantities, HardwareConfig, PhotonSource, BACKGROUND_ERROR};
use crate::numerics::{binomial, solve_linear, CdfSampler, DistributionVec, Matrix};

/// Smallest subset accepted by [`select_passive_decoys`] by default.
pub const DEFAULT_MIN_SUBSET: usize = 1000;

/// Measured gain and error rate at one intensity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoyObservation {
    pub intensity: f64,
    pub gain: f64,
    pub qber: f64,
    pub pulse_count: u64,
}

impl DecoyObservation {
    fn check(&self, what: &str) -> Result<()> {
        if !(self.intensity >= 0.0) {
            return Err(Error::Domain(format!("{what} intensity {} < 0", self.intensity)));
        }
        if !(0.0..=1.0).contains(&self.gain) || !(0.0..=1.0).contains(&self.qber) {
            return Err(Error::Domain(format!("{what} gain/qber outside [0, 1]")));
        }
        if self.pulse_count == 0 {
            return Err(Error::Domain(format!("{what} has zero pulses")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoyEstimate {
    pub y1_lower: f64,
    pub e1_upper: f64,
    pub omega_lower: f64,
    pub y0_used: f64,
}

/// Vacuum + weak decoy bounds on the single-photon yield and error rate.
///
/// `fallback_y0` is used as the background yield when no vacuum decoy was
/// sent. With several nonzero decoys the weakest one is used.
pub fn estimate_from_decoys(
    signal: &DecoyObservation,
    decoys: &[DecoyObservation],
    fallback_y0: f64,
) -> Result<DecoyEstimate> {
    signal.check("signal")?;
    for d in decoys {
        d.check("decoy")?;
    }
    let mu = signal.intensity;
    let y0 = decoys
        .iter()
        .find(|d| d.intensity == 0.0)
        .map_or(fallback_y0, |d| d.gain);
    let weak = decoys
        .iter()
        .filter(|d| d.intensity > 0.0 && d.intensity < mu)
        .min_by(|a, b| a.intensity.total_cmp(&b.intensity))
        .ok_or_else(|| {
            Error::Domain(format!("need a nonzero decoy intensity below signal {mu}"))
        })?;
    let nu = weak.intensity;

    let signal_scaled = signal.gain * mu.exp();
    let weak_scaled = weak.gain * nu.exp();
    let tolerance = 1e-9 * signal_scaled.max(y0).max(f64::MIN_POSITIVE);

    // Q(x) e^x = sum_n Y_n x^n / n! is convex with value Y0 at zero
    let chord = y0 + (nu / mu) * (signal_scaled - y0);
    if weak_scaled > chord + tolerance {
        return Err(Error::InconsistentObservation(format!(
            "decoy gain {} at intensity {nu} is not reachable by any nonnegative yields \
             given signal gain {} at {mu}",
            weak.gain, signal.gain
        )));
    }

    let y1 = mu / (mu * nu - nu * nu)
        * (weak_scaled - signal_scaled * nu * nu / (mu * mu) - (mu * mu - nu * nu) / (mu * mu) * y0);
    if y1 < -tolerance {
        return Err(Error::InconsistentObservation(format!(
            "single-photon yield lower bound {y1:e} is negative"
        )));
    }
    let y1_lower = y1.clamp(0.0, 1.0);
    if y1_lower == 0.0 {
        return Ok(DecoyEstimate {
            y1_lower,
            e1_upper: BACKGROUND_ERROR,
            omega_lower: 0.0,
            y0_used: y0,
        });
    }
    let e1 = (weak.qber * weak_scaled - BACKGROUND_ERROR * y0) / (y1_lower * nu);
    let omega = if signal.gain > 0.0 {
        mu * (-mu).exp() * y1_lower / signal.gain
    } else {
        0.0
    };
    Ok(DecoyEstimate {
        y1_lower,
        e1_upper: e1.clamp(0.0, BACKGROUND_ERROR),
        omega_lower: omega.clamp(0.0, 1.0),
        y0_used: y0,
    })
}

/// Observations the hardware model predicts for a Poisson source at each
/// intensity, in the asymptotic limit.
pub fn modeled_observations(
    intensities: &[f64],
    hw: &HardwareConfig,
    rep_rate: f64,
) -> Result<Vec<DecoyObservation>> {
    intensities
        .iter()
        .map(|&x| {
            let lq = link_quantities(&PhotonSource::poisson(x, rep_rate), hw)?;
            Ok(DecoyObservation {
                intensity: x,
                gain: lq.gain,
                qber: lq.qber,
                pulse_count: u64::MAX,
            })
        })
        .collect()
}

/// Time-multiplexed detector model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TmdConfig {
    pub bins: usize,
    pub tmd_efficiency: f64,
    pub n_max: usize,
}

impl Default for TmdConfig {
    fn default() -> Self {
        Self {
            bins: 8,
            tmd_efficiency: 0.7,
            n_max: 8,
        }
    }
}

impl TmdConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bins < 2 || !self.bins.is_power_of_two() || self.bins > 64 {
            return Err(Error::Domain(format!(
                "bins = {} must be a power of two in [2, 64]",
                self.bins
            )));
        }
        if !(self.tmd_efficiency > 0.0 && self.tmd_efficiency <= 1.0) {
            return Err(Error::Domain(format!(
                "tmd efficiency {} outside (0, 1]",
                self.tmd_efficiency
            )));
        }
        Ok(())
    }
}

/// Binomial loss matrix: entry `(k, n)` is the probability that `k` of `n`
/// photons survive.
pub fn loss_matrix(eta: f64, n_max: usize) -> Result<Matrix> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Domain(format!("efficiency {eta} outside (0, 1]")));
    }
    let mut m = Matrix::zeros(n_max + 1, n_max + 1);
    for n in 0..=n_max {
        for k in 0..=n {
            m[(k, n)] = binomial(n, k) * eta.powi(k as i32) * (1.0 - eta).powi((n - k) as i32);
        }
    }
    Ok(m)
}

/// Occupancy matrix: entry `(k, n)` is the probability that `n` photons,
/// each routed uniformly to one of the bins, occupy exactly `k` bins.
pub fn convolution_matrix(cfg: &TmdConfig) -> Result<Matrix> {
    cfg.validate()?;
    let size = cfg.n_max + 1;
    let b = cfg.bins as f64;
    let mut m = Matrix::zeros(size, size);
    // occupancy[k] for the current photon count
    let mut occupancy = vec![0.0; size];
    occupancy[0] = 1.0;
    for n in 0..size {
        for (k, p) in occupancy.iter().enumerate() {
            m[(k, n)] = *p;
        }
        let mut next = vec![0.0; size];
        for k in 0..size {
            let p = occupancy[k];
            if p == 0.0 {
                continue;
            }
            let kf = k as f64;
            next[k] += p * kf / b;
            if k + 1 < size && k < cfg.bins {
                next[k + 1] += p * (b - kf) / b;
            }
        }
        occupancy = next;
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inversion {
    pub distribution: DistributionVec,
    /// `|| C L p - measured ||_1` for the returned distribution.
    pub residual_l1: f64,
    /// Raw solution before clipping.
    pub unclipped: DistributionVec,
}

/// Recover the sent photon-number statistics from measured click statistics
/// by solving `(C L) p = measured`, then clipping negatives and
/// renormalizing.
pub fn invert_statistics(measured: &DistributionVec, cfg: &TmdConfig) -> Result<Inversion> {
    if measured.len() != cfg.n_max + 1 {
        return Err(Error::Dimension(format!(
            "measured statistics have {} entries, config expects {}",
            measured.len(),
            cfg.n_max + 1
        )));
    }
    let system = convolution_matrix(cfg)?.matmul(&loss_matrix(cfg.tmd_efficiency, cfg.n_max)?)?;
    let raw = solve_linear(&system, measured)?;
    let distribution = raw.clip_and_normalize()?;
    let predicted = system.apply(distribution.entries())?;
    let residual_l1 = predicted
        .iter()
        .zip(measured.entries())
        .map(|(a, b)| (a - b).abs())
        .sum();
    Ok(Inversion {
        distribution,
        residual_l1,
        unclipped: raw,
    })
}

/// Forward model: click statistics a TMD records for sent statistics `sent`.
pub fn forward_statistics(sent: &DistributionVec, cfg: &TmdConfig) -> Result<DistributionVec> {
    let system = convolution_matrix(cfg)?.matmul(&loss_matrix(cfg.tmd_efficiency, cfg.n_max)?)?;
    Ok(DistributionVec::from_raw(system.apply(sent.entries())?))
}

/// Sample click counts of a TMD fed with photon numbers drawn from `sent`.
pub fn simulate_tmd_clicks<R: Rng>(
    sent: &DistributionVec,
    cfg: &TmdConfig,
    count: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    cfg.validate()?;
    let sampler = CdfSampler::new(sent);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let n = sampler.sample(rng.gen::<f64>());
        let mut occupied: u64 = 0;
        for _ in 0..n {
            if rng.gen::<f64>() < cfg.tmd_efficiency {
                occupied |= 1 << rng.gen_range(0..cfg.bins as u32);
            }
        }
        out.push(occupied.count_ones() as usize);
    }
    Ok(out)
}

/// Per-click-count probability of labeling a record as decoy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoyWeights {
    pub per_click: BTreeMap<usize, f64>,
    pub default: f64,
}

impl DecoyWeights {
    pub fn uniform(p: f64) -> Self {
        Self {
            per_click: BTreeMap::new(),
            default: p,
        }
    }

    pub fn weight(&self, clicks: usize) -> f64 {
        self.per_click.get(&clicks).copied().unwrap_or(self.default)
    }

    /// Parse `"0:0.1,1:0.9,*:0.5"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut w = Self::uniform(0.5);
        for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (k, v) = item
                .split_once(':')
                .ok_or_else(|| Error::Domain(format!("weight entry '{item}' is not k:p")))?;
            let p: f64 = v
                .parse()
                .map_err(|_| Error::Domain(format!("bad probability '{v}'")))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Domain(format!("weight {p} outside [0, 1]")));
            }
            if k == "*" {
                w.default = p;
            } else {
                let k: usize = k
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad click count '{k}'")))?;
                w.per_click.insert(k, p);
            }
        }
        Ok(w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetLabel {
    Signal,
    Decoy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassiveSelection {
    pub signal_stats: DistributionVec,
    pub decoy_stats: DistributionVec,
    pub labels: Vec<SubsetLabel>,
}

/// Split click records into signal and decoy subsets after the fact.
///
/// Each record is labeled decoy independently with probability
/// `weights.weight(clicks)`. The records themselves are not touched.
pub fn select_passive_decoys<R: Rng>(
    click_records: &[usize],
    weights: &DecoyWeights,
    min_subset: usize,
    rng: &mut R,
) -> Result<PassiveSelection> {
    if click_records.is_empty() {
        return Err(Error::EmptySubset {
            subset: "records",
            count: 0,
            minimum: 1,
        });
    }
    let n_max = click_records.iter().copied().max().unwrap_or(0);
    let labels: Vec<SubsetLabel> = click_records
        .iter()
        .map(|&c| {
            if rng.gen::<f64>() < weights.weight(c) {
                SubsetLabel::Decoy
            } else {
                SubsetLabel::Signal
            }
        })
        .collect();
    let subset = |label| -> Vec<usize> {
        click_records
            .iter()
            .zip(&labels)
            .filter(|(_, l)| **l == label)
            .map(|(c, _)| *c)
            .collect()
    };
    let signal = subset(SubsetLabel::Signal);
    let decoy = subset(SubsetLabel::Decoy);
    for (name, set) in [("signal", &signal), ("decoy", &decoy)] {
        if set.len() < min_subset {
            return Err(Error::EmptySubset {
                subset: name,
                count: set.len(),
                minimum: min_subset,
            });
        }
    }
    Ok(PassiveSelection {
        signal_stats: DistributionVec::histogram(&signal, n_max),
        decoy_stats: DistributionVec::histogram(&decoy, n_max),
        labels,
    })
}

/// Read click counts, one nonnegative integer per line. Blank lines and
/// lines starting with `#` are skipped.
pub fn read_click_records<R: BufRead>(reader: R) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Domain(format!("read error: {e}")))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(t.parse().map_err(|_| {
            Error::Domain(format!("line {}: '{t}' is not a click count", lineno + 1))
        })?);
    }
    Ok(out)
}

/// Histogram of click records padded or truncated to `0..=n_max`.
pub fn click_histogram(records: &[usize], n_max: usize) -> DistributionVec {
    DistributionVec::histogram(records, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardware::{yield_n, ChannelSpec, DetectorSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

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

    #[test]
    fn gys_estimate_is_tight_and_conservative() {
        let hw = gys(20.0);
        let obs = modeled_observations(&[0.48, 0.0, 0.05], &hw, 1e6).unwrap();
        let est = estimate_from_decoys(&obs[0], &obs[1..], 0.0).unwrap();
        let truth = link_quantities(&PhotonSource::poisson(0.48, 1e6), &hw).unwrap();
        let y1 = yield_n(&hw, 1);
        assert!(est.y1_lower <= y1 && est.y1_lower >= 0.9 * y1, "{} vs {y1}", est.y1_lower);
        assert!(
            est.e1_upper >= truth.single_error && est.e1_upper <= 1.15 * truth.single_error,
            "{} vs {}",
            est.e1_upper,
            truth.single_error
        );
        assert_eq!(est.y0_used, 8e-7);
    }

    #[test]
    fn lossless_estimate_matches_omega() {
        let hw = HardwareConfig::new(
            ChannelSpec::fiber(0.0, 0.0),
            DetectorSpec {
                efficiency: 1.0,
                dark_prob: 0.0,
                misalignment: 0.0,
            },
        );
        let obs = modeled_observations(&[0.5, 0.1], &hw, 1e6).unwrap();
        let est = estimate_from_decoys(&obs[0], &obs[1..], 0.0).unwrap();
        assert!(est.y1_lower <= 1.0);
        let truth = link_quantities(&PhotonSource::poisson(0.5, 1e6), &hw).unwrap();
        assert!(est.omega_lower <= truth.omega);
        assert!(est.omega_lower > 0.98 * truth.omega);
    }

    #[test]
    fn equal_gains_are_inconsistent() {
        let sig = DecoyObservation {
            intensity: 0.5,
            gain: 0.02,
            qber: 0.03,
            pulse_count: 1_000_000,
        };
        let dec = DecoyObservation {
            intensity: 0.05,
            ..sig.clone()
        };
        let vac = DecoyObservation {
            intensity: 0.0,
            gain: 1e-6,
            qber: 0.5,
            pulse_count: 1_000_000,
        };
        assert!(matches!(
            estimate_from_decoys(&sig, &[vac, dec], 1e-6),
            Err(Error::InconsistentObservation(_))
        ));
    }

    #[test]
    fn missing_weak_decoy_is_rejected() {
        let sig = DecoyObservation {
            intensity: 0.5,
            gain: 0.02,
            qber: 0.03,
            pulse_count: 10,
        };
        let vac = DecoyObservation {
            intensity: 0.0,
            gain: 1e-6,
            qber: 0.5,
            pulse_count: 10,
        };
        assert!(estimate_from_decoys(&sig, &[vac], 1e-6).is_err());
    }

    #[test]
    fn loss_matrix_examples() {
        assert_eq!(loss_matrix(1.0, 5).unwrap(), Matrix::identity(6));
        let l = loss_matrix(0.5, 4).unwrap();
        assert_eq!(l.column(1), vec![0.5, 0.5, 0.0, 0.0, 0.0]);
        assert_eq!(l.column(2), vec![0.25, 0.5, 0.25, 0.0, 0.0]);
        for s in l.column_sums() {
            assert!((s - 1.0).abs() < 1e-12);
        }
        assert!(loss_matrix(0.0, 3).is_err());
    }

    /// Brute-force occupancy: enumerate every routing of n photons.
    fn occupancy_by_enumeration(bins: usize, n: usize) -> Vec<f64> {
        let mut counts = vec![0usize; n + 1];
        let total = bins.pow(n as u32);
        for routing in 0..total {
            let mut r = routing;
            let mut used = 0u64;
            for _ in 0..n {
                used |= 1 << (r % bins);
                r /= bins;
            }
            counts[used.count_ones() as usize] += 1;
        }
        counts.iter().map(|c| *c as f64 / total as f64).collect()
    }

    #[test]
    fn convolution_matrix_examples() {
        let cfg = TmdConfig {
            bins: 2,
            tmd_efficiency: 1.0,
            n_max: 2,
        };
        let c = convolution_matrix(&cfg).unwrap();
        assert_eq!(c.column(0), vec![1.0, 0.0, 0.0]);
        assert_eq!(c.column(1), vec![0.0, 1.0, 0.0]);
        assert_eq!(c.column(2), vec![0.0, 0.5, 0.5]);

        let cfg = TmdConfig {
            bins: 4,
            tmd_efficiency: 1.0,
            n_max: 6,
        };
        let c = convolution_matrix(&cfg).unwrap();
        for n in 0..=6 {
            let brute = occupancy_by_enumeration(4, n);
            for (k, p) in brute.iter().enumerate() {
                assert!((c[(k, n)] - p).abs() < 1e-12, "k={k} n={n}");
            }
        }
        for s in c.column_sums() {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn inversion_near_identity() {
        let cfg = TmdConfig {
            bins: 64,
            tmd_efficiency: 1.0,
            n_max: 4,
        };
        let p = DistributionVec::new(vec![0.4, 0.3, 0.2, 0.07, 0.03]).unwrap();
        let measured = forward_statistics(&p, &cfg).unwrap();
        let inv = invert_statistics(&measured, &cfg).unwrap();
        for (a, b) in inv.distribution.entries().iter().zip(p.entries()) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn inversion_round_trip_poisson() {
        let cfg = TmdConfig::default();
        let p = DistributionVec::poisson(0.5, cfg.n_max).unwrap();
        let measured = forward_statistics(&p, &cfg).unwrap();
        let inv = invert_statistics(&measured, &cfg).unwrap();
        // truncated Poisson sums to 1 - O(1e-9); renormalization rescales it
        let p = p.normalized().unwrap();
        for (a, b) in inv.distribution.entries().iter().zip(p.entries()) {
            assert!((a - b).abs() < 1e-6);
        }
        assert!(inv.residual_l1 < 1e-6);
    }

    #[test]
    fn inversion_survives_perturbation() {
        let cfg = TmdConfig::default();
        let p = DistributionVec::poisson(0.5, cfg.n_max).unwrap();
        let clean = forward_statistics(&p, &cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let noisy: Vec<f64> = clean
            .entries()
            .iter()
            .map(|v| (v + rng.gen_range(-1e-3..1e-3)).max(0.0))
            .collect();
        let noisy = DistributionVec::from_raw(noisy).normalized().unwrap();
        let inv = invert_statistics(&noisy, &cfg).unwrap();
        assert!(inv.distribution.entries().iter().all(|v| *v >= 0.0));
        assert!((inv.distribution.sum() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn too_few_bins_is_singular() {
        let cfg = TmdConfig {
            bins: 2,
            tmd_efficiency: 0.7,
            n_max: 4,
        };
        let measured = DistributionVec::from_raw(vec![0.2; 5]);
        assert!(matches!(
            invert_statistics(&measured, &cfg),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn tmd_config_rejects_odd_bins() {
        let cfg = TmdConfig {
            bins: 6,
            ..TmdConfig::default()
        };
        assert!(convolution_matrix(&cfg).is_err());
    }

    #[test]
    fn simulated_clicks_match_forward_model() {
        let cfg = TmdConfig::default();
        let p = DistributionVec::poisson(0.8, cfg.n_max).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let clicks = simulate_tmd_clicks(&p, &cfg, 400_000, &mut rng).unwrap();
        let hist = click_histogram(&clicks, cfg.n_max);
        let expected = forward_statistics(&p, &cfg).unwrap();
        for (k, (h, e)) in hist.entries().iter().zip(expected.entries()).enumerate() {
            let se = (e * (1.0 - e) / 400_000.0).sqrt().max(1e-9);
            assert!((h - e).abs() < 5.0 * se, "k={k}: {h} vs {e}");
        }
    }

    #[test]
    fn uniform_split_reproduces_global_histogram() {
        let cfg = TmdConfig::default();
        let p = DistributionVec::poisson(0.5, cfg.n_max).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let clicks = simulate_tmd_clicks(&p, &cfg, 200_000, &mut rng).unwrap();
        let sel =
            select_passive_decoys(&clicks, &DecoyWeights::uniform(0.5), DEFAULT_MIN_SUBSET, &mut rng)
                .unwrap();
        let n_max = *clicks.iter().max().unwrap();
        let global = click_histogram(&clicks, n_max);
        let n_sig = sel.labels.iter().filter(|l| **l == SubsetLabel::Signal).count() as f64;
        let n_dec = clicks.len() as f64 - n_sig;
        for k in 0..=n_max {
            let g = global.get(k);
            for (stats, n) in [(&sel.signal_stats, n_sig), (&sel.decoy_stats, n_dec)] {
                let se = (g * (1.0 - g) / n).sqrt().max(1e-9);
                assert!((stats.get(k) - g).abs() < 4.0 * se);
            }
        }
    }

    #[test]
    fn biased_weights_shift_decoy_mean() {
        let cfg = TmdConfig::default();
        let p = DistributionVec::poisson(0.5, cfg.n_max).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let clicks = simulate_tmd_clicks(&p, &cfg, 100_000, &mut rng).unwrap();
        let weights = DecoyWeights::parse("0:0.1,1:0.9,*:0.5").unwrap();
        let sel = select_passive_decoys(&clicks, &weights, DEFAULT_MIN_SUBSET, &mut rng).unwrap();
        assert!(sel.decoy_stats.mean() > sel.signal_stats.mean());
    }

    #[test]
    fn zero_weights_leave_decoy_subset_empty() {
        let clicks = vec![1usize; 5000];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let err = select_passive_decoys(&clicks, &DecoyWeights::uniform(0.0), 1000, &mut rng)
            .unwrap_err();
        assert!(matches!(err, Error::EmptySubset { subset: "decoy", .. }));
    }

    #[test]
    fn reads_click_stream() {
        let text = "# tmd\n0\n1\n\n3\n";
        assert_eq!(read_click_records(text.as_bytes()).unwrap(), vec![0, 1, 3]);
        assert!(read_click_records("x\n".as_bytes()).is_err());
    }
}
