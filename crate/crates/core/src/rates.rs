//! Secret-key-rate lower bounds: one-way GLLP-style, two-way with a
//! pluggable privacy-amplification transform, and the entangled-source
//! bound that needs only the overall error rate.

use serde::{Deserialize, Serialize};

use crate::hardware::LinkQuantities;
use crate::numerics::entropy_saturating;

/// The pieces that make up one secret-rate evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RateParts {
    pub gain: f64,
    pub qber: f64,
    pub omega: f64,
    pub e1: f64,
    /// Bits per conclusive event spent on error correction, `f * H2(E)`.
    pub ec_term: f64,
    /// Bits per conclusive event gained from privacy amplification.
    pub pa_term: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub length_km: f64,
    /// Secret bits per emitted pulse, clamped at zero.
    pub secret_rate: f64,
    pub bits_per_second: f64,
    pub parts: RateParts,
    /// Set when the point could not be evaluated (rate recorded as zero).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<String>,
}

/// Mapping applied by each two-way step to
/// `(E, Omega, e1_bit, e1_phase)`.
pub type TwoWayMap = dyn Fn(TwoWayState) -> TwoWayState + Send + Sync;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoWayState {
    pub qber: f64,
    pub omega: f64,
    pub e1_bit: f64,
    pub e1_phase: f64,
}

/// Two-way privacy amplification after `steps` rounds. Each round keeps
/// roughly half the bits; the concrete error-rate transformation is supplied
/// by the caller and defaults to the identity.
pub struct TwoWayTransform {
    pub steps: u32,
    pub survival: f64,
    map: Box<TwoWayMap>,
}

impl TwoWayTransform {
    pub fn identity() -> Self {
        Self {
            steps: 0,
            survival: 1.0,
            map: Box::new(|s| s),
        }
    }

    /// `steps` rounds, survival `2^-steps`, identity mapping.
    pub fn halving(steps: u32) -> Self {
        Self {
            steps,
            survival: 0.5f64.powi(steps as i32),
            map: Box::new(|s| s),
        }
    }

    /// `steps` rounds with survival `2^-steps`, applying `map` once per round.
    pub fn with_map<F>(steps: u32, map: F) -> Self
    where
        F: Fn(TwoWayState) -> TwoWayState + Send + Sync + 'static,
    {
        Self {
            steps,
            survival: 0.5f64.powi(steps as i32),
            map: Box::new(map),
        }
    }

    pub fn apply(&self, state: TwoWayState) -> TwoWayState {
        (0..self.steps).fold(state, |s, _| (self.map)(s))
    }
}

impl std::fmt::Debug for TwoWayTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TwoWayTransform")
            .field("steps", &self.steps)
            .field("survival", &self.survival)
            .finish_non_exhaustive()
    }
}

fn one_way_parts(qber: f64, f: f64, omega: f64, e1: f64) -> (f64, f64) {
    let ec = f * entropy_saturating(qber);
    let pa = omega * (1.0 - entropy_saturating(e1));
    (ec, pa)
}

/// `max(0, q Q (-f H2(E) + Omega (1 - H2(e1))))`.
pub fn rate_one_way(q: f64, lq: &LinkQuantities, f: f64, omega: f64, e1: f64) -> f64 {
    let (ec, pa) = one_way_parts(lq.qber, f, omega, e1);
    (q * lq.gain * (pa - ec)).max(0.0)
}

/// One-way rate with the contributing terms.
pub fn rate_one_way_parts(
    q: f64,
    lq: &LinkQuantities,
    f: f64,
    omega: f64,
    e1: f64,
) -> (f64, RateParts) {
    let (ec, pa) = one_way_parts(lq.qber, f, omega, e1);
    let rate = (q * lq.gain * (pa - ec)).max(0.0);
    (
        rate,
        RateParts {
            gain: lq.gain,
            qber: lq.qber,
            omega,
            e1,
            ec_term: ec,
            pa_term: pa,
        },
    )
}

/// Two-way bound evaluated on the transformed quantities. `omega` and `e1`
/// are the single-photon inputs before the transform; the phase error is
/// taken equal to the bit error before the first step.
pub fn rate_two_way(
    q: f64,
    lq: &LinkQuantities,
    f: f64,
    omega: f64,
    e1: f64,
    tw: &TwoWayTransform,
) -> f64 {
    rate_two_way_parts(q, lq, f, omega, e1, tw).0
}

pub fn rate_two_way_parts(
    q: f64,
    lq: &LinkQuantities,
    f: f64,
    omega: f64,
    e1: f64,
    tw: &TwoWayTransform,
) -> (f64, RateParts) {
    let s = tw.apply(TwoWayState {
        qber: lq.qber,
        omega,
        e1_bit: e1,
        e1_phase: e1,
    });
    let (ec, pa) = one_way_parts(s.qber, f, s.omega, s.e1_phase);
    let rate = (q * tw.survival * lq.gain * (pa - ec)).max(0.0);
    (
        rate,
        RateParts {
            gain: lq.gain,
            qber: s.qber,
            omega: s.omega,
            e1: s.e1_phase,
            ec_term: ec,
            pa_term: pa,
        },
    )
}

/// `max(0, q Q (1 - f H2(E) - H2(E)))`.
pub fn rate_entangled(q: f64, lq: &LinkQuantities, f: f64) -> f64 {
    rate_entangled_parts(q, lq, f).0
}

pub fn rate_entangled_parts(q: f64, lq: &LinkQuantities, f: f64) -> (f64, RateParts) {
    let h = entropy_saturating(lq.qber);
    let ec = f * h;
    let pa = 1.0 - h;
    let rate = (q * lq.gain * (pa - ec)).max(0.0);
    (
        rate,
        RateParts {
            gain: lq.gain,
            qber: lq.qber,
            omega: lq.omega,
            e1: lq.qber,
            ec_term: ec,
            pa_term: pa,
        },
    )
}

pub fn bits_per_second(secret_rate: f64, rep_rate: f64) -> f64 {
    secret_rate * rep_rate
}
