use proptest::prelude::*;

use qkdrate::hardware::{link_quantities, yield_n, ChannelSpec, DetectorSpec, HardwareConfig, PhotonSource};
use qkdrate::numerics::{binary_entropy, DistributionVec};
use qkdrate::rates::{rate_one_way, rate_two_way, TwoWayTransform};
use qkdrate::scenarios::{preset, sweep, SweepSpec, SweepVariable};
use qkdrate::service::{rate_curve, to_json_bytes, RateRequest};
use qkdrate::LinkQuantities;

fn hw(eta: f64, dark: f64, e: f64, alpha: f64, length: f64) -> HardwareConfig {
    HardwareConfig::new(
        ChannelSpec::fiber(alpha, length),
        DetectorSpec {
            efficiency: eta,
            dark_prob: dark,
            misalignment: e,
        },
    )
}

proptest! {
    #[test]
    fn zero_step_two_way_equals_one_way(
        gain in 1e-6f64..1.0, qber in 0.0f64..0.5, omega in 0.0f64..1.0,
        e1 in 0.0f64..0.5, f in 1.0f64..1.5, q in 0.1f64..1.0,
    ) {
        let lq = LinkQuantities {
            gain, qber, single_gain: gain * omega, single_error: e1, omega,
            yields: DistributionVec::from_raw(vec![]),
        };
        prop_assert_eq!(
            rate_two_way(q, &lq, f, omega, e1, &TwoWayTransform::identity()),
            rate_one_way(q, &lq, f, omega, e1)
        );
    }

    #[test]
    fn entropy_symmetric_and_bounded(x in 0.0f64..=1.0) {
        let h = binary_entropy(x).unwrap();
        prop_assert!((0.0..=1.0).contains(&h));
        prop_assert!((h - binary_entropy(1.0 - x).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn yields_grow_with_photon_number(
        eta in 0.01f64..1.0, dark in 0.0f64..1e-3, length in 0.0f64..200.0,
    ) {
        let h = hw(eta, dark, 0.03, 0.21, length);
        for n in 0..20 {
            prop_assert!(yield_n(&h, n + 1) >= yield_n(&h, n));
        }
    }

    #[test]
    fn gain_falls_with_length(
        eta in 0.01f64..1.0, dark in 0.0f64..1e-4, mu in 0.01f64..1.0, l in 0.0f64..200.0,
    ) {
        let src = PhotonSource::poisson(mu, 1e6);
        let near = link_quantities(&src, &hw(eta, dark, 0.03, 0.21, l)).unwrap();
        let far = link_quantities(&src, &hw(eta, dark, 0.03, 0.21, l + 10.0)).unwrap();
        prop_assert!(far.gain <= near.gain);
        prop_assert!(far.qber >= near.qber - 1e-15);
    }

    #[test]
    fn sweep_reproducible_from_serialized_request(lo in 0.0f64..100.0, n in 1usize..20) {
        let s = preset("standard").unwrap().scenario;
        let grid: Vec<f64> = (0..n).map(|i| lo + 5.0 * i as f64).collect();
        let req = RateRequest { scenario: s, sweep: Some(SweepSpec::new(SweepVariable::Length, grid)) };
        let text = serde_json::to_string(&req).unwrap();
        let back: RateRequest = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(
            to_json_bytes(&rate_curve(&req).unwrap()),
            to_json_bytes(&rate_curve(&back).unwrap())
        );
    }
}

#[test]
fn sweep_order_follows_grid() {
    let s = preset("gys").unwrap().scenario;
    let grid = vec![0.0, 10.0, 20.0, 40.0, 80.0];
    let pts = sweep(&s, &SweepSpec::new(SweepVariable::Length, grid.clone())).unwrap();
    let lengths: Vec<f64> = pts.iter().map(|p| p.length_km).collect();
    assert_eq!(lengths, grid);
}
