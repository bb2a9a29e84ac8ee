use qkdrate::hardware::{ChannelSpec, DetectorSpec, HardwareConfig, PhotonSource};
use qkdrate::scenarios::sarg04_link_quantities;
use qkdrate::sim::{simulate_counts, AttackSpec, StageProtocol};

fn lossless(misalignment: f64, dark: f64) -> HardwareConfig {
    HardwareConfig::new(
        ChannelSpec::fiber(0.0, 0.0),
        DetectorSpec {
            efficiency: 1.0,
            dark_prob: dark,
            misalignment,
        },
    )
}

#[test]
fn intercept_resend_composes_with_misalignment() {
    let m = 0.04;
    for (i, t) in [0.0, 0.3, 0.7, 1.0].into_iter().enumerate() {
        let c = simulate_counts(
            StageProtocol::Bb84,
            1_000_000,
            &lossless(m, 0.0),
            &PhotonSource::single_photon(1e6),
            &AttackSpec::intercept_resend(t),
            40 + i as u64,
        )
        .unwrap();
        // right-basis interception keeps the misalignment, wrong basis randomizes
        let expected = (1.0 - t) * m + t * (0.25 + 0.5 * m);
        let se = (expected * (1.0 - expected) / c.conclusive as f64).sqrt();
        assert!((c.qber() - expected).abs() < 3.0 * se, "t={t}: {} vs {expected}", c.qber());
    }
}

#[test]
fn sarg04_simulation_matches_link_model() {
    let mut hw = lossless(0.03, 2e-3);
    hw.detector.efficiency = 0.2;
    hw.channel = ChannelSpec::fiber(0.2, 25.0);
    let src = PhotonSource::poisson(0.3, 1e6);
    let n = 4_000_000;
    let c = simulate_counts(StageProtocol::Sarg04, n, &hw, &src, &AttackSpec::NONE, 77).unwrap();
    let lq = sarg04_link_quantities(&src, &hw).unwrap();
    let se_q = (lq.gain * (1.0 - lq.gain) / n as f64).sqrt();
    assert!((c.gain() - lq.gain).abs() < 3.0 * se_q, "gain {} vs {}", c.gain(), lq.gain);
    let se_e = (lq.qber * (1.0 - lq.qber) / c.conclusive as f64).sqrt();
    assert!((c.qber() - lq.qber).abs() < 3.0 * se_e, "qber {} vs {}", c.qber(), lq.qber);
}
