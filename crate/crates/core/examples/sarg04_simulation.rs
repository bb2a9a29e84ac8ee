//! SARG04 against BB84 on the same hardware: conclusive fraction and QBER
//! with and without an intercept-resend attacker.

use qkdrate::hardware::{ChannelSpec, DetectorSpec, HardwareConfig, PhotonSource};
use qkdrate::sim::{simulate_counts, AttackSpec, StageProtocol};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let hw = HardwareConfig::new(
        ChannelSpec::fiber(0.0, 0.0),
        DetectorSpec {
            efficiency: 1.0,
            dark_prob: 0.0,
            misalignment: 0.0,
        },
    );
    let src = PhotonSource::single_photon(1e6);
    println!("protocol,attack,conclusive_fraction,qber");
    for (name, proto) in [("bb84", StageProtocol::Bb84), ("sarg04", StageProtocol::Sarg04)] {
        for (label, attack) in [("none", AttackSpec::NONE), ("intercept_resend", AttackSpec::intercept_resend(1.0))] {
            let c = simulate_counts(proto, 1_000_000, &hw, &src, &attack, 7)?;
            println!("{name},{label},{:.4},{:.4}", c.sift_fraction(), c.qber());
        }
    }
    Ok(())
}
