//! BB84 quantum stage with a growing intercept-resend fraction, then a
//! one-time-pad round trip with the sifted key.

use qkdrate::hardware::{ChannelSpec, DetectorSpec, HardwareConfig, PhotonSource};
use qkdrate::sim::{one_time_pad, simulate_bb84, AttackSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let hw = HardwareConfig::new(
        ChannelSpec::fiber(0.21, 10.0),
        DetectorSpec {
            efficiency: 0.5,
            dark_prob: 1e-6,
            misalignment: 0.01,
        },
    );
    let source = PhotonSource::single_photon(1e6);

    println!("fraction,qber,sift_fraction");
    for fraction in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let t = simulate_bb84(200_000, &hw, &source, &AttackSpec::intercept_resend(fraction), 1)?;
        println!("{fraction},{:.4},{:.4}", t.qber, t.sift_fraction);
    }

    let t = simulate_bb84(10_000, &hw, &source, &AttackSpec::NONE, 2)?;
    let message: Vec<u8> = b"qkd".iter().flat_map(|b| (0..8).rev().map(move |i| (b >> i) & 1)).collect();
    let cipher = one_time_pad(&message, &t.sifted_key_a)?;
    // the receiver decrypts with its own copy; residual errors show up as flipped bits
    let plain = one_time_pad(&cipher, &t.sifted_key_b)?;
    let flips = plain.iter().zip(&message).filter(|(a, b)| a != b).count();
    println!("{} key bits, {flips} of {} message bits flipped", t.sifted_key_a.len(), message.len());
    Ok(())
}
