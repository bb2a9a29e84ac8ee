//! Best mean photon number per distance, with and without decoy states.

use qkdrate::hardware::ProtocolKind;
use qkdrate::scenarios::{optimize_mean_photons, preset};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let decoy = preset("gys")?.scenario;
    let plain = decoy.with_protocol(ProtocolKind::Bb84);

    println!("length_km,mu_decoy,rate_decoy,mu_plain,rate_plain");
    for length in [0.0, 10.0, 20.0, 40.0, 60.0, 80.0, 100.0] {
        let d = optimize_mean_photons(&decoy, length)?;
        let p = optimize_mean_photons(&plain, length)?;
        println!(
            "{length},{:.4},{:.3e},{:.4},{:.3e}",
            d.mean_photons, d.point.secret_rate, p.mean_photons, p.point.secret_rate
        );
    }
    Ok(())
}
