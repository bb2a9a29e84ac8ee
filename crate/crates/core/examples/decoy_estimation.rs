//! Vacuum + weak decoy bounds compared with the true single-photon yield and
//! error rate of the channel model.

use qkdrate::decoy::{estimate_from_decoys, modeled_observations};
use qkdrate::hardware::link_quantities;
use qkdrate::scenarios::preset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = preset("gys")?.scenario;
    let mu = s.source.mean_photons;
    println!("length_km,y1_true,y1_lower,e1_true,e1_upper,omega_true,omega_lower");
    for length in [0.0, 25.0, 50.0, 75.0, 100.0, 125.0] {
        let hw = s.hardware.with_length(length);
        let obs = modeled_observations(&[mu, 0.0, 0.05], &hw, s.source.rep_rate)?;
        let est = estimate_from_decoys(&obs[0], &obs[1..], hw.detector.dark_prob)?;
        let truth = link_quantities(&s.source, &hw)?;
        println!(
            "{length},{:.4e},{:.4e},{:.4},{:.4},{:.4},{:.4}",
            truth.yields.get(1),
            est.y1_lower,
            truth.single_error,
            est.e1_upper,
            truth.omega,
            est.omega_lower
        );
    }
    Ok(())
}
