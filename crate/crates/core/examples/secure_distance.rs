//! How far the secure distance moves when one detector parameter improves.

use qkdrate::scenarios::{max_secure_distance, preset, Scenario, DEFAULT_RATE_FLOOR};

fn distance(s: &Scenario) -> f64 {
    max_secure_distance(s, DEFAULT_RATE_FLOOR).expect("secure at zero length")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = preset("standard")?.scenario;
    println!("standard: {:.1} km", distance(&base));

    let vary = |what: &str, before: &dyn Fn(&mut Scenario), after: &dyn Fn(&mut Scenario)| {
        let (mut a, mut b) = (base.clone(), base.clone());
        before(&mut a);
        after(&mut b);
        let (da, db) = (distance(&a), distance(&b));
        println!("{what:<24} {da:6.1} -> {db:6.1} km  ({:+.1})", db - da);
    };
    vary(
        "p_dark 1.7e-6 -> 1.7e-7",
        &|_| {},
        &|s| s.hardware.detector.dark_prob = 1.7e-7,
    );
    vary(
        "e_det 0.03 -> 0.02",
        &|s| s.hardware.detector.misalignment = 0.03,
        &|s| s.hardware.detector.misalignment = 0.02,
    );
    vary(
        "eta_det 0.10 -> 0.60",
        &|s| s.hardware.detector.efficiency = 0.10,
        &|s| s.hardware.detector.efficiency = 0.60,
    );
    Ok(())
}
