//! Decoy BB84, plain BB84, SARG04 and the entangled pair source on the same
//! detectors: rate against distance and the loss each one tolerates.

use qkdrate::scenarios::{preset, tolerable_loss_db};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let decoy = preset("gys")?.scenario;
    let plain = decoy.with_protocol(qkdrate::ProtocolKind::Bb84);
    let sarg = preset("gys-sarg04")?.scenario;
    let ent = preset("gys-entangled")?.scenario;
    let all = [("decoy_bb84", &decoy), ("bb84", &plain), ("sarg04", &sarg), ("entangled", &ent)];

    print!("length_km");
    for (name, _) in &all {
        print!(",{name}");
    }
    println!();
    for i in 0..=35 {
        let length = 10.0 * i as f64;
        print!("{length}");
        for (_, s) in &all {
            print!(",{:.4e}", s.with_length(length).evaluate().secret_rate);
        }
        println!();
    }
    for (name, s) in &all {
        match tolerable_loss_db(s) {
            Ok(db) => eprintln!("{name}: tolerates {db:.1} dB"),
            Err(e) => eprintln!("{name}: {e}"),
        }
    }
    Ok(())
}
