//! Secret-key rate against distance for a preset, written as CSV.
//!
//!     cargo run --example rate_curve -- gys

use qkdrate::scenarios::{preset, sweep, write_curve_csv, SweepSpec, SweepVariable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "standard".into());
    let p = preset(&name)?;
    eprintln!("{}: {}", p.name, p.provenance);

    let grid = SweepSpec::parse_grid("0:200:41")?;
    let points = sweep(&p.scenario, &SweepSpec::new(SweepVariable::Length, grid))?;
    write_curve_csv(&points, std::io::stdout().lock())?;
    Ok(())
}
