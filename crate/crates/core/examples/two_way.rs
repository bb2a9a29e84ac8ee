//! Two-way post-processing with a caller-supplied error map. Each step keeps
//! half the bits; here the map models bit-error suppression by a B-step
//! parity check (E -> E^2 / (E^2 + (1-E)^2)) while the phase error grows.
//! On this low-QBER link the halving costs more than the error reduction buys.

use qkdrate::hardware::link_quantities;
use qkdrate::rates::{rate_one_way, rate_two_way, TwoWayState, TwoWayTransform};
use qkdrate::scenarios::preset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = preset("gys")?.scenario.with_protocol(qkdrate::ProtocolKind::Bb84DecoyPassive);
    let step = |st: TwoWayState| {
        let e = st.qber;
        let kept = e * e + (1.0 - e) * (1.0 - e);
        TwoWayState {
            qber: e * e / kept,
            e1_bit: st.e1_bit * st.e1_bit / (st.e1_bit.powi(2) + (1.0 - st.e1_bit).powi(2)),
            e1_phase: (2.0 * st.e1_phase * (1.0 - st.e1_phase)).min(0.5),
            ..st
        }
    };
    let source = qkdrate::PhotonSource::poisson(0.3, 1e6);
    println!("length_km,one_way,two_way_1,two_way_2");
    for i in 0..=16 {
        let l = 10.0 * i as f64;
        let lq = link_quantities(&source, &s.hardware.with_length(l))?;
        let one = rate_one_way(1.0, &lq, 1.22, lq.omega, lq.single_error);
        let r1 = rate_two_way(1.0, &lq, 1.22, lq.omega, lq.single_error, &TwoWayTransform::with_map(1, step));
        let r2 = rate_two_way(1.0, &lq, 1.22, lq.omega, lq.single_error, &TwoWayTransform::with_map(2, step));
        println!("{l},{one:.4e},{r1:.4e},{r2:.4e}");
    }
    Ok(())
}
