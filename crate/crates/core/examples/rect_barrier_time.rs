//! Traversal time of a rectangular barrier: opaque limit, and collapse as the
//! barrier shrinks to a delta of fixed strength.

use delta_floquet::analysis::{opaque_tau, tau_bl_rect, RectBarrierParams};
use delta_floquet::Units;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let units = Units::default();
    println!("thick barriers, V = 10, E = 2.5");
    for d in [0.5, 1.0, 2.0, 4.0] {
        let r = RectBarrierParams::new(units, 10.0, d, 2.5)?;
        println!(
            "  d {d:<4} kappa*d {:>6.2}  tau {:.6}  opaque {:.6}  m d/(hbar kappa) {:.6}",
            r.kappa() * d,
            tau_bl_rect(&r),
            opaque_tau(&r),
            r.tau_bl()
        );
    }
    println!("delta limit, V = 10/d");
    for d in [1.0, 0.1, 0.01, 0.001] {
        let r = RectBarrierParams::new(units, 10.0 / d, d, 2.5)?;
        println!("  d {d:<6} tau {:.4e}", tau_bl_rect(&r));
    }
    let r = RectBarrierParams::new(units, 10.0, 1.0, 2.5)?;
    for omega in [0.1, 1.0, 10.0] {
        println!(
            "tanh(omega tau_BL) at omega {omega}: {:.6}",
            r.high_frequency_asymmetry(omega)
        );
    }
    Ok(())
}
