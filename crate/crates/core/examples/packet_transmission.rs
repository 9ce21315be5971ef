//! Packet transmission against Ω: energy-averaged Floquet transmission next to
//! the phase-averaged propagation.
//!
//! ```text
//! cargo run --release --example packet_transmission -- 1 12 8
//! ```

use delta_floquet::analysis::compare_with_dynamics;
use delta_floquet::tdse::{default_levels, default_t_final, PacketSpec, PropagationOptions, WellSpec};
use delta_floquet::{BarrierParams, Units};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (lo, hi, points) = match args.as_slice() {
        [] => (1.0, 12.0, 6),
        [a, b, n] => (*a, *b, *n as usize),
        _ => return Err("usage: packet_transmission [omega_min omega_max points]".into()),
    };
    let units = Units::default();
    let length = 40.0;
    let template = BarrierParams::natural(5.0, 0.9, 1.0, 5.0)?;
    let packet = PacketSpec::left_half_at_energy(&WellSpec::new(length, 2)?, 5.0, units)?;

    println!(
        "{:>7} {:>10} {:>10} {:>9} {:>7}",
        "omega", "P_fs", "P_tdse", "rel_dev", "phases"
    );
    for i in 0..points {
        let omega = lo + (hi - lo) * i as f64 / (points.max(2) - 1) as f64;
        let p = template.with_omega(omega)?;
        let well = WellSpec::new(length, default_levels(length, &packet, &p))?;
        let t_final = default_t_final(&well, &packet, units);
        let c = compare_with_dynamics(&p, &well, &packet, omega, t_final, &PropagationOptions::default(), None)?;
        println!(
            "{omega:>7.3} {:>10.6} {:>10.6} {:>9.2e} {:>7}",
            c.p_fs,
            c.p_tdse,
            c.relative_deviation(),
            c.phases
        );
    }
    Ok(())
}
