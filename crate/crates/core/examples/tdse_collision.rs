//! A Gaussian packet hits the oscillating barrier in a box; prints the
//! probability on the right as the collision unfolds.

use delta_floquet::tdse::{
    crossing_time, default_levels, default_t_final, find_plateau, propagate, PacketSpec, PlateauOptions,
    PropagationOptions, WellSpec,
};
use delta_floquet::{BarrierParams, Units};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let units = Units::default();
    let length = 40.0;
    let params = BarrierParams::natural(5.0, 0.9, 5.0, 5.0)?;
    let packet = PacketSpec::left_half_at_energy(&WellSpec::new(length, 2)?, 5.0, units)?;
    let well = WellSpec::new(length, default_levels(length, &packet, &params))?;
    let t_final = default_t_final(&well, &packet, units);

    let run = propagate(&well, &packet, &params, t_final, &PropagationOptions::default())?;
    let stride = (run.history.len() / 20).max(1);
    for s in run.history.iter().step_by(stride) {
        println!("t {:>7.4}  norm {:.10}  P_right {:.6}", s.t, s.norm, s.p_right);
    }
    let plateau = find_plateau(&run, &PlateauOptions::default());
    println!(
        "{} levels, crossing at t = {:.4}",
        well.n_levels,
        crossing_time(&packet, units)
    );
    println!(
        "plateau {:.6} (found: {}), norm drift {:.1e}",
        plateau.value, plateau.found, run.max_norm_drift
    );
    Ok(())
}
