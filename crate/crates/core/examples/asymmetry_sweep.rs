//! Low-frequency sideband asymmetry and its slope in Ω.

use delta_floquet::analysis::{frequency_sweep, tau_delta, Solver};
use delta_floquet::{static_transmission, BarrierParams, TruncationOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let template = BarrierParams::natural(10.0, 1e-3, 1.0, 2.5)?;
    let grid: Vec<f64> = (0..20).map(|i| 0.01 + 0.19 * i as f64 / 19.0).collect();
    let t0 = static_transmission(&template);
    let tau = tau_delta(&template);

    for solver in [Solver::Fs, Solver::Ts] {
        let sweep = frequency_sweep(&template, &grid, solver, &TruncationOptions::default())?;
        for pt in sweep.points.iter().step_by(4) {
            println!(
                "{} omega {:.4}  F {:+.6e}  regime {}",
                solver.as_str(),
                pt.omega,
                pt.f,
                pt.regime.as_str()
            );
        }
        if let Some(fit) = sweep.fit {
            println!("{} slope {:.6} (R^2 {:.6})", solver.as_str(), fit.slope, fit.r_squared);
        }
    }
    println!("-tau_delta          = {:.6}", -tau);
    println!("-tau_delta (1 - T0) = {:.6}", -tau * (1.0 - t0));
    Ok(())
}
