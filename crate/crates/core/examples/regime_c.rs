//! Asymmetry when the lower sideband is closed (E < ħΩ), next to √(Ωτ_δ − T0).

use delta_floquet::analysis::regime_c_check;
use delta_floquet::{BarrierParams, TruncationOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let template = BarrierParams::natural(10.0, 1e-3, 1.0, 0.5)?;
    let grid: Vec<f64> = (0..12).map(|i| 0.3 + 0.25 * i as f64).collect();
    let table = regime_c_check(&template, &grid, &TruncationOptions::default())?;
    for w in &table.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "{:>7} {:>12} {:>12} {:>10} {:>12}",
        "omega", "F(ampl)", "F(flux)", "omega*tau", "reference"
    );
    for row in &table.rows {
        let reference = row.reference.map(|r| format!("{r:.6}")).unwrap_or_else(|| "-".into());
        println!(
            "{:>7.3} {:>12.6} {:>12.6} {:>10.4} {:>12}",
            row.omega, row.f_amplitude, row.f_flux, row.omega_tau, reference
        );
    }
    Ok(())
}
