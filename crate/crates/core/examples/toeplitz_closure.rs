//! Toeplitz closure against the full solution for the three central sidebands,
//! as ε shrinks.

use delta_floquet::{converge_truncation, decay_exponents, solve_ts, BarrierParams, TruncationOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for energy in [2.5, 1.5, 0.5] {
        println!("E = {energy}");
        for eps in [1.0, 0.5, 0.1, 0.01] {
            let p = BarrierParams::natural(10.0, eps, 1.0, energy)?;
            let ex = decay_exponents(&p)?;
            let fs = converge_truncation(&p, &TruncationOptions::default())?;
            let ts = solve_ts(&p)?;
            let worst = (-1..=1)
                .map(|n| (ts.intensity(n) / fs.intensity(n) - 1.0).abs())
                .fold(0.0, f64::max);
            println!(
                "  eps {eps:<5} theta- {:.4}{:+.4}i  theta+ {:.4}{:+.4}i  max rel dev {worst:.2e}",
                ex.theta_minus.re, ex.theta_minus.im, ex.theta_plus.re, ex.theta_plus.im
            );
        }
    }
    Ok(())
}
