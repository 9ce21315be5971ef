//! Sideband spectrum of the oscillating delta barrier from the full solution.
//!
//! ```text
//! cargo run --example fs_sidebands -- 2.5 10 1 1
//! ```

use delta_floquet::{converge_truncation, BarrierParams, TruncationOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let [energy, v0, eps, omega] = match args.as_slice() {
        [] => [2.5, 10.0, 1.0, 1.0],
        [e, v, x, w] => [*e, *v, *x, *w],
        _ => return Err("usage: fs_sidebands [E V0 eps omega]".into()),
    };
    let params = BarrierParams::natural(v0, eps, omega, energy)?;
    let sol = converge_truncation(&params, &TruncationOptions::default())?;

    println!("window [{}, {}], residual {:.1e}", sol.n_min, sol.n_max, sol.residual);
    println!("{:>4} {:>12} {:>14} {:>14}", "n", "kind", "|r_n|^2", "flux share");
    for n in sol.indices().filter(|n| n.abs() <= 6) {
        let kind = sol.channel(n).map(|c| format!("{:?}", c.kind)).unwrap_or_default();
        println!(
            "{n:>4} {kind:>12} {:>14.6e} {:>14.6e}",
            sol.intensity(n),
            sol.flux_intensity(n)
        );
    }
    println!(
        "transmitted {:.8}, reflected {:.8}, sum {:.12}",
        sol.transmitted_flux,
        sol.reflected_flux,
        sol.flux_sum()
    );
    Ok(())
}
