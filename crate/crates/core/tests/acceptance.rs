//! Acceptance criteria. Each prints one PASS/FAIL line; the process exits
//! non-zero if any criterion fails.

use std::time::Instant;

use delta_floquet::analysis::{
    compare_with_dynamics, energy_averaged_transmission, frequency_sweep, tau_bl_rect, tau_delta, well_weights,
    RectBarrierParams, Solver,
};
use delta_floquet::fs::assemble;
use delta_floquet::tdse::{
    default_levels, default_t_final, find_plateau, propagate, PacketSpec, PlateauOptions, PropagationOptions, WellSpec,
};
use delta_floquet::ts::{decay_exponents, regime_a_closed_form};
use delta_floquet::*;
use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn converged(p: &BarrierParams) -> SidebandSolution {
    converge_truncation(p, &TruncationOptions::default()).unwrap()
}

fn unitarity() -> Outcome {
    let mut worst = 0.0f64;
    let mut regimes = std::collections::BTreeSet::new();
    for e in [0.6, 1.7, 3.1] {
        for v0 in [1.0, 5.0, 10.0] {
            for omega in [0.45, 1.1, 2.3] {
                for eps in [1.0, 0.1, 0.001] {
                    let p = BarrierParams::natural(v0, eps, omega, e).unwrap();
                    regimes.insert(classify_regime(&p).regime.as_str());
                    worst = worst.max((converged(&p).flux_sum() - 1.0).abs());
                }
            }
        }
    }
    outcome(
        worst < 1e-8 && regimes.len() == 3,
        format!("max |flux sum - 1| = {worst:.2e} over 81 points, regimes {regimes:?} (limit 1e-8)"),
    )
}

fn dense_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut draws = 0;
    while draws < 50 {
        let e = rng.random_range(0.1..6.0);
        let omega = rng.random_range(0.2..3.0);
        let x: f64 = e / omega;
        if (x - x.round()).abs() < 0.02 {
            continue;
        }
        let p = BarrierParams::natural(rng.random_range(0.5..20.0), rng.random_range(0.0..1.0), omega, e).unwrap();
        let sol = converged(&p);
        let (lo, hi) = sol.window();
        let sys = assemble(&p, lo, hi).unwrap();
        let m = sys.to_dense();
        let a = DMatrix::from_fn(m.len(), m.len(), |i, j| m[i][j]);
        let x = a.lu().solve(&DVector::from_vec(sys.rhs.clone())).unwrap();
        for (n, d) in (lo..=hi).zip(x.iter()) {
            if d.norm() > 1e-12 {
                worst = worst.max((sol.r(n) - d).norm() / d.norm());
            }
        }
        draws += 1;
    }
    outcome(
        worst < 1e-10,
        format!("max relative deviation {worst:.2e} over 50 draws (limit 1e-10)"),
    )
}

fn closed_form() -> Outcome {
    let mut worst = 0.0f64;
    let mut points = 0;
    let mut missing = 0;
    for e in [2.2, 2.8, 3.5, 4.5, 6.0] {
        for (v0, eps) in [(10.0, 1.0), (10.0, 0.5), (5.0, 0.2), (20.0, 0.8)] {
            let p = BarrierParams::natural(v0, eps, 1.0, e).unwrap();
            let ex = decay_exponents(&p).unwrap();
            for (theta, n) in [(ex.theta_minus, -2), (ex.theta_plus, 2)] {
                let k = channel(&p, n).k.re;
                match regime_a_closed_form(eps, k, p.coupling()) {
                    Some(cf) => {
                        worst = worst.max((theta.im.cos() - cf.cos_im_theta).abs());
                        worst = worst.max((theta.re.cosh() - cf.cosh_re_theta).abs() / cf.cosh_re_theta);
                    }
                    None => missing += 1,
                }
            }
            points += 1;
        }
    }
    outcome(
        worst < 1e-10 && missing == 0 && points == 20,
        format!("{points} regime-A points, max deviation {worst:.2e}, {missing} without closed form (limit 1e-10)"),
    )
}

fn central_deviation(e: f64, eps: f64) -> f64 {
    let p = BarrierParams::natural(10.0, eps, 1.0, e).unwrap();
    let fs = converged(&p);
    let ts = solve_ts(&p).unwrap();
    (-1..=1)
        .map(|n| (ts.intensity(n) - fs.intensity(n)).abs() / fs.intensity(n))
        .fold(0.0, f64::max)
}

fn fig2() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for e in [2.5, 1.5, 0.5] {
        let devs: Vec<f64> = [1.0, 0.5, 0.01].iter().map(|&eps| central_deviation(e, eps)).collect();
        pass &= devs[0] <= 0.2 && devs[1] <= 0.05 && devs[2] <= 0.01;
        pass &= devs[1] <= devs[0] && devs[2] <= devs[1];
        parts.push(format!("E={e}: {:.3} / {:.2e} / {:.2e}", devs[0], devs[1], devs[2]));
    }
    outcome(
        pass,
        format!(
            "worst central deviation at eps = 1 / 0.5 / 0.01: {} (limits 0.2 / 0.05 / 0.01)",
            parts.join("; ")
        ),
    )
}

fn slope_law() -> Outcome {
    let p = BarrierParams::natural(10.0, 1e-3, 1.0, 2.5).unwrap();
    let grid: Vec<f64> = (0..20).map(|i| 0.01 + 0.19 * i as f64 / 19.0).collect();
    let target = -tau_delta(&p);
    let mut pass = true;
    let mut parts = Vec::new();
    for solver in [Solver::Fs, Solver::Ts] {
        let r = frequency_sweep(&p, &grid, solver, &TruncationOptions::default()).unwrap();
        let fit = r.fit.unwrap();
        let rel = (fit.slope / target - 1.0).abs();
        pass &= rel <= 0.05;
        parts.push(format!(
            "{}: slope {:.6} ({:.1}% off)",
            solver.as_str(),
            fit.slope,
            100.0 * rel
        ));
    }
    let t0 = static_transmission(&p);
    outcome(
        pass,
        format!(
            "target {target:.4}; {}; first-order value -tau_delta*(1-T0) = {:.6} (limit 5%)",
            parts.join(", "),
            target * (1.0 - t0)
        ),
    )
}

fn fig3() -> Outcome {
    let units = Units::default();
    let template = BarrierParams::natural(5.0, 0.9, 1.0, 5.0).unwrap();
    let probe = WellSpec::new(40.0, 2).unwrap();
    let packet = PacketSpec::left_half_at_energy(&probe, 5.0, units).unwrap();
    let grid: Vec<f64> = (0..20).map(|i| 1.0 + 11.0 * i as f64 / 19.0).collect();
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for &omega in &grid {
        let p = template.with_omega(omega).unwrap();
        let well = WellSpec::new(40.0, default_levels(40.0, &packet, &p)).unwrap();
        let t_final = default_t_final(&well, &packet, units);
        let c =
            compare_with_dynamics(&p, &well, &packet, omega, t_final, &PropagationOptions::default(), None).unwrap();
        worst = worst.max(c.relative_deviation());
        rows.push(c);
    }
    let peak = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.p_fs.total_cmp(&b.1.p_fs))
        .map(|(i, _)| i)
        .unwrap();
    let interior = peak > 0 && peak + 1 < rows.len();
    outcome(
        worst <= 0.05 && interior,
        format!(
            "max relative deviation {worst:.2e} over 20 frequencies, maximum P_fs = {:.4} at omega = {:.3} (limit 5%)",
            rows[peak].p_fs, rows[peak].omega
        ),
    )
}

fn delta_limit() -> Outcome {
    let (v0, e) = (10.0, 2.5);
    let taus: Vec<f64> = [1.0, 0.1, 0.01, 0.001]
        .iter()
        .map(|&d| tau_bl_rect(&RectBarrierParams::new(Units::default(), v0 / d, d, e).unwrap()))
        .collect();
    let monotone = taus.windows(2).all(|w| w[1] < w[0]);
    let ratio = taus[3] / taus[0];
    outcome(
        monotone && ratio < 1e-3,
        format!(
            "tau(d) = [{}], tau(0.001)/tau(1) = {ratio:.2e} (limit 1e-3)",
            taus.iter().map(|t| format!("{t:.3e}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn tdse_invariants() -> Outcome {
    let units = Units::default();
    let tol = 1e-8;
    let probe = WellSpec::new(40.0, 2).unwrap();
    let packet = PacketSpec::left_half_at_energy(&probe, 5.0, units).unwrap();
    let opts = PropagationOptions {
        tol,
        ..Default::default()
    };

    let driven = BarrierParams::natural(5.0, 0.9, 5.0, 5.0).unwrap();
    let well = WellSpec::new(40.0, default_levels(40.0, &packet, &driven)).unwrap();
    let run = propagate(&well, &packet, &driven, default_t_final(&well, &packet, units), &opts).unwrap();
    let drift = run.max_norm_drift;

    let fixed = BarrierParams::natural(5.0, 0.0, 5.0, 5.0).unwrap();
    let run0 = propagate(&well, &packet, &fixed, default_t_final(&well, &packet, units), &opts).unwrap();
    let first = &run0.history[0].amplitudes;
    let stationary = run0
        .history
        .iter()
        .flat_map(|s| s.amplitudes.iter().zip(first).map(|(a, b)| (a.norm() - b.norm()).abs()))
        .fold(0.0, f64::max);
    let plateau = find_plateau(&run0, &PlateauOptions::default()).value;
    let weights = well_weights(&well, &packet, &fixed).unwrap();
    let t0 = energy_averaged_transmission(&weights, &fixed, 5.0, &TruncationOptions::default()).unwrap();
    let rel = (plateau / t0 - 1.0).abs();
    outcome(
        drift <= 10.0 * tol && stationary <= 1e-8 && rel <= 0.02,
        format!(
            "norm drift {drift:.2e} (limit {:.0e}), static population change {stationary:.2e} (limit 1e-8), \
             static P_right {plateau:.5} vs averaged T0 {t0:.5} ({:.2}%, limit 2%)",
            10.0 * tol,
            100.0 * rel
        ),
    )
}

fn eps_squared() -> Outcome {
    let ratios: Vec<[f64; 2]> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&eps| {
            let sol = converged(&BarrierParams::natural(10.0, eps, 1.0, 2.5).unwrap());
            [sol.intensity(-1) / (eps * eps), sol.intensity(1) / (eps * eps)]
        })
        .collect();
    let spread = (0..2)
        .flat_map(|s| {
            ratios
                .iter()
                .map(|r| (r[s] / ratios[0][s] - 1.0).abs())
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max);
    outcome(
        spread < 1e-2,
        format!("max spread of I/eps^2 {spread:.2e} (limit 1e-2)"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, f64); 9] = [
        ("unitarity", unitarity, 10.0),
        ("dense-solve oracle", dense_oracle, 10.0),
        ("regime-A closed form", closed_form, 1.0),
        ("full vs Toeplitz intensities", fig2, 5.0),
        ("low-frequency slope law", slope_law, 10.0),
        ("packet transmission vs frequency", fig3, 600.0),
        ("rectangular barrier delta limit", delta_limit, 1.0),
        ("propagation invariants", tdse_invariants, 60.0),
        ("eps^2 scaling of sidebands", eps_squared, 1.0),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let secs = start.elapsed().as_secs_f64();
        let pass = o.pass && secs < *budget;
        println!(
            "{} {}. {name}: {} [{secs:.2} s, budget {budget} s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
        if !pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
