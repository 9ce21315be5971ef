//! Frequency sweeps of the first sidebands.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{asymmetry, flux_asymmetry, linear_fit, tau_delta, LinearFit, Solver};
use crate::channel::{classify_regime, static_transmission, Regime};
use crate::error::{Error, Result};
use crate::fs::TruncationOptions;
use crate::io::{fmt_f64, parse_f64, parse_regime, read_csv, CsvTable};
use crate::params::BarrierParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub omega: f64,
    pub i_m1: f64,
    pub i_0: f64,
    pub i_p1: f64,
    /// NaN where both sidebands vanish.
    pub f: f64,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Fixed parameters; its Ω is not used.
    pub template: BarrierParams,
    pub solver: Solver,
    pub points: Vec<SweepPoint>,
    pub tau_delta: f64,
    /// F vs Ω over the regime A/B points; absent with fewer than two.
    pub fit: Option<LinearFit>,
}

impl SweepResult {
    pub fn omega_grid(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.omega).collect()
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::invalid("omega", "grid values must be finite and > 0"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("omega", "grid must be strictly increasing"));
    }
    Ok(())
}

fn at_omega(omega: f64) -> impl FnOnce(Error) -> Error {
    move |e| Error::AtFrequency {
        omega,
        source: Box::new(e),
    }
}

/// Solves at every Ω of `grid` with E, V₀, ε taken from `template` and
/// fits F(Ω) on the regime A/B sub-grid.
pub fn frequency_sweep(
    template: &BarrierParams,
    grid: &[f64],
    solver: Solver,
    trunc: &TruncationOptions,
) -> Result<SweepResult> {
    check_grid(grid)?;
    let points = grid
        .par_iter()
        .map(|&omega| {
            let p = template.with_omega(omega)?;
            let sol = solver.solve(&p, trunc).map_err(at_omega(omega))?;
            Ok(SweepPoint {
                omega,
                i_m1: sol.intensity(-1),
                i_0: sol.intensity(0),
                i_p1: sol.intensity(1),
                f: asymmetry(&sol).unwrap_or(f64::NAN),
                regime: classify_regime(&p).regime,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.regime != Regime::C && p.f.is_finite())
        .map(|p| (p.omega, p.f))
        .collect();
    Ok(SweepResult {
        template: *template,
        solver,
        tau_delta: tau_delta(template),
        fit: linear_fit(&xy),
        points,
    })
}

/// One line of the regime-C comparison. I₋₁ of the evanescent channel is
/// read two ways: as |t₋₁|² (`f_amplitude`) and flux-weighted, which makes
/// it zero (`f_flux`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeCRow {
    pub omega: f64,
    pub f_amplitude: f64,
    pub f_flux: f64,
    pub omega_tau: f64,
    pub t0: f64,
    /// √(Ωτ_δ − T₀); `None` where the radicand is negative.
    pub reference: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RegimeCTable {
    pub rows: Vec<RegimeCRow>,
    pub warnings: Vec<String>,
}

/// Tabulates F against √(Ωτ_δ − T₀) for the regime-C points of `grid`;
/// other points are dropped with a warning.
pub fn regime_c_check(template: &BarrierParams, grid: &[f64], trunc: &TruncationOptions) -> Result<RegimeCTable> {
    check_grid(grid)?;
    let mut warnings = Vec::new();
    let mut keep = Vec::new();
    for &omega in grid {
        let p = template.with_omega(omega)?;
        let class = classify_regime(&p);
        if class.regime == Regime::C && !class.boundary {
            keep.push(p);
        } else {
            warnings.push(format!(
                "omega = {omega}: regime {} (E >= hbar*omega), skipped",
                class.regime.as_str()
            ));
        }
    }
    if keep.is_empty() {
        warnings.push("no regime C points in the grid".into());
    }
    let tau = tau_delta(template);
    let t0 = static_transmission(template);
    let rows = keep
        .par_iter()
        .map(|p| {
            let sol = Solver::Fs.solve(p, trunc).map_err(at_omega(p.omega()))?;
            let omega_tau = p.omega() * tau;
            let radicand = omega_tau - t0;
            Ok(RegimeCRow {
                omega: p.omega(),
                f_amplitude: asymmetry(&sol).unwrap_or(f64::NAN),
                f_flux: flux_asymmetry(&sol).unwrap_or(f64::NAN),
                omega_tau,
                t0,
                reference: (radicand >= 0.0).then(|| radicand.sqrt()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    for r in &rows {
        if r.reference.is_none() {
            warnings.push(format!(
                "omega = {}: omega*tau_delta < T0, reference undefined",
                r.omega
            ));
        }
    }
    Ok(RegimeCTable { rows, warnings })
}

pub const SWEEP_HEADER: [&str; 6] = ["omega", "I_m1", "I_0", "I_p1", "F", "regime"];

pub fn sweep_csv(result: &SweepResult) -> String {
    let mut table = CsvTable::new(&SWEEP_HEADER);
    for p in &result.points {
        table.row(&[
            fmt_f64(p.omega),
            fmt_f64(p.i_m1),
            fmt_f64(p.i_0),
            fmt_f64(p.i_p1),
            fmt_f64(p.f),
            p.regime.as_str().to_string(),
        ]);
    }
    table.finish()
}

pub fn read_sweep_csv(text: &str) -> Result<Vec<SweepPoint>> {
    read_csv(text, &SWEEP_HEADER)?
        .into_iter()
        .map(|c| {
            Ok(SweepPoint {
                omega: parse_f64(c[0])?,
                i_m1: parse_f64(c[1])?,
                i_0: parse_f64(c[2])?,
                i_p1: parse_f64(c[3])?,
                f: parse_f64(c[4])?,
                regime: parse_regime(c[5])?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn grid_validation() {
        let p = BarrierParams::natural(10.0, 1e-3, 1.0, 2.5).unwrap();
        let t = TruncationOptions::default();
        assert!(frequency_sweep(&p, &[0.1, 0.1], Solver::Fs, &t).is_err());
        assert!(frequency_sweep(&p, &[-0.1, 0.1], Solver::Fs, &t).is_err());
    }

    #[test]
    fn single_point_has_no_fit() {
        let p = BarrierParams::natural(10.0, 1e-3, 1.0, 2.5).unwrap();
        let r = frequency_sweep(&p, &[0.1], Solver::Fs, &TruncationOptions::default()).unwrap();
        assert!(r.fit.is_none());
        assert!(r.points[0].i_p1 > 0.0 && r.points[0].i_m1 > 0.0);
    }

    #[test]
    fn fitted_slope_matches_first_order_theory() {
        let p = BarrierParams::natural(10.0, 1e-3, 1.0, 2.5).unwrap();
        let r = frequency_sweep(&p, &grid(0.01, 0.2, 20), Solver::Fs, &TruncationOptions::default()).unwrap();
        let fit = r.fit.unwrap();
        let expect = -r.tau_delta * (1.0 - static_transmission(&p));
        assert!((fit.slope / expect - 1.0).abs() < 1e-2, "{} vs {expect}", fit.slope);
        assert!(fit.r_squared > 0.999);
        assert!(fit.intercept.abs() < 1e-3 * fit.slope.abs());
    }

    #[test]
    fn ts_and_fs_sweeps_agree() {
        let p = BarrierParams::natural(10.0, 1e-3, 1.0, 2.5).unwrap();
        let g = grid(0.01, 0.2, 8);
        let t = TruncationOptions::default();
        let a = frequency_sweep(&p, &g, Solver::Fs, &t).unwrap();
        let b = frequency_sweep(&p, &g, Solver::Ts, &t).unwrap();
        for (x, y) in a.points.iter().zip(&b.points) {
            assert!((x.f - y.f).abs() <= 1e-2 * x.f.abs());
        }
    }

    #[test]
    fn regime_c_filters_and_flags() {
        let p = BarrierParams::natural(10.0, 1e-3, 1.0, 0.5).unwrap();
        let table = regime_c_check(&p, &[0.25, 1.0, 5.0, 30.0], &TruncationOptions::default()).unwrap();
        assert_eq!(table.rows.len(), 3);
        assert!(table.warnings.iter().any(|w| w.contains("skipped")));
        for r in &table.rows {
            assert_eq!(r.f_flux, 1.0);
            assert!(r.f_amplitude > -1.0 && r.f_amplitude <= 1.0);
        }
        // T₀ = 1/51 < Ωτ_δ = 0.04
        assert!(table.rows[0].reference.is_some());
        let empty = regime_c_check(&p, &[0.25], &TruncationOptions::default()).unwrap();
        assert!(empty.rows.is_empty() && !empty.warnings.is_empty());
    }

    #[test]
    fn csv_round_trip() {
        let p = BarrierParams::natural(10.0, 1e-3, 1.0, 2.5).unwrap();
        let r = frequency_sweep(&p, &[0.5, 1.5, 3.0], Solver::Fs, &TruncationOptions::default()).unwrap();
        let back = read_sweep_csv(&sweep_csv(&r)).unwrap();
        assert_eq!(back, r.points);
    }
}
