//! Time scales extracted from frequency sweeps: the sideband asymmetry,
//! the delta-barrier time τ_δ, reference formulas for a rectangular
//! barrier, and packet-averaged transmission.

mod average;
mod rect;
mod sweep;

pub use average::{
    compare_with_dynamics, energy_averaged_transmission, momentum_weights, validate_weights, well_weights,
    DynamicsComparison,
};
pub use rect::{opaque_tau, tau_bl_rect, RectBarrierParams};
pub use sweep::{
    frequency_sweep, read_sweep_csv, regime_c_check, sweep_csv, RegimeCRow, RegimeCTable, SweepPoint, SweepResult,
    SWEEP_HEADER,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fs::{converge_truncation, TruncationOptions};
use crate::params::BarrierParams;
use crate::solution::SidebandSolution;
use crate::ts::solve_ts;

/// F = (I₊₁ − I₋₁)/(I₊₁ + I₋₁) with I_n = |t_n|².
pub fn asymmetry(sol: &SidebandSolution) -> Result<f64> {
    asymmetry_of(sol.intensity(-1), sol.intensity(1))
}

/// Same as [`asymmetry`] but with flux-weighted intensities, so an
/// evanescent sideband counts as zero.
pub fn flux_asymmetry(sol: &SidebandSolution) -> Result<f64> {
    asymmetry_of(sol.flux_intensity(-1), sol.flux_intensity(1))
}

fn asymmetry_of(minus: f64, plus: f64) -> Result<f64> {
    let sum = plus + minus;
    if !(sum > 0.0) {
        return Err(Error::UndefinedAsymmetry);
    }
    Ok((plus - minus) / sum)
}

/// τ_δ = 2ħ³/(m V₀²).
pub fn tau_delta(params: &BarrierParams) -> f64 {
    let h = params.hbar();
    2.0 * h * h * h / (params.mass() * params.v0() * params.v0())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Fs,
    Ts,
}

impl Solver {
    pub fn as_str(&self) -> &'static str {
        match self {
            Solver::Fs => "fs",
            Solver::Ts => "ts",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fs" => Some(Solver::Fs),
            "ts" => Some(Solver::Ts),
            _ => None,
        }
    }

    pub fn solve(&self, params: &BarrierParams, trunc: &TruncationOptions) -> Result<SidebandSolution> {
        match self {
            Solver::Fs => converge_truncation(params, trunc),
            Solver::Ts => solve_ts(params),
        }
    }
}

/// Ordinary least squares `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// `None` with fewer than two distinct abscissae.
pub fn linear_fit(xy: &[(f64, f64)]) -> Option<LinearFit> {
    let n = xy.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xy.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
        points: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::static_transmission;
    use crate::params::Units;

    #[test]
    fn tau_delta_values() {
        let p = BarrierParams::natural(10.0, 0.0, 1.0, 2.5).unwrap();
        assert!((tau_delta(&p) - 0.04).abs() < 1e-15);
        let q = p.with_v0(20.0).unwrap();
        assert!((tau_delta(&q) - 0.01).abs() < 1e-15);
        let u = Units::new(2.0, 0.5).unwrap();
        let r = BarrierParams::new(u, 10.0, 0.0, 1.0, 2.5).unwrap();
        assert!((tau_delta(&r) / tau_delta(&p) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn asymmetry_bounds() {
        assert_eq!(asymmetry_of(0.3, 0.3).unwrap(), 0.0);
        assert_eq!(asymmetry_of(0.0, 0.2).unwrap(), 1.0);
        assert_eq!(asymmetry_of(0.2, 0.0).unwrap(), -1.0);
        assert!(matches!(asymmetry_of(0.0, 0.0), Err(Error::UndefinedAsymmetry)));
    }

    #[test]
    fn undefined_at_zero_driving() {
        let p = BarrierParams::natural(10.0, 0.0, 1.0, 2.5).unwrap();
        let sol = converge_truncation(&p, &TruncationOptions::default()).unwrap();
        assert!(matches!(asymmetry(&sol), Err(Error::UndefinedAsymmetry)));
    }

    #[test]
    fn small_frequency_asymmetry_follows_first_order_theory() {
        // First order in ε and Ω: F = −Ω τ_δ (1 − T₀).
        let p = BarrierParams::natural(10.0, 1e-3, 0.05, 2.5).unwrap();
        let sol = converge_truncation(&p, &TruncationOptions::default()).unwrap();
        let f = asymmetry(&sol).unwrap();
        let expect = -p.omega() * tau_delta(&p) * (1.0 - static_transmission(&p));
        assert!((f / expect - 1.0).abs() < 1e-2, "F = {f}, first order {expect}");
    }

    #[test]
    fn fit_recovers_line() {
        let xy: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 3.0 - 0.5 * i as f64)).collect();
        let fit = linear_fit(&xy).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-14);
        assert!((fit.intercept - 3.0).abs() < 1e-13);
        assert!((fit.r_squared - 1.0).abs() < 1e-14);
        assert!(linear_fit(&xy[..1]).is_none());
    }

    #[test]
    fn solver_names() {
        assert_eq!(Solver::parse("TS"), Some(Solver::Ts));
        assert_eq!(Solver::parse(Solver::Fs.as_str()), Some(Solver::Fs));
        assert_eq!(Solver::parse("x"), None);
    }
}
