//! Full solution: the Floquet sideband equations truncated to a finite
//! window of channels,
//!
//! ```text
//! (2ik_n/B − 1) r_n − (ε/2)(r_{n+1} + r_{n−1}) = δ_{n,0} + (ε/2)(δ_{n+1,0} + δ_{n−1,0}),
//! ```
//!
//! with `r_n = 0` outside the window.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::channel;
use crate::error::{Error, Result};
use crate::params::BarrierParams;
use crate::solution::{Method, SidebandSolution};
use crate::tridiag;

/// The truncated sideband system on `[n_min, n_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub n_min: i32,
    pub n_max: i32,
    pub diag: Vec<Complex64>,
    /// Constant off-diagonal −ε/2.
    pub off: f64,
    pub rhs: Vec<Complex64>,
}

impl TridiagonalSystem {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn index(&self, n: i32) -> usize {
        (n - self.n_min) as usize
    }

    /// max_n |(A r − b)_n|.
    pub fn residual(&self, r: &[Complex64]) -> f64 {
        let len = self.len();
        (0..len)
            .map(|i| {
                let mut row = self.diag[i] * r[i];
                if i > 0 {
                    row += self.off * r[i - 1];
                }
                if i + 1 < len {
                    row += self.off * r[i + 1];
                }
                (row - self.rhs[i]).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Dense row-major copy of the matrix.
    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let len = self.len();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); len]; len];
        for i in 0..len {
            m[i][i] = self.diag[i];
            if i > 0 {
                m[i][i - 1] = Complex64::new(self.off, 0.0);
            }
            if i + 1 < len {
                m[i][i + 1] = Complex64::new(self.off, 0.0);
            }
        }
        m
    }
}

pub fn assemble(params: &BarrierParams, n_min: i32, n_max: i32) -> Result<TridiagonalSystem> {
    if n_min > -1 || n_max < 1 {
        return Err(Error::WindowTooSmall { n_min, n_max });
    }
    let b = params.coupling();
    let eps = params.eps();
    let i2b = Complex64::new(0.0, 2.0 / b);
    let diag = (n_min..=n_max).map(|n| i2b * channel(params, n).k - 1.0).collect();
    let rhs = (n_min..=n_max)
        .map(|n| match n {
            0 => Complex64::new(1.0, 0.0),
            -1 | 1 => Complex64::new(eps / 2.0, 0.0),
            _ => Complex64::new(0.0, 0.0),
        })
        .collect();
    Ok(TridiagonalSystem {
        n_min,
        n_max,
        diag,
        off: -eps / 2.0,
        rhs,
    })
}

pub fn solve_system(params: &BarrierParams, system: &TridiagonalSystem) -> Result<SidebandSolution> {
    let len = system.len();
    let off = vec![Complex64::new(system.off, 0.0); len];
    let r = tridiag::solve(&off, &system.diag, &off, &system.rhs).map_err(|row| Error::SingularPivot {
        n: system.n_min + row as i32,
    })?;
    let residual = system.residual(&r);
    Ok(SidebandSolution::from_reflection(
        *params,
        Method::Full,
        system.n_min,
        r,
        residual,
    ))
}

/// Solves the sideband system truncated to `[n_min, n_max]`.
pub fn solve_fs(params: &BarrierParams, n_min: i32, n_max: i32) -> Result<SidebandSolution> {
    let system = assemble(params, n_min, n_max)?;
    solve_system(params, &system)
}

/// Window growth policy for [`converge_truncation`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationOptions {
    /// Maximum change of r₋₁, r₀, r₁ between successive windows.
    pub tol: f64,
    pub initial_half_width: i32,
    pub step: i32,
    /// Largest half-width tried before giving up.
    pub cap: i32,
}

impl Default for TruncationOptions {
    fn default() -> Self {
        TruncationOptions {
            tol: 1e-10,
            initial_half_width: 4,
            step: 4,
            cap: 200,
        }
    }
}

impl TruncationOptions {
    pub fn with_tol(tol: f64) -> Self {
        TruncationOptions {
            tol,
            ..Default::default()
        }
    }
}

/// Grows a symmetric window until the central amplitudes settle.
///
/// Returns the solution on the larger of the two windows that agreed.
pub fn converge_truncation(params: &BarrierParams, opts: &TruncationOptions) -> Result<SidebandSolution> {
    if !(opts.tol > 0.0) {
        return Err(Error::invalid("tol", format!("must be > 0, got {}", opts.tol)));
    }
    if opts.initial_half_width < 1 || opts.step < 1 || opts.cap < opts.initial_half_width {
        return Err(Error::invalid(
            "trunc",
            "need 1 <= initial half width <= cap and step >= 1",
        ));
    }
    if params.eps() == 0.0 {
        // Channels decouple; the minimal window is exact.
        return solve_fs(params, -1, 1);
    }
    let mut h = opts.initial_half_width;
    let mut prev = solve_fs(params, -h, h)?;
    loop {
        let next_h = (h + opts.step).min(opts.cap);
        if next_h == h {
            // already at cap
            let last = prev.central();
            return Err(Error::TruncationNotConverged {
                cap: opts.cap,
                last,
                previous: last,
            });
        }
        let next = solve_fs(params, -next_h, next_h)?;
        let change = prev
            .central()
            .iter()
            .zip(next.central())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if change < opts.tol {
            return Ok(next);
        }
        if next_h >= opts.cap {
            return Err(Error::TruncationNotConverged {
                cap: opts.cap,
                last: next.central(),
                previous: prev.central(),
            });
        }
        h = next_h;
        prev = next;
    }
}
