//! Toeplitz closure of the sideband system.
//!
//! Far from the central band the diagonal `d_n = 2ik_n/B − 1` varies slowly,
//! so the amplitudes decay geometrically: `r_n = r_{−1} e^{(n+1)θ₋}` for
//! `n ≤ −1` and `r_n = r_1 e^{−(n−1)θ₊}` for `n ≥ 1`. Substituting this into
//! a far row with the diagonal frozen at `d = d_{∓2}` gives, for
//! `x = e^{−θ}`,
//!
//! ```text
//! (ε/2) x² − d x + ε/2 = 0,
//! ```
//!
//! whose roots multiply to 1. The root inside the unit circle is the decay
//! factor. Folding the tails back into rows −1 and +1 leaves a 3×3 system for
//! `r_{−1}, r_0, r_1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{channel, classify_regime, RegimeClass};
use crate::error::{Error, Result};
use crate::params::BarrierParams;
use crate::solution::{Method, SidebandSolution};

/// Both roots of one side's characteristic quadratic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootPair {
    #[serde(with = "crate::io::reim_array2")]
    pub roots: [Complex64; 2],
    /// Index into `roots` of the decaying root.
    pub selected: usize,
    /// Frozen asymptotic diagonal `2ik/B − 1`.
    #[serde(with = "crate::io::reim")]
    pub diagonal: Complex64,
}

impl RootPair {
    pub fn decay_factor(&self) -> Complex64 {
        self.roots[self.selected]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayExponents {
    /// Decay toward n → +∞.
    #[serde(with = "crate::io::reim")]
    pub theta_plus: Complex64,
    /// Decay toward n → −∞.
    #[serde(with = "crate::io::reim")]
    pub theta_minus: Complex64,
    pub regime: RegimeClass,
    pub plus: RootPair,
    pub minus: RootPair,
}

impl DecayExponents {
    /// |(ε/2)x² − d·x + ε/2| at the selected root of each side.
    pub fn residuals(&self, eps: f64) -> [f64; 2] {
        let res = |pair: &RootPair| {
            let x = pair.decay_factor();
            (0.5 * eps * x * x - pair.diagonal * x + 0.5 * eps).norm()
        };
        [res(&self.plus), res(&self.minus)]
    }
}

fn side_roots(diagonal: Complex64, eps: f64, side: &'static str) -> Result<RootPair> {
    // x = (d ± sqrt(d² − ε²))/ε; take the sign that avoids cancellation for
    // the large root, then use the unit product for the small one.
    let s = (diagonal * diagonal - eps * eps).sqrt();
    let s = if (diagonal.conj() * s).re >= 0.0 { s } else { -s };
    let large = (diagonal + s) / eps;
    let small = 1.0 / large;
    let roots = [small, large];
    let moduli = [small.norm(), large.norm()];
    if !(moduli[0] < 1.0 - 1e-12) {
        return Err(Error::NoDecayingRoot { side, roots, moduli });
    }
    Ok(RootPair {
        roots,
        selected: 0,
        diagonal,
    })
}

/// Complex decay exponents θ₊, θ₋ with positive real parts.
///
/// The θ₋ side uses the diagonal at n = −2, θ₊ the one at n = +2.
pub fn decay_exponents(params: &BarrierParams) -> Result<DecayExponents> {
    let eps = params.eps();
    if eps == 0.0 {
        return Err(Error::DegenerateClosure);
    }
    let i2b = Complex64::new(0.0, 2.0 / params.coupling());
    let d_minus = i2b * channel(params, -2).k - 1.0;
    let d_plus = i2b * channel(params, 2).k - 1.0;
    let minus = side_roots(d_minus, eps, "minus")?;
    let plus = side_roots(d_plus, eps, "plus")?;
    Ok(DecayExponents {
        theta_plus: -plus.decay_factor().ln(),
        theta_minus: -minus.decay_factor().ln(),
        regime: classify_regime(params),
        plus,
        minus,
    })
}

/// The regime-A closed form for one side, written for `a = 2k/B` with `k`
/// real.
///
/// The printed expression for cos(Im θ) is the magnitude; Im θ lies in
/// (π/2, π) so the cosine itself is negative, which keeps
/// `cosh(Re θ) = −1/(ε cos(Im θ))` positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeAClosedForm {
    pub cos_im_theta: f64,
    pub cosh_re_theta: f64,
}

pub fn regime_a_closed_form(eps: f64, k: f64, coupling: f64) -> Option<RegimeAClosedForm> {
    if !(eps > 0.0) {
        return None;
    }
    let k2 = k * k;
    let b2 = coupling * coupling;
    let radicand = (1.0 - eps * eps).powi(2) + 16.0 * k2 * k2 / (b2 * b2) + 8.0 / b2 * (1.0 + eps * eps) * k2;
    let inner = 1.0 + eps * eps + 4.0 / b2 * k2 - radicand.sqrt();
    if inner < 0.0 {
        return None;
    }
    let magnitude = std::f64::consts::SQRT_2 / (2.0 * eps) * inner.sqrt();
    let cos_im_theta = -magnitude;
    Some(RegimeAClosedForm {
        cos_im_theta,
        cosh_re_theta: -1.0 / (eps * cos_im_theta),
    })
}

/// Number of tail channels reported on each side beyond |n| = 1.
pub const DEFAULT_TAIL: i32 = 8;

/// Solves the 3×3 closure and extends the amplitudes by their exponential
/// tails out to |n| = `tail`.
pub fn solve_ts(params: &BarrierParams) -> Result<SidebandSolution> {
    solve_ts_with_tail(params, DEFAULT_TAIL)
}

pub fn solve_ts_with_tail(params: &BarrierParams, tail: i32) -> Result<SidebandSolution> {
    let exps = decay_exponents(params)?;
    let eps = params.eps();
    let half = 0.5 * eps;
    let i2b = Complex64::new(0.0, 2.0 / params.coupling());
    let d = |n: i32| i2b * channel(params, n).k - 1.0;
    let x_minus = exps.minus.decay_factor();
    let x_plus = exps.plus.decay_factor();

    let zero = Complex64::new(0.0, 0.0);
    let off = Complex64::new(-half, 0.0);
    let m = [
        [d(-1) - half * x_minus, off, zero],
        [off, d(0), off],
        [zero, off, d(1) - half * x_plus],
    ];
    let rhs = [
        Complex64::new(half, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(half, 0.0),
    ];

    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let scale: f64 = m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    if !(det.norm() > 1e-14 * scale.powi(3)) {
        return Err(Error::SingularClosure {
            det_abs: det.norm(),
            energy: params.energy(),
            omega: params.omega(),
            eps,
        });
    }
    let central = solve3(m, rhs);
    let residual = (0..3)
        .map(|i| {
            let row: Complex64 = (0..3).map(|j| m[i][j] * central[j]).sum();
            (row - rhs[i]).norm()
        })
        .fold(0.0, f64::max);

    let tail = tail.max(1);
    let r: Vec<Complex64> = (-tail..=tail)
        .map(|n| match n {
            n if n < -1 => central[0] * x_minus.powi(-1 - n),
            -1 => central[0],
            0 => central[1],
            1 => central[2],
            n => central[2] * x_plus.powi(n - 1),
        })
        .collect();
    Ok(SidebandSolution::from_reflection(
        *params,
        Method::Toeplitz,
        -tail,
        r,
        residual,
    ))
}

/// Gaussian elimination with partial pivoting on a 3×3 system.
fn solve3(mut m: [[Complex64; 3]; 3], mut b: [Complex64; 3]) -> [Complex64; 3] {
    for col in 0..3 {
        let p = (col..3)
            .max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))
            .unwrap();
        m.swap(col, p);
        b.swap(col, p);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                let v = m[col][k];
                m[row][k] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in row + 1..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    x
}
