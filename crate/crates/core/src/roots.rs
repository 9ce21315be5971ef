//! Bracketed scalar root finding: Illinois-modified regula falsi with a
//! bisection fallback whenever the bracket stops shrinking.

use crate::error::{Error, Result};

/// Root of `f` in `[lo, hi]`; `f(lo)` and `f(hi)` must differ in sign.
/// Stops when the bracket is narrower than `xtol` or `f` hits zero.
pub fn bracketed_root<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::Bracketing {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }
    // side that was retained last: -1 for a, +1 for b
    let mut side = 0i8;
    let mut width = (b - a).abs();
    for _ in 0..200 {
        if (b - a).abs() <= xtol {
            break;
        }
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !(x > a.min(b) && x < a.max(b)) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fb.signum() {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        }
        let new_width = (b - a).abs();
        if new_width > 0.5 * width {
            // stalled: force a bisection
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm == 0.0 {
                return Ok(m);
            }
            if fm.signum() == fb.signum() {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
            side = 0;
        }
        width = (b - a).abs();
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}
