//! Thomas sweep for complex tridiagonal systems.

use num_complex::Complex64;

/// Solves `sub[i]·x[i-1] + diag[i]·x[i] + sup[i]·x[i+1] = rhs[i]`.
///
/// `sub[0]` and `sup[n-1]` are ignored. No pivoting; on a vanishing pivot
/// the offending row index is returned.
pub fn solve(
    sub: &[Complex64],
    diag: &[Complex64],
    sup: &[Complex64],
    rhs: &[Complex64],
) -> Result<Vec<Complex64>, usize> {
    let n = diag.len();
    assert!(sub.len() == n && sup.len() == n && rhs.len() == n);
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    let mut d = vec![Complex64::new(0.0, 0.0); n];

    let scale = diag.iter().chain(sub).chain(sup).map(|z| z.norm()).fold(0.0, f64::max);
    let tiny = f64::EPSILON * f64::EPSILON * scale.max(f64::MIN_POSITIVE);

    let mut pivot = diag[0];
    if pivot.norm() <= tiny {
        return Err(0);
    }
    c[0] = sup[0] / pivot;
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - sub[i] * c[i - 1];
        if pivot.norm() <= tiny || !pivot.is_finite() {
            return Err(i);
        }
        c[i] = sup[i] / pivot;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        let next = d[i + 1];
        d[i] -= c[i] * next;
    }
    Ok(d)
}
