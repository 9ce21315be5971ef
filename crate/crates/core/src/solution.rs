//! Sideband amplitudes shared by the full and Toeplitz solvers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{channel, Channel};
use crate::params::BarrierParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Truncated tridiagonal system.
    Full,
    /// 3×3 closure with exponential tails.
    Toeplitz,
}

/// Reflection and transmission amplitudes on a window `[n_min, n_max]`.
///
/// Transmission is never stored independently: continuity at the barrier
/// fixes `t_n = r_n` for `n ≠ 0` and `t_0 = 1 + r_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidebandSolution {
    pub params: BarrierParams,
    pub method: Method,
    pub n_min: i32,
    pub n_max: i32,
    #[serde(with = "crate::io::reim_vec")]
    r: Vec<Complex64>,
    pub channels: Vec<Channel>,
    /// Largest row residual of the linear system that produced `r`.
    pub residual: f64,
    pub transmitted_flux: f64,
    pub reflected_flux: f64,
}

impl SidebandSolution {
    pub(crate) fn from_reflection(
        params: BarrierParams,
        method: Method,
        n_min: i32,
        r: Vec<Complex64>,
        residual: f64,
    ) -> Self {
        let n_max = n_min + r.len() as i32 - 1;
        let channels: Vec<Channel> = (n_min..=n_max).map(|n| channel(&params, n)).collect();
        let k0 = channel(&params, 0).k.re;
        let mut transmitted = 0.0;
        let mut reflected = 0.0;
        for (i, ch) in channels.iter().enumerate() {
            if !ch.is_propagating() {
                continue;
            }
            let w = ch.k.re / k0;
            let rn = r[i];
            let tn = if ch.n == 0 { rn + 1.0 } else { rn };
            reflected += w * rn.norm_sqr();
            transmitted += w * tn.norm_sqr();
        }
        SidebandSolution {
            params,
            method,
            n_min,
            n_max,
            r,
            channels,
            residual,
            transmitted_flux: transmitted,
            reflected_flux: reflected,
        }
    }

    pub fn window(&self) -> (i32, i32) {
        (self.n_min, self.n_max)
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i32> {
        self.n_min..=self.n_max
    }

    fn slot(&self, n: i32) -> Option<usize> {
        (self.n_min..=self.n_max)
            .contains(&n)
            .then(|| (n - self.n_min) as usize)
    }

    /// Reflection amplitude; zero outside the window.
    pub fn r(&self, n: i32) -> Complex64 {
        self.slot(n).map_or(Complex64::new(0.0, 0.0), |i| self.r[i])
    }

    pub fn t(&self, n: i32) -> Complex64 {
        let r = self.r(n);
        if n == 0 {
            r + 1.0
        } else {
            r
        }
    }

    /// I_n = |t_n|².
    pub fn intensity(&self, n: i32) -> f64 {
        self.t(n).norm_sqr()
    }

    /// (k_n/k₀)|t_n|² for a propagating channel, 0 otherwise.
    pub fn flux_intensity(&self, n: i32) -> f64 {
        match self.channel(n) {
            Some(ch) if ch.is_propagating() => {
                let k0 = self.channels[(0 - self.n_min) as usize].k.re;
                ch.k.re / k0 * self.intensity(n)
            }
            _ => 0.0,
        }
    }

    pub fn reflection(&self) -> &[Complex64] {
        &self.r
    }

    pub fn channel(&self, n: i32) -> Option<&Channel> {
        self.slot(n).map(|i| &self.channels[i])
    }

    pub fn central(&self) -> [Complex64; 3] {
        [self.r(-1), self.r(0), self.r(1)]
    }

    /// Σ over propagating channels of (k_n/k₀)(|r_n|² + |t_n|²).
    pub fn flux_sum(&self) -> f64 {
        self.transmitted_flux + self.reflected_flux
    }
}
