//! Adaptive fifth-order Cash–Karp Runge–Kutta integrator with an embedded
//! fourth-order error estimate.

use crate::error::{Error, Result};

const A2: f64 = 1.0 / 5.0;
const A3: f64 = 3.0 / 10.0;
const A4: f64 = 3.0 / 5.0;
const A5: f64 = 1.0;
const A6: f64 = 7.0 / 8.0;
const B21: f64 = 1.0 / 5.0;
const B31: f64 = 3.0 / 40.0;
const B32: f64 = 9.0 / 40.0;
const B41: f64 = 3.0 / 10.0;
const B42: f64 = -9.0 / 10.0;
const B43: f64 = 6.0 / 5.0;
const B51: f64 = -11.0 / 54.0;
const B52: f64 = 5.0 / 2.0;
const B53: f64 = -70.0 / 27.0;
const B54: f64 = 35.0 / 27.0;
const B61: f64 = 1631.0 / 55296.0;
const B62: f64 = 175.0 / 512.0;
const B63: f64 = 575.0 / 13824.0;
const B64: f64 = 44275.0 / 110592.0;
const B65: f64 = 253.0 / 4096.0;
const C1: f64 = 37.0 / 378.0;
const C3: f64 = 250.0 / 621.0;
const C4: f64 = 125.0 / 594.0;
const C6: f64 = 512.0 / 1771.0;
const DC1: f64 = C1 - 2825.0 / 27648.0;
const DC3: f64 = C3 - 18575.0 / 48384.0;
const DC4: f64 = C4 - 13525.0 / 55296.0;
const DC5: f64 = -277.0 / 14336.0;
const DC6: f64 = C6 - 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CashKarp {
    /// Absolute local error bound per component and step.
    pub tol: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub safety: f64,
}

impl CashKarp {
    pub fn new(tol: f64) -> Self {
        CashKarp {
            tol,
            h_min: 1e-14,
            h_max: f64::INFINITY,
            safety: 0.9,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct StepStats {
    pub accepted: u64,
    pub rejected: u64,
    pub rhs_evals: u64,
}

struct Work {
    k: [Vec<f64>; 6],
    tmp: Vec<f64>,
    y5: Vec<f64>,
    err: Vec<f64>,
}

impl Work {
    fn new(n: usize) -> Self {
        Work {
            k: std::array::from_fn(|_| vec![0.0; n]),
            tmp: vec![0.0; n],
            y5: vec![0.0; n],
            err: vec![0.0; n],
        }
    }
}

impl CashKarp {
    /// One trial step of size `h`; leaves the candidate in `w.y5` and returns
    /// the scaled error (≤ 1 means acceptable).
    fn trial<F>(&self, f: &mut F, t: f64, y: &[f64], h: f64, w: &mut Work, stats: &mut StepStats) -> f64
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let n = y.len();
        let Work { k, tmp, y5, err } = w;
        let [k1, k2, k3, k4, k5, k6] = k;
        f(t, y, k1);
        for i in 0..n {
            tmp[i] = y[i] + h * B21 * k1[i];
        }
        f(t + A2 * h, tmp, k2);
        for i in 0..n {
            tmp[i] = y[i] + h * (B31 * k1[i] + B32 * k2[i]);
        }
        f(t + A3 * h, tmp, k3);
        for i in 0..n {
            tmp[i] = y[i] + h * (B41 * k1[i] + B42 * k2[i] + B43 * k3[i]);
        }
        f(t + A4 * h, tmp, k4);
        for i in 0..n {
            tmp[i] = y[i] + h * (B51 * k1[i] + B52 * k2[i] + B53 * k3[i] + B54 * k4[i]);
        }
        f(t + A5 * h, tmp, k5);
        for i in 0..n {
            tmp[i] = y[i] + h * (B61 * k1[i] + B62 * k2[i] + B63 * k3[i] + B64 * k4[i] + B65 * k5[i]);
        }
        f(t + A6 * h, tmp, k6);
        stats.rhs_evals += 6;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            y5[i] = y[i] + h * (C1 * k1[i] + C3 * k3[i] + C4 * k4[i] + C6 * k6[i]);
            err[i] = h * (DC1 * k1[i] + DC3 * k3[i] + DC4 * k4[i] + DC5 * k5[i] + DC6 * k6[i]);
            worst = worst.max(err[i].abs());
        }
        if worst.is_finite() {
            worst / self.tol
        } else {
            f64::INFINITY
        }
    }

    /// Integrates `y' = f(t, y)` from `t0` to `t1`, adapting the step.
    ///
    /// `h` carries the step size in and out so consecutive calls continue
    /// smoothly. `on_step` sees each accepted state and may abort.
    pub fn integrate<F, G>(
        &self,
        mut f: F,
        t0: f64,
        y: &mut [f64],
        t1: f64,
        h: &mut f64,
        stats: &mut StepStats,
        mut on_step: G,
    ) -> Result<()>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
        G: FnMut(f64, &[f64]) -> Result<()>,
    {
        let mut w = Work::new(y.len());
        let mut t = t0;
        let dir = (t1 - t0).signum();
        if t1 == t0 {
            return Ok(());
        }
        *h = h.abs().min(self.h_max).max(self.h_min) * dir;
        loop {
            let remaining = t1 - t;
            let last = remaining.abs() <= h.abs() * (1.0 + 1e-12);
            let step = if last { remaining } else { *h };
            let err = self.trial(&mut f, t, y, step, &mut w, stats);
            if err <= 1.0 {
                stats.accepted += 1;
                t = if last { t1 } else { t + step };
                y.copy_from_slice(&w.y5);
                on_step(t, y)?;
                let grow = if err == 0.0 {
                    5.0
                } else {
                    (self.safety * err.powf(-0.2)).min(5.0)
                };
                if !last {
                    *h = (step * grow).abs().min(self.h_max) * dir;
                } else if grow > 1.0 {
                    // keep the size the controller wanted, not the clipped one
                    *h = (h.abs().max(step.abs() * grow)).min(self.h_max) * dir;
                }
                if last {
                    return Ok(());
                }
            } else {
                stats.rejected += 1;
                let shrink = if err.is_finite() {
                    (self.safety * err.powf(-0.25)).max(0.1)
                } else {
                    0.1
                };
                *h = step * shrink;
                if h.abs() < self.h_min {
                    return Err(Error::StepUnderflow {
                        t,
                        h: h.abs(),
                        norm: y.iter().map(|v| v * v).sum::<f64>().sqrt(),
                    });
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let rk = CashKarp::new(1e-12);
        let mut y = [1.0];
        let mut h = 0.1;
        let mut stats = StepStats::default();
        rk.integrate(
            |_, y, dy| dy[0] = -y[0],
            0.0,
            &mut y,
            3.0,
            &mut h,
            &mut stats,
            |_, _| Ok(()),
        )
        .unwrap();
        assert!((y[0] - (-3.0f64).exp()).abs() < 1e-11);
        assert!(stats.accepted > 0);
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let rk = CashKarp::new(1e-10);
        let mut y = [1.0, 0.0];
        let mut h = 0.01;
        let mut stats = StepStats::default();
        let mut worst: f64 = 0.0;
        rk.integrate(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            &mut y,
            20.0,
            &mut h,
            &mut stats,
            |_, y| {
                worst = worst.max((y[0] * y[0] + y[1] * y[1] - 1.0).abs());
                Ok(())
            },
        )
        .unwrap();
        assert!((y[0] - 20f64.cos()).abs() < 1e-8);
        assert!(worst < 1e-8);
    }

    #[test]
    fn fifth_order_convergence() {
        // fixed-step error ratio for halving h should be ~2^5
        let rk = CashKarp::new(1.0);
        let f = |t: f64, _y: &[f64], dy: &mut [f64]| dy[0] = t.cos();
        let err_for = |h: f64| {
            let mut y = [0.0];
            let mut hh = h;
            let mut s = StepStats::default();
            let mut t = 0.0;
            while t < 2.0 - 1e-12 {
                rk.integrate(f, t, &mut y, t + h, &mut hh, &mut s, |_, _| Ok(()))
                    .unwrap();
                t += h;
            }
            (y[0] - 2f64.sin()).abs()
        };
        let ratio = err_for(0.2) / err_for(0.1);
        assert!(ratio > 20.0, "ratio {ratio}");
    }

    #[test]
    fn underflow_is_reported() {
        let rk = CashKarp {
            h_min: 1e-3,
            ..CashKarp::new(1e-30)
        };
        let mut y = [1.0];
        let mut h = 0.1;
        let mut s = StepStats::default();
        let r = rk.integrate(
            |_, y, dy| dy[0] = 5.0 * y[0],
            0.0,
            &mut y,
            1.0,
            &mut h,
            &mut s,
            |_, _| Ok(()),
        );
        assert!(matches!(r, Err(Error::StepUnderflow { .. })));
    }
}
