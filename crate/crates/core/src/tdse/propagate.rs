//! Wave-packet propagation in the instantaneous eigenbasis.
//!
//! The state is expanded as `ψ = Σ_j c_j e^{−iΦ_j} φ_j(t)` with
//! `Φ_j = ∫ E_j dt / ħ`. The coefficients obey
//!
//! ```text
//! dc_i/dt = −Σ_j ⟨φ_i|∂_t φ_j⟩ e^{−i(Φ_j − Φ_i)} c_j,
//! ```
//!
//! integrated together with the even-state phases by the Cash–Karp stepper.
//! Odd states are stationary: their coefficients stay fixed and their phases
//! are `E_j t/ħ` exactly.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{CashKarp, StepStats};
use crate::params::{BarrierParams, Units};
use crate::tdse::basis::{even_spectrum, InstantBasis, WellSpec};
use crate::tdse::coupling::adiabatic_couplings;

/// Gaussian packet `(2πσ²)^{−1/4} exp(−(x−x0)²/4σ² + i k x)`; `sigma` is the
/// standard deviation of `|ψ|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketSpec {
    pub x0: f64,
    pub sigma: f64,
    pub k_mean: f64,
}

impl PacketSpec {
    pub fn new(x0: f64, sigma: f64, k_mean: f64) -> Result<Self> {
        if !x0.is_finite() {
            return Err(Error::invalid("x0", "must be finite"));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::invalid("sigma", format!("must be > 0, got {sigma}")));
        }
        if !(k_mean.is_finite() && k_mean > 0.0) {
            return Err(Error::invalid("k-mean", format!("must be > 0, got {k_mean}")));
        }
        Ok(PacketSpec { x0, sigma, k_mean })
    }

    /// Packet centred in the left half (`x0 = −L/4`) with `σ = L/32`.
    pub fn left_half(well: &WellSpec, k_mean: f64) -> Result<Self> {
        Self::new(-0.25 * well.length, well.length / 32.0, k_mean)
    }

    /// Packet whose mean kinetic energy is (approximately) `energy`.
    pub fn left_half_at_energy(well: &WellSpec, energy: f64, units: Units) -> Result<Self> {
        Self::left_half(well, units.k_squared(energy).sqrt())
    }

    pub fn momentum_spread(&self) -> f64 {
        0.5 / self.sigma
    }

    pub fn amplitude(&self, x: f64) -> Complex64 {
        let n = (2.0 * std::f64::consts::PI * self.sigma * self.sigma).powf(-0.25);
        let u = (x - self.x0) / self.sigma;
        Complex64::from_polar(n * (-0.25 * u * u).exp(), self.k_mean * x)
    }

    /// `|ψ|²` density in k (not flux weighted).
    pub fn momentum_density(&self, k: f64) -> f64 {
        let d = k - self.k_mean;
        (2.0 / std::f64::consts::PI).sqrt() * self.sigma * (-2.0 * self.sigma * self.sigma * d * d).exp()
    }

    /// Checks that the envelope at both walls and at the barrier is below
    /// `threshold` times its peak.
    pub fn check_support(&self, well: &WellSpec, threshold: f64) -> Result<()> {
        let rel = |x: f64| {
            let u = (x - self.x0) / self.sigma;
            (-0.25 * u * u).exp()
        };
        if !(self.x0 < 0.0 && self.x0 > -0.5 * well.length) {
            return Err(Error::invalid("x0", "packet must start in the left half of the well"));
        }
        for (where_, x) in [("left wall", -0.5 * well.length), ("barrier", 0.0)] {
            let r = rel(x);
            if r > threshold {
                return Err(Error::invalid(
                    "sigma",
                    format!("packet envelope at the {where_} is {r:e} of its peak (limit {threshold:e})"),
                ));
            }
        }
        Ok(())
    }

    /// Overlap `∫ φ_j ψ dx` with each basis state, from the Gaussian Fourier
    /// transform. Assumes the packet vanishes for x ≥ 0.
    pub fn project(&self, basis: &InstantBasis) -> Vec<Complex64> {
        let s = self.sigma;
        let n = (2.0 * std::f64::consts::PI * s * s).powf(-0.25);
        let gauss = |p: f64| {
            Complex64::from_polar(
                2.0 * s * std::f64::consts::PI.sqrt() * (-s * s * p * p).exp(),
                p * self.x0,
            )
        };
        let half = 0.5 * basis.length;
        let inv_2i = Complex64::new(0.0, -0.5);
        let even = basis.even.iter().map(|st| {
            let ph = Complex64::from_polar(1.0, st.k * half);
            n * st.norm * inv_2i * (ph * gauss(self.k_mean + st.k) - ph.conj() * gauss(self.k_mean - st.k))
        });
        let odd = basis
            .odd
            .iter()
            .map(|st| n * st.norm * inv_2i * (gauss(self.k_mean + st.k) - gauss(self.k_mean - st.k)));
        even.chain(odd).collect()
    }
}

/// Levels needed to hold the packet (to 5σ in k) and six sidebands above it.
pub fn minimum_levels(length: f64, packet: &PacketSpec, params: &BarrierParams) -> usize {
    let units = params.units();
    let k_hi = packet.k_mean + 5.0 * packet.momentum_spread();
    let e_top = units.energy_of_k(k_hi) + 6.0 * params.quantum();
    let k_top = units.k_squared(e_top).sqrt();
    (k_top * length / std::f64::consts::PI).ceil() as usize
}

/// [`minimum_levels`] plus a 25% margin, rounded up to an even count.
pub fn default_levels(length: f64, packet: &PacketSpec, params: &BarrierParams) -> usize {
    let n = (1.25 * minimum_levels(length, packet, params) as f64).ceil() as usize;
    n + n % 2
}

/// Coupling `2m·V(t)/ħ²` of the barrier `V0 (1 + ε cos(Ωt + phase))`.
pub fn coupling_at(params: &BarrierParams, phase: f64, t: f64) -> f64 {
    params.coupling() * (1.0 + params.eps() * (params.omega() * t + phase).cos())
}

/// Rate of change of the barrier strength, `dV/dt`.
pub fn strength_rate(params: &BarrierParams, phase: f64, t: f64) -> f64 {
    -params.v0() * params.eps() * params.omega() * (params.omega() * t + phase).sin()
}

/// `∫_{x>0} |ψ|² dx` for amplitudes `a_j` (phases included) on `basis`.
pub fn p_right(basis: &InstantBasis, amplitudes: &[Complex64]) -> f64 {
    let ne = basis.even.len();
    let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    let mut cross = 0.0;
    for e in 0..ne {
        let ae = amplitudes[e].conj();
        for o in 0..basis.odd.len() {
            cross += basis.right_overlap_even_odd(e, o) * (ae * amplitudes[ne + o]).re;
        }
    }
    0.5 * norm + 2.0 * cross
}

/// Time for the packet centre to reach the barrier, `|x0| m / ħk`.
pub fn crossing_time(packet: &PacketSpec, units: Units) -> f64 {
    packet.x0.abs() * units.mass / (units.hbar * packet.k_mean)
}

/// Latest time before the fast edge of the packet (k̄ + 3σ_k), after
/// hitting the barrier, returns from a wall.
pub fn default_t_final(well: &WellSpec, packet: &PacketSpec, units: Units) -> f64 {
    let k_fast = packet.k_mean + 3.0 * packet.momentum_spread();
    let v_fast = units.hbar * k_fast / units.mass;
    0.95 * (packet.x0.abs() + well.length) / v_fast
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagationOptions {
    /// Absolute local error per step and component.
    pub tol: f64,
    /// Spacing of recorded samples; `None` picks `t_final / 400`.
    pub sample_dt: Option<f64>,
    pub initial_step: f64,
    /// Envelope threshold for [`PacketSpec::check_support`].
    pub support_threshold: f64,
    /// Largest tolerated `1 − Σ|c_j|²` of the projected packet.
    pub max_projection_loss: f64,
    /// Drive phase φ at launch: `V(t) = V0 (1 + ε cos(Ωt + φ))`.
    pub phase: f64,
}

impl Default for PropagationOptions {
    fn default() -> Self {
        PropagationOptions {
            tol: 1e-8,
            sample_dt: None,
            initial_step: 1e-3,
            support_threshold: 1e-6,
            max_projection_loss: 1e-6,
            phase: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub norm: f64,
    pub p_right: f64,
    /// Instantaneous barrier coupling 2mV(t)/ħ².
    pub coupling: f64,
    /// `c_j e^{−iΦ_j}`, even states first.
    #[serde(with = "crate::io::reim_vec")]
    pub amplitudes: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TdseRun {
    pub well: WellSpec,
    pub packet: PacketSpec,
    pub params: BarrierParams,
    pub t: f64,
    /// Current adiabatic coefficients c_j, even states first.
    #[serde(with = "crate::io::reim_vec")]
    pub coefficients: Vec<Complex64>,
    /// Accumulated dynamical phases Φ_j.
    pub phases: Vec<f64>,
    pub history: Vec<Sample>,
    pub stats: StepStats,
    /// Σ|c_j|² of the raw projection before renormalisation.
    pub captured_norm: f64,
    pub max_norm_drift: f64,
    /// Basis energies at t = 0 with the packet's populations.
    pub initial_weights: Vec<(f64, f64)>,
}

impl TdseRun {
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.history.iter().map(|s| (s.t, s.norm, s.p_right))
    }
}

fn sample_at(
    params: &BarrierParams,
    phase: f64,
    well: &WellSpec,
    t: f64,
    c_even: &[Complex64],
    phases: &[f64],
    c_odd: &[Complex64],
) -> Result<Sample> {
    let units = params.units();
    let coupling = coupling_at(params, phase, t);
    let basis = InstantBasis::new(coupling, well, units)?;
    let mut amplitudes: Vec<Complex64> = c_even
        .iter()
        .zip(phases)
        .map(|(c, ph)| c * Complex64::from_polar(1.0, -ph))
        .collect();
    amplitudes.extend(
        c_odd
            .iter()
            .zip(&basis.odd)
            .map(|(c, st)| c * Complex64::from_polar(1.0, -st.energy * t / units.hbar)),
    );
    let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    Ok(Sample {
        t,
        norm,
        p_right: p_right(&basis, &amplitudes),
        coupling,
        amplitudes,
    })
}

/// Propagates `packet` from t = 0 to `t_final`.
pub fn propagate(
    well: &WellSpec,
    packet: &PacketSpec,
    params: &BarrierParams,
    t_final: f64,
    opts: &PropagationOptions,
) -> Result<TdseRun> {
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(Error::invalid("t-final", format!("must be > 0, got {t_final}")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::invalid("tol", format!("must be > 0, got {}", opts.tol)));
    }
    packet.check_support(well, opts.support_threshold)?;
    let needed = minimum_levels(well.length, packet, params);
    if well.n_levels < needed {
        return Err(Error::invalid(
            "levels",
            format!(
                "{} levels cannot hold the packet and its first sidebands; need >= {needed}",
                well.n_levels
            ),
        ));
    }

    let units = params.units();
    let basis0 = InstantBasis::new(coupling_at(params, opts.phase, 0.0), well, units)?;
    let mut c = packet.project(&basis0);
    let captured: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    if 1.0 - captured > opts.max_projection_loss {
        return Err(Error::invalid(
            "levels",
            format!("basis captures only {captured} of the packet norm"),
        ));
    }
    let scale = captured.sqrt().recip();
    c.iter_mut().for_each(|z| *z *= scale);
    let initial_weights = basis0
        .energies()
        .into_iter()
        .zip(c.iter().map(|z| z.norm_sqr()))
        .collect();

    let ne = well.n_even();
    let c_odd: Vec<Complex64> = c[ne..].to_vec();
    let odd_pop: f64 = c_odd.iter().map(|z| z.norm_sqr()).sum();

    // y = [Re c_e..., Im c_e..., Φ_e...]
    let mut y = vec![0.0; 3 * ne];
    for j in 0..ne {
        y[j] = c[j].re;
        y[ne + j] = c[j].im;
    }

    let sample_dt = opts.sample_dt.unwrap_or(t_final / 400.0);
    if !(sample_dt > 0.0) {
        return Err(Error::invalid("sample-dt", "must be > 0"));
    }
    let split = |y: &[f64]| -> (Vec<Complex64>, Vec<f64>) {
        let ce = (0..ne).map(|j| Complex64::new(y[j], y[ne + j])).collect();
        (ce, y[2 * ne..].to_vec())
    };

    let mut history = Vec::new();
    {
        let (ce, ph) = split(&y);
        history.push(sample_at(params, opts.phase, well, 0.0, &ce, &ph, &c_odd)?);
    }

    let hbar = units.hbar;
    let rhs_error: std::cell::RefCell<Option<Error>> = std::cell::RefCell::new(None);
    let mut rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let b = coupling_at(params, opts.phase, t);
        let even = match even_spectrum(b, well, units) {
            Ok(e) => e,
            Err(e) => {
                rhs_error.borrow_mut().get_or_insert(e);
                dy.fill(0.0);
                return;
            }
        };
        let vdot = strength_rate(params, opts.phase, t);
        for j in 0..ne {
            dy[2 * ne + j] = even[j].energy / hbar;
        }
        if vdot == 0.0 {
            dy[..2 * ne].fill(0.0);
            return;
        }
        let basis = InstantBasis {
            coupling: b,
            length: well.length,
            even,
            odd: Vec::new(),
        };
        let a = match adiabatic_couplings(&basis, vdot) {
            Ok(a) => a,
            Err(e) => {
                rhs_error.borrow_mut().get_or_insert(e);
                dy.fill(0.0);
                return;
            }
        };
        let block = a.even_block();
        let u: Vec<Complex64> = (0..ne)
            .map(|j| Complex64::new(y[j], y[ne + j]) * Complex64::from_polar(1.0, -y[2 * ne + j]))
            .collect();
        for i in 0..ne {
            let row = &block[i * ne..(i + 1) * ne];
            let s: Complex64 = row.iter().zip(&u).map(|(a, u)| a * u).sum();
            let d = -Complex64::from_polar(1.0, y[2 * ne + i]) * s;
            dy[i] = d.re;
            dy[ne + i] = d.im;
        }
    };

    let stepper = CashKarp::new(opts.tol);
    let mut stats = StepStats::default();
    let mut h = opts.initial_step;
    let limit = 10.0 * opts.tol;
    let mut max_drift: f64 = 0.0;
    let mut t = 0.0;
    let n_samples = (t_final / sample_dt).ceil() as usize;
    for s in 1..=n_samples {
        let t_next = (s as f64 * sample_dt).min(t_final);
        stepper.integrate(&mut rhs, t, &mut y, t_next, &mut h, &mut stats, |t, y| {
            let pop: f64 = (0..ne).map(|j| y[j] * y[j] + y[ne + j] * y[ne + j]).sum::<f64>() + odd_pop;
            let drift = (pop - 1.0).abs();
            max_drift = max_drift.max(drift);
            if drift > limit {
                return Err(Error::NormDrift { t, drift, limit });
            }
            Ok(())
        })?;
        if let Some(e) = rhs_error.borrow_mut().take() {
            return Err(e);
        }
        t = t_next;
        let (ce, ph) = split(&y);
        history.push(sample_at(params, opts.phase, well, t, &ce, &ph, &c_odd)?);
    }

    let (ce, ph) = split(&y);
    let mut coefficients = ce;
    coefficients.extend_from_slice(&c_odd);
    let mut phases = ph;
    phases.extend(basis0.odd.iter().map(|st| st.energy * t / hbar));
    Ok(TdseRun {
        well: *well,
        packet: *packet,
        params: *params,
        t,
        coefficients,
        phases,
        history,
        stats,
        captured_norm: captured,
        max_norm_drift: max_drift,
        initial_weights,
    })
}

/// P_right at the recorded sample nearest to `t`.
pub fn transmitted_probability(run: &TdseRun, t: f64) -> Result<f64> {
    let (start, end) = match (run.history.first(), run.history.last()) {
        (Some(a), Some(b)) => (a.t, b.t),
        _ => {
            return Err(Error::OutsideHistory {
                t,
                start: 0.0,
                end: 0.0,
            })
        }
    };
    let slack = 1e-12 * end.abs().max(1.0);
    if !(t >= start - slack && t <= end + slack) {
        return Err(Error::OutsideHistory { t, start, end });
    }
    let nearest = run
        .history
        .iter()
        .min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
        .expect("non-empty history");
    Ok(nearest.p_right)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateauOptions {
    /// Length of the flat stretch, in time units.
    pub window: f64,
    /// Allowed spread (max − min) over the window relative to its mean.
    pub rel_tol: f64,
    /// Fraction of max P_right marking the start of the collision.
    pub onset: f64,
}

impl Default for PlateauOptions {
    fn default() -> Self {
        PlateauOptions {
            window: 0.5,
            rel_tol: 1e-3,
            onset: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plateau {
    pub t_start: f64,
    pub t_end: f64,
    /// Mean P_right over the plateau window.
    pub value: f64,
    /// False when no flat stretch was found; `value` then averages the
    /// final window.
    pub found: bool,
}

/// First post-collision stretch where P_right stays flat.
pub fn find_plateau(run: &TdseRun, opts: &PlateauOptions) -> Plateau {
    let trace: Vec<(f64, f64)> = run.history.iter().map(|s| (s.t, s.p_right)).collect();
    plateau_of_trace(&trace, opts)
}

/// [`find_plateau`] on a bare `(t, P_right)` trace.
pub fn plateau_of_trace(h: &[(f64, f64)], opts: &PlateauOptions) -> Plateau {
    assert!(!h.is_empty(), "empty trace");
    let mean_over = |a: usize, b: usize| h[a..=b].iter().map(|s| s.1).sum::<f64>() / (b - a + 1) as f64;
    let last = h.len() - 1;
    let p_max = h.iter().map(|s| s.1).fold(0.0, f64::max);
    let onset = h.iter().position(|s| s.1 >= opts.onset * p_max).unwrap_or(0);
    let end_of = |i: usize| h[i..].iter().position(|s| s.0 - h[i].0 >= opts.window).map(|d| i + d);
    for i in onset..=last {
        let Some(j) = end_of(i) else { break };
        let (lo, hi) = h[i..=j].iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(s.1), hi.max(s.1))
        });
        let mean = mean_over(i, j);
        if hi - lo <= opts.rel_tol * mean.abs().max(1e-12) {
            return Plateau {
                t_start: h[i].0,
                t_end: h[j].0,
                value: mean,
                found: true,
            };
        }
    }
    let start = h.iter().position(|s| h[last].0 - s.0 <= opts.window).unwrap_or(last);
    Plateau {
        t_start: h[start].0,
        t_end: h[last].0,
        value: mean_over(start, last),
        found: false,
    }
}

/// Number of launch phases needed to average out interference between
/// packet components separated by multiples of ħΩ.
pub fn phase_count(packet: &PacketSpec, params: &BarrierParams) -> usize {
    if params.eps() == 0.0 {
        return 1;
    }
    let u = params.units();
    let sigma_e = u.hbar * u.hbar * packet.k_mean.abs() * packet.momentum_spread() / u.mass;
    let m = (9.0 * sigma_e / params.quantum()).ceil() as usize;
    m.clamp(4, 64)
}

/// P_right(t) averaged over uniformly spaced drive phases at launch.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseAverage {
    pub phases: Vec<f64>,
    /// `(t, ⟨P_right⟩)` on the common sampling grid.
    pub trace: Vec<(f64, f64)>,
    /// `(t, ⟨norm⟩)`.
    pub norm: Vec<(f64, f64)>,
    pub max_norm_drift: f64,
    pub stats: StepStats,
}

impl PhaseAverage {
    pub fn plateau(&self, opts: &PlateauOptions) -> Plateau {
        plateau_of_trace(&self.trace, opts)
    }
}

/// Runs `count` propagations with launch phases `opts.phase + 2πj/count`.
pub fn propagate_phase_averaged(
    well: &WellSpec,
    packet: &PacketSpec,
    params: &BarrierParams,
    t_final: f64,
    opts: &PropagationOptions,
    count: usize,
) -> Result<PhaseAverage> {
    if count == 0 {
        return Err(Error::invalid("phases", "need at least one phase"));
    }
    let sample_dt = opts.sample_dt.unwrap_or(t_final / 400.0);
    let phases: Vec<f64> = (0..count)
        .map(|j| opts.phase + 2.0 * std::f64::consts::PI * j as f64 / count as f64)
        .collect();
    let runs = phases
        .par_iter()
        .map(|&phase| {
            let o = PropagationOptions {
                phase,
                sample_dt: Some(sample_dt),
                ..*opts
            };
            propagate(well, packet, params, t_final, &o)
        })
        .collect::<Result<Vec<_>>>()?;
    let len = runs.iter().map(|r| r.history.len()).min().unwrap_or(0);
    let w = 1.0 / count as f64;
    let average = |f: fn(&Sample) -> f64| -> Vec<(f64, f64)> {
        (0..len)
            .map(|i| {
                (
                    runs[0].history[i].t,
                    runs.iter().map(|r| f(&r.history[i])).sum::<f64>() * w,
                )
            })
            .collect()
    };
    let mut stats = StepStats::default();
    for r in &runs {
        stats.accepted += r.stats.accepted;
        stats.rejected += r.stats.rejected;
        stats.rhs_evals += r.stats.rhs_evals;
    }
    Ok(PhaseAverage {
        trace: average(|s| s.p_right),
        norm: average(|s| s.norm),
        max_norm_drift: runs.iter().map(|r| r.max_norm_drift).fold(0.0, f64::max),
        stats,
        phases,
    })
}
