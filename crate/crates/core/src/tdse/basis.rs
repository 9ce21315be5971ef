//! Instantaneous eigenstates of an infinite well `[−L/2, L/2]` with a delta
//! barrier of coupling `B = 2m·V/ħ²` at the centre.
//!
//! Odd states never see the barrier: `sin(qx)` with `q = 2jπ/L`. Even states
//! are `A sin(k(L/2 − |x|))` with `tan(kL/2) = −2k/B`; the j-th root lies in
//! `((2j−1)π/L, 2jπ/L)` for `B > 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Units;
use crate::roots::bracketed_root;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellSpec {
    /// Well width L; the walls sit at ±L/2.
    pub length: f64,
    /// Number of retained eigenstates, even and odd together.
    pub n_levels: usize,
}

impl WellSpec {
    pub fn new(length: f64, n_levels: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::invalid("L", format!("must be finite and > 0, got {length}")));
        }
        if n_levels < 2 {
            return Err(Error::invalid("levels", "need at least two levels"));
        }
        Ok(WellSpec { length, n_levels })
    }

    pub fn n_even(&self) -> usize {
        self.n_levels.div_ceil(2)
    }

    pub fn n_odd(&self) -> usize {
        self.n_levels / 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvenState {
    pub k: f64,
    pub energy: f64,
    /// Normalisation A of `A sin(k(L/2 − |x|))`.
    pub norm: f64,
    /// Value at the barrier, `A sin(kL/2)`.
    pub psi0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OddState {
    pub k: f64,
    pub energy: f64,
    pub norm: f64,
}

/// Matching function `B sin(kL/2) + 2k cos(kL/2)`; zero at even eigenstates.
#[inline]
pub fn even_condition(k: f64, coupling: f64, length: f64) -> f64 {
    let (s, c) = (0.5 * k * length).sin_cos();
    coupling * s + 2.0 * k * c
}

/// Lowest `count` even eigenstates for barrier coupling `coupling ≥ 0`.
pub fn even_spectrum_n(coupling: f64, length: f64, count: usize, units: Units) -> Result<Vec<EvenState>> {
    if !(coupling >= 0.0 && coupling.is_finite()) {
        return Err(Error::invalid(
            "B",
            format!("barrier coupling must be finite and >= 0, got {coupling}"),
        ));
    }
    let step = PI / length;
    (1..=count)
        .map(|j| {
            let lo = (2 * j - 1) as f64 * step;
            let hi = (2 * j) as f64 * step;
            let k = if coupling == 0.0 {
                lo
            } else {
                let xtol = 1e-15 * hi;
                bracketed_root(|k| even_condition(k, coupling, length), lo, hi, xtol)?
            };
            let half = 0.5 * k * length;
            let norm = 1.0 / (0.5 * length - (k * length).sin() / (2.0 * k)).sqrt();
            Ok(EvenState {
                k,
                energy: units.energy_of_k(k),
                norm,
                psi0: norm * half.sin(),
            })
        })
        .collect()
}

/// The `well.n_even()` lowest even eigenstates at coupling `coupling`.
pub fn even_spectrum(coupling: f64, well: &WellSpec, units: Units) -> Result<Vec<EvenState>> {
    even_spectrum_n(coupling, well.length, well.n_even(), units)
}

pub fn odd_spectrum(well: &WellSpec, units: Units) -> Vec<OddState> {
    let norm = (2.0 / well.length).sqrt();
    (1..=well.n_odd())
        .map(|j| {
            let k = 2.0 * j as f64 * PI / well.length;
            OddState {
                k,
                energy: units.energy_of_k(k),
                norm,
            }
        })
        .collect()
}

/// Retained eigenbasis at one instant. Index order: even states, then odd.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstantBasis {
    pub coupling: f64,
    pub length: f64,
    pub even: Vec<EvenState>,
    pub odd: Vec<OddState>,
}

impl InstantBasis {
    pub fn new(coupling: f64, well: &WellSpec, units: Units) -> Result<Self> {
        Ok(InstantBasis {
            coupling,
            length: well.length,
            even: even_spectrum(coupling, well, units)?,
            odd: odd_spectrum(well, units),
        })
    }

    pub fn len(&self) -> usize {
        self.even.len() + self.odd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn energies(&self) -> Vec<f64> {
        self.even
            .iter()
            .map(|s| s.energy)
            .chain(self.odd.iter().map(|s| s.energy))
            .collect()
    }

    /// φ_i(x) for the combined index.
    pub fn value(&self, i: usize, x: f64) -> f64 {
        if x.abs() > 0.5 * self.length {
            return 0.0;
        }
        if let Some(s) = self.even.get(i) {
            s.norm * (s.k * (0.5 * self.length - x.abs())).sin()
        } else {
            let s = &self.odd[i - self.even.len()];
            s.norm * (s.k * x).sin()
        }
    }

    /// ∫₀^{L/2} φ_e φ_o dx for even state `e` and odd state `o`.
    pub fn right_overlap_even_odd(&self, e: usize, o: usize) -> f64 {
        let ev = &self.even[e];
        let od = &self.odd[o];
        let q = od.k;
        let k = ev.k;
        ev.norm * od.norm * (-q * (0.5 * k * self.length).sin() / (k * k - q * q))
    }
}
