//! Sideband channels `E + nħΩ`, their wavenumbers and the energy regimes.
//!
//! The wavenumber is read as `k_n² = 2m·E_n/ħ²` with `E_n = ħω_n`. For
//! negative `ω_n` the decaying root `k_n = iκ_n`, `κ_n > 0`, is chosen so the
//! sideband decays away from the barrier on both sides.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::params::{BarrierParams, Units};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelKind {
    Propagating,
    Evanescent,
    /// `ω_n = 0`: zero wavenumber, no flux. Treated as evanescent in the
    /// linear systems.
    Threshold,
}

impl ChannelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChannelKind::Propagating => "propagating",
            ChannelKind::Evanescent => "evanescent",
            ChannelKind::Threshold => "threshold",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "propagating" => Some(ChannelKind::Propagating),
            "evanescent" => Some(ChannelKind::Evanescent),
            "threshold" => Some(ChannelKind::Threshold),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    pub n: i32,
    /// ω_n = (E + nħΩ)/ħ.
    pub omega_n: f64,
    #[serde(with = "crate::io::reim")]
    pub k: Complex64,
    pub kind: ChannelKind,
}

impl Channel {
    pub fn is_propagating(&self) -> bool {
        self.kind == ChannelKind::Propagating
    }
}

/// Sideband channel `n` for the given barrier.
pub fn channel(params: &BarrierParams, n: i32) -> Channel {
    let units = params.units();
    let e = params.energy();
    let shift = n as f64 * params.quantum();
    let e_n = e + shift;
    // E + nħΩ that cancels to within rounding is a threshold.
    let scale = e.abs().max(shift.abs());
    let omega_n = e_n / units.hbar;
    if e_n.abs() <= 4.0 * f64::EPSILON * scale {
        return Channel {
            n,
            omega_n: 0.0,
            k: Complex64::new(0.0, 0.0),
            kind: ChannelKind::Threshold,
        };
    }
    let k2 = units.k_squared(e_n);
    if k2 > 0.0 {
        Channel {
            n,
            omega_n,
            k: Complex64::new(k2.sqrt(), 0.0),
            kind: ChannelKind::Propagating,
        }
    } else {
        Channel {
            n,
            omega_n,
            k: Complex64::new(0.0, (-k2).sqrt()),
            kind: ChannelKind::Evanescent,
        }
    }
}

/// Energy regimes relative to the modulation quantum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// E > 2ħΩ: channels −1 and −2 both propagate.
    A,
    /// ħΩ < E < 2ħΩ: channel −1 propagates, −2 is evanescent.
    B,
    /// E < ħΩ: channels −1 and −2 are evanescent.
    C,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::A => "A",
            Regime::B => "B",
            Regime::C => "C",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "A" => Some(Regime::A),
            "B" => Some(Regime::B),
            "C" => Some(Regime::C),
            _ => None,
        }
    }
}

/// Regime plus a flag set when E sits exactly on ħΩ or 2ħΩ; boundary
/// points are assigned to the lower regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeClass {
    pub regime: Regime,
    pub boundary: bool,
}

pub fn classify_regime(params: &BarrierParams) -> RegimeClass {
    let e = params.energy();
    let q = params.quantum();
    let (regime, boundary) = if e > 2.0 * q {
        (Regime::A, false)
    } else if e == 2.0 * q {
        (Regime::B, true)
    } else if e > q {
        (Regime::B, false)
    } else if e == q {
        (Regime::C, true)
    } else {
        (Regime::C, false)
    };
    RegimeClass { regime, boundary }
}

/// Transmission probability of a static delta barrier of strength `v0`
/// at energy `energy`: `1 / (1 + (B/2k)²)`. `v0 = 0` gives 1.
pub fn delta_transmission(units: Units, v0: f64, energy: f64) -> f64 {
    let b = units.coupling(v0);
    let k = units.k_squared(energy).sqrt();
    let ratio = b / (2.0 * k);
    1.0 / (1.0 + ratio * ratio)
}

/// T₀ = |t₀|² of the unmodulated barrier.
pub fn static_transmission(params: &BarrierParams) -> f64 {
    delta_transmission(params.units(), params.v0(), params.energy())
}
