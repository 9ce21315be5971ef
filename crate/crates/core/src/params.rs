//! Physical parameters of the oscillating delta barrier
//! `V(x, t) = V0 δ(x) (1 + ε cos Ωt)` together with the incident energy.
//!
//! Every formula in the crate carries ħ and m explicitly. The default unit
//! system is ħ = 1, m = 1/2 (so that `E = k²`), which is the convention used
//! by the figure presets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit system: reduced Planck constant and particle mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for Units {
    fn default() -> Self {
        Units { hbar: 1.0, mass: 0.5 }
    }
}

impl Units {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        check_positive("hbar", hbar)?;
        check_positive("mass", mass)?;
        Ok(Units { hbar, mass })
    }

    /// Squared wavenumber of a free particle with energy `energy`: 2mE/ħ².
    #[inline]
    pub fn k_squared(&self, energy: f64) -> f64 {
        2.0 * self.mass * energy / (self.hbar * self.hbar)
    }

    /// Kinetic energy ħ²k²/2m.
    #[inline]
    pub fn energy_of_k(&self, k: f64) -> f64 {
        self.hbar * self.hbar * k * k / (2.0 * self.mass)
    }

    /// Coupling constant 2m·V0/ħ² of a delta barrier of strength `v0`.
    #[inline]
    pub fn coupling(&self, v0: f64) -> f64 {
        2.0 * self.mass * v0 / (self.hbar * self.hbar)
    }
}

/// Oscillating delta barrier plus incident energy.
///
/// Immutable once built; use the `with_*` methods to derive variants
/// (they re-run validation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct BarrierParams {
    units: Units,
    v0: f64,
    eps: f64,
    omega: f64,
    energy: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawParams {
    hbar: f64,
    mass: f64,
    #[serde(rename = "V0")]
    v0: f64,
    eps: f64,
    omega: f64,
    #[serde(rename = "E")]
    energy: f64,
}

impl TryFrom<RawParams> for BarrierParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        BarrierParams::new(Units::new(raw.hbar, raw.mass)?, raw.v0, raw.eps, raw.omega, raw.energy)
    }
}

impl From<BarrierParams> for RawParams {
    fn from(p: BarrierParams) -> Self {
        RawParams {
            hbar: p.units.hbar,
            mass: p.units.mass,
            v0: p.v0,
            eps: p.eps,
            omega: p.omega,
            energy: p.energy,
        }
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be finite and > 0, got {value}")))
    }
}

impl BarrierParams {
    pub fn new(units: Units, v0: f64, eps: f64, omega: f64, energy: f64) -> Result<Self> {
        check_positive("hbar", units.hbar)?;
        check_positive("mass", units.mass)?;
        check_positive("V0", v0)?;
        check_positive("omega", omega)?;
        check_positive("E", energy)?;
        if !(eps.is_finite() && (0.0..=1.0).contains(&eps)) {
            return Err(Error::invalid("eps", format!("must lie in [0, 1], got {eps}")));
        }
        let b = units.coupling(v0);
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::invalid(
                "V0",
                format!("coupling 2mV0/hbar^2 = {b} is not finite and positive"),
            ));
        }
        Ok(BarrierParams {
            units,
            v0,
            eps,
            omega,
            energy,
        })
    }

    /// Parameters in the default ħ = 2m = 1 units.
    pub fn natural(v0: f64, eps: f64, omega: f64, energy: f64) -> Result<Self> {
        Self::new(Units::default(), v0, eps, omega, energy)
    }

    pub fn units(&self) -> Units {
        self.units
    }
    pub fn hbar(&self) -> f64 {
        self.units.hbar
    }
    pub fn mass(&self) -> f64 {
        self.units.mass
    }
    pub fn v0(&self) -> f64 {
        self.v0
    }
    pub fn eps(&self) -> f64 {
        self.eps
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// B = 2m·V0/ħ².
    pub fn coupling(&self) -> f64 {
        self.units.coupling(self.v0)
    }

    /// Modulation quantum ħΩ.
    pub fn quantum(&self) -> f64 {
        self.units.hbar * self.omega
    }

    pub fn with_energy(&self, energy: f64) -> Result<Self> {
        Self::new(self.units, self.v0, self.eps, self.omega, energy)
    }
    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(self.units, self.v0, self.eps, omega, self.energy)
    }
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Self::new(self.units, self.v0, eps, self.omega, self.energy)
    }
    pub fn with_v0(&self, v0: f64) -> Result<Self> {
        Self::new(self.units, v0, self.eps, self.omega, self.energy)
    }
}
