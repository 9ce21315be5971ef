//! Reference time scales for a rectangular barrier of height V and width d.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Units;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectBarrierParams {
    pub units: Units,
    /// Barrier height.
    pub v: f64,
    /// Barrier width.
    pub d: f64,
    pub energy: f64,
}

impl RectBarrierParams {
    /// Requires a tunneling configuration `V > E > 0` and `d > 0`.
    pub fn new(units: Units, v: f64, d: f64, energy: f64) -> Result<Self> {
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(Error::invalid("E", format!("must be > 0, got {energy}")));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::invalid("d", format!("must be > 0, got {d}")));
        }
        if !(v > energy) || !v.is_finite() {
            return Err(Error::Domain(format!(
                "rectangular barrier needs V > E (got V = {v}, E = {energy}); kappa would be imaginary"
            )));
        }
        Ok(RectBarrierParams { units, v, d, energy })
    }

    /// κ = √(2m(V − E))/ħ.
    pub fn kappa(&self) -> f64 {
        self.units.k_squared(self.v - self.energy).sqrt()
    }

    /// Incident wavenumber k = √(2mE)/ħ.
    pub fn k(&self) -> f64 {
        self.units.k_squared(self.energy).sqrt()
    }

    /// k₀ = √(2mV)/ħ. Not the incident wavenumber of the delta problem.
    pub fn k0(&self) -> f64 {
        self.units.k_squared(self.v).sqrt()
    }

    /// τ_BL = m d/(ħκ), the traversal time under the barrier.
    pub fn tau_bl(&self) -> f64 {
        self.units.mass * self.d / (self.units.hbar * self.kappa())
    }

    /// Large-frequency asymmetry tanh(Ω τ_BL).
    pub fn high_frequency_asymmetry(&self, omega: f64) -> f64 {
        (omega * self.tau_bl()).tanh()
    }
}

/// Low-frequency sideband time of a rectangular barrier:
///
/// ```text
/// τ = (m/ħκ²) [ ((κ²−k²)²κ²d² + k₀⁴(1+κ²d²) sinh²κd + k₀²κd(κ²−k²) sinh 2κd)
///               / (4k²κ² + k₀⁴ sinh²κd) ]^{1/2}
/// ```
pub fn tau_bl_rect(rect: &RectBarrierParams) -> f64 {
    let (kappa, k, k0) = (rect.kappa(), rect.k(), rect.k0());
    let (k2, q2, k04) = (k * k, kappa * kappa, k0.powi(4));
    let kd = kappa * rect.d;
    // numerator and denominator divided by sinh²κd
    let inv_s = 1.0 / kd.sinh();
    let coth = 1.0 / kd.tanh();
    let num = (q2 - k2).powi(2) * q2 * rect.d * rect.d * inv_s * inv_s
        + k04 * (1.0 + kd * kd)
        + 2.0 * k0 * k0 * kd * (q2 - k2) * coth;
    let den = 4.0 * k2 * q2 * inv_s * inv_s + k04;
    rect.units.mass / (rect.units.hbar * q2) * (num / den).sqrt()
}

/// Opaque-barrier asymptote of [`tau_bl_rect`], keeping only the sinh terms:
/// `(m/ħκ²) √(1 + κ²d² + 2κd(κ² − k²)/k₀²)`.
pub fn opaque_tau(rect: &RectBarrierParams) -> f64 {
    let (kappa, k, k0) = (rect.kappa(), rect.k(), rect.k0());
    let kd = kappa * rect.d;
    let inner = 1.0 + kd * kd + 2.0 * kd * (kappa * kappa - k * k) / (k0 * k0);
    rect.units.mass / (rect.units.hbar * kappa * kappa) * inner.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn units() -> Units {
        Units::default()
    }

    #[test]
    fn rejects_non_tunneling_input() {
        assert!(matches!(
            RectBarrierParams::new(units(), 2.0, 1.0, 2.0),
            Err(Error::Domain(_))
        ));
        assert!(RectBarrierParams::new(units(), 2.0, 0.0, 1.0).is_err());
        assert!(RectBarrierParams::new(units(), 2.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn opaque_limit() {
        // κd = 10 with κ² = V − E = 4 (ħ = 2m = 1): d = 5
        let r = RectBarrierParams::new(units(), 5.0, 5.0, 1.0).unwrap();
        assert!((r.kappa() * r.d - 10.0).abs() < 1e-12);
        assert!((tau_bl_rect(&r) / opaque_tau(&r) - 1.0).abs() < 1e-2);
    }

    #[test]
    fn thick_barrier_approaches_traversal_time() {
        let r = RectBarrierParams::new(units(), 5.0, 200.0, 1.0).unwrap();
        assert!((tau_bl_rect(&r) / r.tau_bl() - 1.0).abs() < 1e-2);
    }

    #[test]
    fn vanishes_in_delta_limit() {
        let (v0, e) = (10.0, 2.5);
        let mut last = f64::INFINITY;
        for i in 0..=16 {
            let d = 10f64.powf(-(i as f64) / 4.0);
            let r = RectBarrierParams::new(units(), v0 / d, d, e).unwrap();
            let t = tau_bl_rect(&r);
            assert!(t > 0.0 && t < last, "d = {d}: {t} !< {last}");
            last = t;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn high_frequency_form() {
        let r = RectBarrierParams::new(units(), 5.0, 1.0, 1.0).unwrap();
        assert_eq!(r.high_frequency_asymmetry(0.0), 0.0);
        assert!((r.high_frequency_asymmetry(1e3) - 1.0).abs() < 1e-12);
    }
}
