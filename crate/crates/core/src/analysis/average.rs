//! Transmission averaged over the energy content of a packet.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fs::{converge_truncation, TruncationOptions};
use crate::params::{BarrierParams, Units};
use crate::tdse::{
    phase_count, propagate_phase_averaged, InstantBasis, PacketSpec, Plateau, PlateauOptions, PropagationOptions,
    WellSpec,
};

/// Weights must be non-negative and sum to one within 1e-10.
pub fn validate_weights(weights: &[(f64, f64)]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::invalid("weights", "empty"));
    }
    if let Some((e, w)) = weights
        .iter()
        .find(|(e, w)| !(*w >= 0.0) || !(*e > 0.0) || !e.is_finite())
    {
        return Err(Error::invalid("weights", format!("bad entry (E = {e}, w = {w})")));
    }
    let total: f64 = weights.iter().map(|p| p.1).sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::invalid("weights", format!("sum to {total}, expected 1")));
    }
    Ok(())
}

/// Σ_E w(E) · (total transmitted flux at E), each term from the full solution.
pub fn energy_averaged_transmission(
    weights: &[(f64, f64)],
    template: &BarrierParams,
    omega: f64,
    trunc: &TruncationOptions,
) -> Result<f64> {
    validate_weights(weights)?;
    let base = template.with_omega(omega)?;
    let terms = weights
        .par_iter()
        .filter(|(_, w)| *w > 0.0)
        .map(|&(e, w)| {
            let p = base.with_energy(e)?;
            let sol = converge_truncation(&p, trunc).map_err(|err| Error::AtEnergy {
                energy: e,
                source: Box::new(err),
            })?;
            Ok(w * sol.transmitted_flux)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(terms.iter().sum())
}

/// Populations of the packet on the eigenstates of the well with the
/// static barrier V₀, keyed by eigenenergy and renormalized to one.
pub fn well_weights(well: &WellSpec, packet: &PacketSpec, params: &BarrierParams) -> Result<Vec<(f64, f64)>> {
    let basis = InstantBasis::new(params.coupling(), well, params.units())?;
    let c = packet.project(&basis);
    let total: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    Ok(basis
        .energies()
        .into_iter()
        .zip(c)
        .map(|(e, z)| (e, z.norm_sqr() / total))
        .collect())
}

/// |φ(k)|² of the packet on `points` uniform k nodes within ±7σ_k of the
/// mean (positive k only), mapped to E and normalized.
pub fn momentum_weights(packet: &PacketSpec, units: Units, points: usize) -> Result<Vec<(f64, f64)>> {
    if points < 2 {
        return Err(Error::invalid("points", "need at least two nodes"));
    }
    let spread = 7.0 * packet.momentum_spread();
    let hi = packet.k_mean.abs() + spread;
    let lo = (packet.k_mean.abs() - spread).max(hi * 1e-6);
    let dk = (hi - lo) / (points - 1) as f64;
    let mut w: Vec<(f64, f64)> = (0..points)
        .map(|i| {
            let k = lo + dk * i as f64;
            (units.energy_of_k(k), packet.momentum_density(k.copysign(packet.k_mean)))
        })
        .collect();
    let total: f64 = w.iter().map(|p| p.1).sum();
    w.iter_mut().for_each(|p| p.1 /= total);
    Ok(w)
}

/// Packet transmission at one Ω from the full solution and from direct
/// propagation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsComparison {
    pub omega: f64,
    /// Energy-averaged full-solution transmission.
    pub p_fs: f64,
    /// Plateau of the phase-averaged P_right(t).
    pub p_tdse: f64,
    pub phases: usize,
    pub plateau: Plateau,
    pub max_norm_drift: f64,
}

impl DynamicsComparison {
    pub fn relative_deviation(&self) -> f64 {
        (self.p_tdse - self.p_fs).abs() / self.p_fs.abs()
    }
}

/// `phases = None` picks [`phase_count`].
pub fn compare_with_dynamics(
    template: &BarrierParams,
    well: &WellSpec,
    packet: &PacketSpec,
    omega: f64,
    t_final: f64,
    opts: &PropagationOptions,
    phases: Option<usize>,
) -> Result<DynamicsComparison> {
    let params = template.with_omega(omega)?;
    let weights = well_weights(well, packet, &params)?;
    let p_fs = energy_averaged_transmission(&weights, &params, omega, &TruncationOptions::default())?;
    let count = phases.unwrap_or_else(|| phase_count(packet, &params));
    let run =
        propagate_phase_averaged(well, packet, &params, t_final, opts, count).map_err(|e| Error::AtFrequency {
            omega,
            source: Box::new(e),
        })?;
    let plateau = run.plateau(&PlateauOptions::default());
    Ok(DynamicsComparison {
        omega,
        p_fs,
        p_tdse: plateau.value,
        phases: count,
        plateau,
        max_norm_drift: run.max_norm_drift,
    })
}
