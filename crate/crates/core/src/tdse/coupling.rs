//! Non-adiabatic couplings `⟨φ_i|∂_t φ_j⟩` of the instantaneous basis.
//!
//! With `∂_t H = V̇(t) δ(x)` the Hellmann–Feynman identity gives
//! `⟨φ_i|∂_t φ_j⟩ = V̇ φ_i(0) φ_j(0) / (E_j − E_i)` for `i ≠ j`. Diagonal
//! terms vanish for a real normalised basis, and odd states (φ(0) = 0) are
//! untouched, so only the even–even block is stored.

use crate::error::{Error, Result};
use crate::tdse::basis::InstantBasis;

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    n_even: usize,
    n_odd: usize,
    even_block: Vec<f64>,
}

impl CouplingMatrix {
    pub fn dim(&self) -> usize {
        self.n_even + self.n_odd
    }

    pub fn n_even(&self) -> usize {
        self.n_even
    }

    /// Entry for combined indices (even states first, then odd).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.dim() && j < self.dim());
        if i < self.n_even && j < self.n_even {
            self.even_block[i * self.n_even + j]
        } else {
            0.0
        }
    }

    /// Row-major even–even block.
    pub fn even_block(&self) -> &[f64] {
        &self.even_block
    }
}

/// Couplings for a barrier whose strength changes at rate `dv_dt`
/// (units of V0 per unit time).
pub fn adiabatic_couplings(basis: &InstantBasis, dv_dt: f64) -> Result<CouplingMatrix> {
    let n = basis.even.len();
    let mut block = vec![0.0; n * n];
    let scale = basis.even.iter().map(|s| s.energy.abs()).fold(0.0, f64::max);
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = basis.even[j].energy - basis.even[i].energy;
            if gap.abs() <= 1e-12 * scale {
                return Err(Error::NearDegenerate { i, j, gap: gap.abs() });
            }
            let a = dv_dt * basis.even[i].psi0 * basis.even[j].psi0 / gap;
            block[i * n + j] = a;
            block[j * n + i] = -a;
        }
    }
    Ok(CouplingMatrix {
        n_even: n,
        n_odd: basis.odd.len(),
        even_block: block,
    })
}
