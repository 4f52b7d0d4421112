//! Fusion-center sparse recovery.
//!
//! * [`solve_l1`] – ℓ1-regularised least squares on the de-mapped amplitudes.
//! * [`biht`] – binary iterative hard thresholding on the received signs.
//! * [`nmse`] / [`amplitude_rescale`] – metrics and the BIHT amplitude fix-up.

mod biht;
mod dense;
mod l1;

pub use biht::{biht, biht_from, hard_threshold, BihtParams};
pub use dense::DenseMatrix;
pub use l1::{lasso_objective, soft_threshold, solve_l1, solve_l1_dense, L1SolverParams, L1Trace};

use crate::error::{Error, Result};
use crate::model::{SparseSignal, SystemParams};

/// Output of a recovery algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub s_hat: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// `‖Φ ŝ - y‖₂` against the vector the algorithm was fed (amplitudes for
    /// ℓ1, `±1` signs for BIHT).
    pub residual_norm: f64,
}

/// Scales a unit-norm direction to the expected signal norm `sqrt(K)·σ_s`.
///
/// The zero vector is returned unchanged.
pub fn amplitude_rescale(direction: &[f64], params: &SystemParams) -> Result<Vec<f64>> {
    let norm = norm2(direction);
    if norm == 0.0 {
        return Ok(direction.to_vec());
    }
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::param(format!("direction must have unit norm, got {norm}")));
    }
    let target = (params.k as f64).sqrt() * params.sigma_s;
    Ok(direction.iter().map(|x| x * target).collect())
}

/// Per-trial squared error and signal energy, `(‖s - ŝ‖², ‖s‖²)`. Sweeps
/// aggregate these as a ratio of sums.
pub fn error_energy(s: &SparseSignal, s_hat: &[f64]) -> Result<(f64, f64)> {
    if s.len() != s_hat.len() {
        return Err(Error::structure(format!(
            "signal length {} vs estimate length {}",
            s.len(),
            s_hat.len()
        )));
    }
    let err = s
        .values()
        .iter()
        .zip(s_hat)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok((err, s.energy()))
}

/// `‖s - ŝ‖² / ‖s‖²` for one trial.
pub fn nmse(s: &SparseSignal, s_hat: &[f64]) -> Result<f64> {
    let (err, energy) = error_energy(s, s_hat)?;
    if energy == 0.0 {
        return Err(Error::param("NMSE is undefined for a zero signal"));
    }
    Ok(err / energy)
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
