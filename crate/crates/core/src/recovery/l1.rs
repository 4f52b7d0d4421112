use super::dense::{dot, DenseMatrix};
use super::{norm2, RecoveryResult};
use crate::error::{Error, Result};
use crate::model::SensingMatrix;

/// Settings for [`solve_l1`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1SolverParams {
    /// Weight of the ℓ1 penalty in `½‖Φs - y‖² + λ‖s‖₁`.
    pub lambda: f64,
    pub max_iters: usize,
    /// Stop once `‖s_k - s_{k-1}‖ / ‖s_k‖` drops to this value.
    pub tol: f64,
}

impl L1SolverParams {
    pub const DEFAULT_MAX_ITERS: usize = 3000;
    pub const DEFAULT_TOL: f64 = 1e-6;

    pub fn new(lambda: f64) -> Result<Self> {
        let params = Self {
            lambda,
            max_iters: Self::DEFAULT_MAX_ITERS,
            tol: Self::DEFAULT_TOL,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::param(format!("lambda must be positive, got {}", self.lambda)));
        }
        if self.max_iters == 0 {
            return Err(Error::param("max_iters must be at least 1"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::param(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Per-iteration diagnostics of one ℓ1 solve.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct L1Trace {
    /// Objective of every accepted iterate, starting with `s = 0`.
    pub objective: Vec<f64>,
    /// Momentum restarts triggered by an objective increase.
    pub restarts: usize,
    /// Final Lipschitz constant used for the step `1/L`.
    pub lipschitz: f64,
}

/// `sign(x)·max(|x| - θ, 0)`.
#[inline]
pub fn soft_threshold(x: f64, theta: f64) -> f64 {
    if x > theta {
        x - theta
    } else if x < -theta {
        x + theta
    } else {
        0.0
    }
}

/// `½‖Φs - y‖² + λ‖s‖₁`.
pub fn lasso_objective(matrix: &DenseMatrix, y: &[f64], s: &[f64], lambda: f64) -> f64 {
    let r: Vec<f64> = matrix.mul(s).iter().zip(y).map(|(a, b)| a - b).collect();
    0.5 * dot(&r, &r) + lambda * s.iter().map(|v| v.abs()).sum::<f64>()
}

/// ℓ1 recovery from real-valued measurements `y ≈ Φ s`.
///
/// Minimises `½‖Φs - y‖² + λ‖s‖₁` (equivalently `‖s‖₁ + ‖Φs - y‖²/(2λ)`)
/// with FISTA from `s = 0`. A step that would raise the objective is rejected
/// and the momentum restarted, so the accepted iterates are monotone; if a
/// plain proximal step is rejected the Lipschitz estimate is enlarged.
/// Hitting `max_iters` is reported through `converged = false`.
pub fn solve_l1(y: &[f64], matrix: &SensingMatrix, params: &L1SolverParams) -> Result<RecoveryResult> {
    solve_l1_dense(y, &DenseMatrix::from_sensing(matrix), params, None)
}

pub fn solve_l1_dense(
    y: &[f64],
    matrix: &DenseMatrix,
    params: &L1SolverParams,
    mut trace: Option<&mut L1Trace>,
) -> Result<RecoveryResult> {
    params.validate()?;
    let (m, n) = (matrix.rows(), matrix.cols());
    if y.len() != m {
        return Err(Error::structure(format!("{} measurements for {m} rows", y.len())));
    }
    let lambda = params.lambda;
    let objective = |ax: &[f64], x: &[f64]| {
        let res: f64 = ax.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
        0.5 * res + lambda * x.iter().map(|v| v.abs()).sum::<f64>()
    };

    let mut lipschitz = matrix.spectral_norm_sq(100, 1e-6);
    if lipschitz <= 0.0 {
        // Φ = 0: every s has the same residual, so zero is optimal.
        lipschitz = 1.0;
    }

    let mut x = vec![0.0; n];
    let mut ax = vec![0.0; m];
    let mut fx = objective(&ax, &x);
    // Extrapolated point and its image.
    let mut z = x.clone();
    let mut az = ax.clone();
    let mut t = 1.0f64;
    let mut momentum = false;

    let mut grad = vec![0.0; n];
    let mut resid = vec![0.0; m];
    let mut x_new = vec![0.0; n];
    let mut ax_new = vec![0.0; m];

    if let Some(tr) = trace.as_deref_mut() {
        tr.objective.push(fx);
    }

    let mut converged = false;
    let mut iterations = 0;
    while iterations < params.max_iters {
        iterations += 1;
        for ((r, a), b) in resid.iter_mut().zip(&az).zip(y) {
            *r = a - b;
        }
        matrix.mul_t_into(&resid, &mut grad);
        let step = 1.0 / lipschitz;
        for ((xn, zj), gj) in x_new.iter_mut().zip(&z).zip(&grad) {
            *xn = soft_threshold(zj - step * gj, lambda * step);
        }
        matrix.mul_into(&x_new, &mut ax_new);
        let f_new = objective(&ax_new, &x_new);

        if f_new > fx {
            if momentum {
                z.copy_from_slice(&x);
                az.copy_from_slice(&ax);
                t = 1.0;
                momentum = false;
                if let Some(tr) = trace.as_deref_mut() {
                    tr.restarts += 1;
                }
            } else if f_new - fx <= 1e-12 * fx.abs().max(f64::MIN_POSITIVE) {
                // A plain proximal step from x no longer decreases the
                // objective beyond rounding: x is stationary.
                converged = true;
                break;
            } else {
                lipschitz *= 1.5;
            }
            continue;
        }

        let diff: f64 = x_new
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let scale = norm2(&x_new);

        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let beta = (t - 1.0) / t_next;
        for j in 0..n {
            z[j] = x_new[j] + beta * (x_new[j] - x[j]);
        }
        for i in 0..m {
            az[i] = ax_new[i] + beta * (ax_new[i] - ax[i]);
        }
        t = t_next;
        momentum = true;
        std::mem::swap(&mut x, &mut x_new);
        std::mem::swap(&mut ax, &mut ax_new);
        fx = f_new;
        if let Some(tr) = trace.as_deref_mut() {
            tr.objective.push(fx);
        }

        if diff <= params.tol * scale || (scale == 0.0 && diff == 0.0) {
            converged = true;
            break;
        }
    }

    if let Some(tr) = trace {
        tr.lipschitz = lipschitz;
    }
    let residual_norm = ax
        .iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(RecoveryResult {
        s_hat: x,
        iterations,
        converged,
        residual_norm,
    })
}
