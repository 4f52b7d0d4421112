use super::dense::DenseMatrix;
use super::{norm2, RecoveryResult};
use crate::error::{Error, Result};
use crate::model::SensingMatrix;

/// Settings for [`biht`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BihtParams {
    /// Number of entries kept by the hard threshold.
    pub k: usize,
    pub step: f64,
    pub max_iters: usize,
}

impl BihtParams {
    pub const DEFAULT_MAX_ITERS: usize = 300;

    /// Step `1/M` and 300 iterations.
    pub fn new(k: usize, m: usize) -> Self {
        Self {
            k,
            step: 1.0 / m.max(1) as f64,
            max_iters: Self::DEFAULT_MAX_ITERS,
        }
    }
}

/// Keeps the `k` largest-magnitude entries (ties go to the lower index) and
/// zeroes the rest.
pub fn hard_threshold(x: &mut [f64], k: usize) {
    if k >= x.len() {
        return;
    }
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.select_nth_unstable_by(k, |&a, &b| {
        x[b].abs().total_cmp(&x[a].abs()).then(a.cmp(&b))
    });
    for &j in &order[k..] {
        x[j] = 0.0;
    }
}

#[inline]
fn sign(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Three-valued sign used in the gradient residual; a zero image pulls
/// towards neither level.
#[inline]
fn residual_sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Binary iterative hard thresholding from the zero vector.
///
/// Iterates `s ← H_K(s + step·Φᵀ(b - sign(Φs))/2)` where `b` are the received
/// `±1` signs and `sign(0) = 0` inside the residual, and returns the iterate
/// with the fewest sign disagreements (latest on ties, zero counted as
/// positive), normalised to unit norm. At least one step is taken from the
/// zero start. Only the direction of the
/// signal is identifiable from signs; see
/// [`amplitude_rescale`](super::amplitude_rescale).
pub fn biht(signs: &[f64], matrix: &SensingMatrix, params: &BihtParams) -> Result<RecoveryResult> {
    biht_from(signs, &DenseMatrix::from_sensing(matrix), params, None)
}

/// [`biht`] on a dense matrix, optionally started from `init` instead of
/// zero.
pub fn biht_from(
    signs: &[f64],
    matrix: &DenseMatrix,
    params: &BihtParams,
    init: Option<&[f64]>,
) -> Result<RecoveryResult> {
    let (m, n) = (matrix.rows(), matrix.cols());
    if signs.len() != m {
        return Err(Error::structure(format!("{} signs for {m} rows", signs.len())));
    }
    if signs.iter().any(|b| b.abs() != 1.0) {
        return Err(Error::param("BIHT input must be ±1 signs"));
    }
    if params.k == 0 || params.k > n {
        return Err(Error::param(format!("sparsity {} must lie in 1..={n}", params.k)));
    }
    if !(params.step > 0.0) || params.max_iters == 0 {
        return Err(Error::param("BIHT needs a positive step and at least one iteration"));
    }

    let mut s = match init {
        Some(v) if v.len() == n => v.to_vec(),
        Some(v) => {
            return Err(Error::structure(format!("initial point has length {}", v.len())))
        }
        None => vec![0.0; n],
    };
    let mut as_ = matrix.mul(&s);
    let mut resid = vec![0.0; m];
    let mut grad = vec![0.0; n];

    let mismatches = |image: &[f64]| {
        image
            .iter()
            .zip(signs)
            .filter(|(a, b)| sign(**a) != **b)
            .count()
    };
    let mut best = s.clone();
    let mut best_mismatch = match init {
        Some(_) => mismatches(&as_),
        None => usize::MAX,
    };
    let mut iterations = 0;
    let mut converged = best_mismatch == 0;

    while !converged && iterations < params.max_iters {
        iterations += 1;
        for ((r, a), b) in resid.iter_mut().zip(&as_).zip(signs) {
            *r = 0.5 * (b - residual_sign(*a));
        }
        matrix.mul_t_into(&resid, &mut grad);
        for (sj, gj) in s.iter_mut().zip(&grad) {
            *sj += params.step * gj;
        }
        hard_threshold(&mut s, params.k);
        matrix.mul_into(&s, &mut as_);
        let count = mismatches(&as_);
        if count <= best_mismatch {
            best_mismatch = count;
            best.copy_from_slice(&s);
        }
        converged = count == 0;
    }

    let norm = norm2(&best);
    if norm > 0.0 {
        best.iter_mut().for_each(|v| *v /= norm);
    }
    let image = matrix.mul(&best);
    let residual_norm = image
        .iter()
        .zip(signs)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(RecoveryResult {
        s_hat: best,
        iterations,
        converged,
        residual_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{gen_matrix, gen_signal, SystemParams};
    use crate::rng::trial_rng;
    use proptest::prelude::*;

    #[test]
    fn hard_threshold_keeps_largest() {
        let mut x = vec![0.1, -3.0, 2.0, 0.5, -2.0];
        hard_threshold(&mut x, 2);
        assert_eq!(x, vec![0.0, -3.0, 2.0, 0.0, 0.0]);
        let mut tie = vec![1.0, -1.0, 1.0];
        hard_threshold(&mut tie, 1);
        assert_eq!(tie, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn consistent_start_is_a_fixed_point() {
        let params = SystemParams::new(60, 3, 80, 1.0, 0.0).unwrap();
        let mut rng = trial_rng(5, 0);
        let s = gen_signal(&params, &mut rng).unwrap();
        let phi = DenseMatrix::from_sensing(&gen_matrix(&params, &mut rng).unwrap());
        let signs: Vec<f64> = phi.mul(s.values()).iter().map(|v| sign(*v)).collect();
        let res = biht_from(&signs, &phi, &BihtParams::new(3, 80), Some(s.values())).unwrap();
        assert_eq!(res.iterations, 0);
        assert!(res.converged);
        let norm = norm2(s.values());
        for (a, b) in res.s_hat.iter().zip(s.values()) {
            assert!((a - b / norm).abs() < 1e-15);
        }
    }

    #[test]
    fn all_positive_signs_stay_bounded() {
        let params = SystemParams::new(30, 2, 40, 1.0, 0.0).unwrap();
        let phi = DenseMatrix::from_sensing(&gen_matrix(&params, &mut trial_rng(6, 0)).unwrap());
        let res = biht_from(&[1.0; 40], &phi, &BihtParams::new(2, 40), None).unwrap();
        assert!(res.iterations >= 1);
        assert!(res.s_hat.iter().all(|v| v.is_finite()));
        assert!((norm2(&res.s_hat) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn validates_inputs() {
        let params = SystemParams::new(10, 2, 5, 1.0, 0.0).unwrap();
        let phi = gen_matrix(&params, &mut trial_rng(1, 0)).unwrap();
        assert!(biht(&[1.0; 4], &phi, &BihtParams::new(2, 5)).is_err());
        assert!(biht(&[1.0, 0.5, 1.0, 1.0, 1.0], &phi, &BihtParams::new(2, 5)).is_err());
        assert!(biht(&[1.0; 5], &phi, &BihtParams::new(11, 5)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn output_is_k_sparse_unit_norm(seed in 0u64..10_000, k in 1usize..5) {
            let params = SystemParams::new(50, k, 40, 1.0, 0.3).unwrap();
            let mut rng = trial_rng(seed, 0);
            let phi = DenseMatrix::from_sensing(&gen_matrix(&params, &mut rng).unwrap());
            let signs: Vec<f64> = (0..40).map(|i| if (seed >> (i % 60)) & 1 == 1 { 1.0 } else { -1.0 }).collect();
            let res = biht_from(&signs, &phi, &BihtParams::new(k, 40), None).unwrap();
            let nnz = res.s_hat.iter().filter(|v| **v != 0.0).count();
            prop_assert!(nnz <= k);
            let norm = norm2(&res.s_hat);
            prop_assert!(norm == 0.0 || (norm - 1.0).abs() < 1e-12);
        }
    }
}
