#![allow(dead_code)]

use onebit_wsn::recovery::{solve_l1_dense, DenseMatrix, L1SolverParams};
use onebit_wsn::rng::trial_rng;
use onebit_wsn::{gen_matrix, gen_signal, SystemParams};
use rand::Rng;

/// Least-squares fit of `y` on the columns in `support`, with its residual
/// norm. Supports of size 1 or 2 only.
fn fit(phi: &DenseMatrix, y: &[f64], support: &[usize]) -> Option<(Vec<f64>, f64)> {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let coef = match *support {
        [a] => {
            let c = phi.column(a);
            vec![dot(c, y) / dot(c, c)]
        }
        [a, b] => {
            let (ca, cb) = (phi.column(a), phi.column(b));
            let (g11, g12, g22) = (dot(ca, ca), dot(ca, cb), dot(cb, cb));
            let det = g11 * g22 - g12 * g12;
            if det.abs() < 1e-12 {
                return None;
            }
            let (ra, rb) = (dot(ca, y), dot(cb, y));
            vec![(g22 * ra - g12 * rb) / det, (g11 * rb - g12 * ra) / det]
        }
        _ => unreachable!(),
    };
    let mut r = y.to_vec();
    for (&j, &c) in support.iter().zip(&coef) {
        for (ri, pij) in r.iter_mut().zip(phi.column(j)) {
            *ri -= c * pij;
        }
    }
    Some((coef, dot(&r, &r).sqrt()))
}

/// Every sparsest exact representation of `y` with at most two columns.
pub fn exhaustive_l0(phi: &DenseMatrix, y: &[f64]) -> Vec<(Vec<usize>, Vec<f64>)> {
    let n = phi.cols();
    let tol = 1e-9 * y.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
    let mut found = Vec::new();
    for a in 0..n {
        if let Some((c, r)) = fit(phi, y, &[a]) {
            if r <= tol {
                found.push((vec![a], c));
            }
        }
    }
    if !found.is_empty() {
        return found;
    }
    for a in 0..n {
        for b in a + 1..n {
            if let Some((c, r)) = fit(phi, y, &[a, b]) {
                if r <= tol {
                    found.push((vec![a, b], c));
                }
            }
        }
    }
    found
}

pub struct OracleOutcome {
    pub support_agrees: bool,
    pub max_coef_error: f64,
}

/// One instance with `N=20, M=12`, `K` uniform in {1, 2}, clean
/// measurements, recovered with a tiny ℓ1 weight.
pub fn l1_oracle_instance(seed: u64) -> OracleOutcome {
    let mut rng = trial_rng(seed, 0);
    let k = rng.random_range(1..=2usize);
    let params = SystemParams::new(20, k, 12, 1.0, 0.0).unwrap();
    let s = gen_signal(&params, &mut rng).unwrap();
    let phi = DenseMatrix::from_sensing(&gen_matrix(&params, &mut rng).unwrap());
    let y = phi.mul(s.values());

    let l1 = L1SolverParams::new(1e-7)
        .unwrap()
        .with_tol(1e-12)
        .with_max_iters(200_000);
    let s_hat = solve_l1_dense(&y, &phi, &l1, None).unwrap().s_hat;
    let support: Vec<usize> = (0..20).filter(|&j| s_hat[j].abs() > 1e-4).collect();

    for (cand, coef) in exhaustive_l0(&phi, &y) {
        if cand == support {
            let err = cand
                .iter()
                .zip(&coef)
                .map(|(&j, c)| (s_hat[j] - c).abs())
                .fold(0.0, f64::max);
            return OracleOutcome { support_agrees: true, max_coef_error: err };
        }
    }
    OracleOutcome { support_agrees: false, max_coef_error: f64::NAN }
}
