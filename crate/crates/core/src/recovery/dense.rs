use crate::error::{Error, Result};
use crate::model::SensingMatrix;

/// Dense column-major copy of a sensing matrix, laid out for the two
/// products the solvers need: `Φ x` for sparse `x` (sum of a few columns) and
/// `Φᵀ r` (one contiguous dot product per column).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    m: usize,
    n: usize,
    cols: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_sensing(matrix: &SensingMatrix) -> Self {
        Self {
            m: matrix.rows(),
            n: matrix.cols(),
            cols: matrix.to_column_major(),
        }
    }

    /// From row-major data.
    pub fn from_rows(m: usize, n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != m * n {
            return Err(Error::structure(format!(
                "{} entries for a {m}x{n} matrix",
                data.len()
            )));
        }
        let mut cols = vec![0.0; m * n];
        for i in 0..m {
            for j in 0..n {
                cols[j * m + i] = data[i * n + j];
            }
        }
        Ok(Self { m, n, cols })
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.cols[j * self.m..(j + 1) * self.m]
    }

    /// `out = Φ x`, skipping zero entries of `x`.
    pub fn mul_into(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                for (o, a) in out.iter_mut().zip(self.column(j)) {
                    *o += a * xj;
                }
            }
        }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        self.mul_into(x, &mut out);
        out
    }

    /// `out = Φᵀ r`.
    pub fn mul_t_into(&self, r: &[f64], out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate() {
            *o = dot(self.column(j), r);
        }
    }

    pub fn mul_t(&self, r: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.mul_t_into(r, &mut out);
        out
    }

    /// Estimate of `‖Φ‖₂²` by power iteration on `ΦᵀΦ` (at most `max_iters`
    /// steps, stopping once the relative change is below `tol`). The estimate
    /// approaches the true value from below.
    pub fn spectral_norm_sq(&self, max_iters: usize, tol: f64) -> f64 {
        let mut v: Vec<f64> = (0..self.n).map(|j| 1.0 + 0.5 * ((j % 7) as f64) / 7.0).collect();
        let mut av = vec![0.0; self.m];
        let mut w = vec![0.0; self.n];
        let mut estimate = 0.0;
        for _ in 0..max_iters.max(1) {
            let norm = dot(&v, &v).sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            v.iter_mut().for_each(|x| *x /= norm);
            self.mul_into(&v, &mut av);
            let next = dot(&av, &av);
            self.mul_t_into(&av, &mut w);
            std::mem::swap(&mut v, &mut w);
            let done = (next - estimate).abs() <= tol * next;
            estimate = next;
            if done {
                break;
            }
        }
        estimate
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    // Four independent accumulators so the loop vectorises; the summation
    // order is fixed, so results are reproducible.
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        let k = 4 * c;
        acc[0] += a[k] * b[k];
        acc[1] += a[k + 1] * b[k + 1];
        acc[2] += a[k + 2] * b[k + 2];
        acc[3] += a[k + 3] * b[k + 3];
    }
    let mut tail = 0.0;
    for k in 4 * chunks..a.len() {
        tail += a[k] * b[k];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}
