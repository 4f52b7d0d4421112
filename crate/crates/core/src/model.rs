//! Signal and measurement model: sparse signal generation, the binary sensing
//! matrix and per-node scalar compression.

use rand::seq::index;
use rand::{Rng, RngCore};
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Network and signal dimensions plus the two noise scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Signal dimension.
    pub n: usize,
    /// Number of nonzero signal entries.
    pub k: usize,
    /// Number of sensor nodes.
    pub m: usize,
    /// Standard deviation of each nonzero signal entry.
    pub sigma_s: f64,
    /// Standard deviation of each sensing-noise entry.
    pub sigma_v: f64,
}

impl SystemParams {
    pub fn new(n: usize, k: usize, m: usize, sigma_s: f64, sigma_v: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("signal dimension N must be positive"));
        }
        if k == 0 {
            return Err(Error::param("sparsity K must be at least 1"));
        }
        if k > n {
            return Err(Error::param(format!("sparsity K={k} exceeds dimension N={n}")));
        }
        if m == 0 {
            return Err(Error::param("number of nodes M must be at least 1"));
        }
        if !(sigma_s.is_finite() && sigma_s > 0.0) {
            return Err(Error::param(format!("sigma_s must be positive, got {sigma_s}")));
        }
        if !(sigma_v >= 0.0) || sigma_v.is_nan() {
            return Err(Error::param(format!("sigma_v must be nonnegative, got {sigma_v}")));
        }
        Ok(Self {
            n,
            k,
            m,
            sigma_s,
            sigma_v,
        })
    }

    /// Builds parameters from a linear SNR, resolving `sigma_v` with
    /// [`snr_to_sigma_v`].
    pub fn with_snr(n: usize, k: usize, m: usize, sigma_s: f64, snr: f64) -> Result<Self> {
        let mut params = Self::new(n, k, m, sigma_s, 0.0)?;
        params.sigma_v = snr_to_sigma_v(snr, &params)?;
        Ok(params)
    }

    /// Variance of a single clean projection `Φ_i·s`: `K·σ_s²/N`.
    pub fn sigma2(&self) -> f64 {
        self.k as f64 * self.sigma_s * self.sigma_s / self.n as f64
    }

    /// Linear SNR `E‖s‖² / E‖v_i‖²`, undefined without noise.
    pub fn snr(&self) -> Option<f64> {
        (self.sigma_v > 0.0).then(|| self.sigma2() / (self.sigma_v * self.sigma_v))
    }

    /// Expected signal energy `E‖s‖² = K·σ_s²`.
    pub fn signal_energy(&self) -> f64 {
        self.k as f64 * self.sigma_s * self.sigma_s
    }
}

/// Converts a decibel figure to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Noise standard deviation that realises a linear SNR:
/// `σ_v = sqrt(K·σ_s² / (N·snr))`.
///
/// `snr = +∞` yields `0`.
pub fn snr_to_sigma_v(snr: f64, params: &SystemParams) -> Result<f64> {
    if snr.is_nan() || snr <= 0.0 {
        return Err(Error::param(format!("SNR must be positive, got {snr}")));
    }
    Ok((params.signal_energy() / (params.n as f64 * snr)).sqrt())
}

/// A `K`-sparse vector with its support stored explicitly (0-based indices,
/// ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSignal {
    values: Vec<f64>,
    support: Vec<usize>,
}

impl SparseSignal {
    /// Wraps a dense vector; the support is every index holding a nonzero.
    /// Accepts the all-zero vector.
    pub fn from_dense(values: Vec<f64>) -> Self {
        let support = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(j, _)| j)
            .collect();
        Self { values, support }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn energy(&self) -> f64 {
        self.support.iter().map(|&j| self.values[j] * self.values[j]).sum()
    }
}

/// Draws a signal with a uniformly random support of size `K` and i.i.d.
/// `N(0, σ_s²)` entries on it.
pub fn gen_signal<R: Rng + ?Sized>(params: &SystemParams, rng: &mut R) -> Result<SparseSignal> {
    if params.k == 0 || params.k > params.n {
        return Err(Error::param(format!(
            "sparsity K={} must lie in 1..={}",
            params.k, params.n
        )));
    }
    let mut support = index::sample(rng, params.n, params.k).into_vec();
    support.sort_unstable();
    let mut values = vec![0.0; params.n];
    for &j in &support {
        let g: f64 = rng.sample(StandardNormal);
        values[j] = params.sigma_s * g;
    }
    Ok(SparseSignal { values, support })
}

/// `M × N` matrix with entries `±1/√N`.
///
/// Signs are bit-packed row by row (a set bit means `-1/√N`); the common
/// magnitude is stored once.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingMatrix {
    m: usize,
    n: usize,
    words_per_row: usize,
    negative: Vec<u64>,
    scale: f64,
}

impl SensingMatrix {
    /// Builds a matrix from explicit signs (`true` = negative), row-major.
    pub fn from_signs(m: usize, n: usize, negative: &[bool]) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::param("sensing matrix needs positive dimensions"));
        }
        if negative.len() != m * n {
            return Err(Error::structure(format!(
                "expected {} signs for a {m}x{n} matrix, got {}",
                m * n,
                negative.len()
            )));
        }
        let mut mat = Self::zeroed(m, n);
        for i in 0..m {
            for j in 0..n {
                if negative[i * n + j] {
                    mat.negative[i * mat.words_per_row + j / 64] |= 1u64 << (j % 64);
                }
            }
        }
        Ok(mat)
    }

    fn zeroed(m: usize, n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        Self {
            m,
            n,
            words_per_row,
            negative: vec![0; m * words_per_row],
            scale: 1.0 / (n as f64).sqrt(),
        }
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    /// Entry magnitude `1/√N`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    #[inline]
    fn is_negative(&self, i: usize, j: usize) -> bool {
        (self.negative[i * self.words_per_row + j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if self.is_negative(i, j) {
            -self.scale
        } else {
            self.scale
        }
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.n).map(|j| self.entry(i, j)).collect()
    }

    /// Number of negative entries.
    pub fn count_negative(&self) -> usize {
        self.negative.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `Φ_i · x` for a dense `x`.
    pub fn row_dot(&self, i: usize, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (j, &xj) in x.iter().enumerate() {
            if self.is_negative(i, j) {
                acc -= xj;
            } else {
                acc += xj;
            }
        }
        acc * self.scale
    }

    /// `Φ · s`, touching only the support columns.
    pub fn project_sparse(&self, signal: &SparseSignal) -> Result<Vec<f64>> {
        if signal.len() != self.n {
            return Err(Error::structure(format!(
                "signal length {} does not match matrix width {}",
                signal.len(),
                self.n
            )));
        }
        let values = signal.values();
        Ok((0..self.m)
            .map(|i| {
                let acc: f64 = signal
                    .support()
                    .iter()
                    .map(|&j| if self.is_negative(i, j) { -values[j] } else { values[j] })
                    .sum();
                acc * self.scale
            })
            .collect())
    }

    /// Dense column-major copy (`N` columns of length `M`).
    pub fn to_column_major(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.m * self.n];
        for j in 0..self.n {
            for i in 0..self.m {
                out[j * self.m + i] = self.entry(i, j);
            }
        }
        out
    }
}

/// Draws every entry independently as `+1/√N` or `-1/√N` with probability
/// one half.
pub fn gen_matrix<R: RngCore + ?Sized>(params: &SystemParams, rng: &mut R) -> Result<SensingMatrix> {
    if params.m == 0 || params.n == 0 {
        return Err(Error::param("sensing matrix needs positive dimensions"));
    }
    let mut mat = SensingMatrix::zeroed(params.m, params.n);
    let tail = params.n % 64;
    let last_mask = if tail == 0 { u64::MAX } else { (1u64 << tail) - 1 };
    for row in mat.negative.chunks_mut(mat.words_per_row) {
        for w in row.iter_mut() {
            *w = rng.next_u64();
        }
        if let Some(last) = row.last_mut() {
            *last &= last_mask;
        }
    }
    Ok(mat)
}

/// Compressed node measurements together with their noiseless parts.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeObservations {
    /// `z_i = Φ_i (s + v_i)`.
    pub z: Vec<f64>,
    /// `Φ_i s`.
    pub clean_projections: Vec<f64>,
}

impl NodeObservations {
    /// Realised noise projections `z_i - Φ_i s`.
    pub fn noise(&self) -> Vec<f64> {
        self.z
            .iter()
            .zip(&self.clean_projections)
            .map(|(z, c)| z - c)
            .collect()
    }
}

/// How the per-node sensing noise is realised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseMode {
    /// Draw the projected noise `Φ_i v_i ~ N(0, σ_v²)` directly. Valid because
    /// every row has unit norm.
    #[default]
    Scalar,
    /// Draw the full `N`-vector `v_i` per node and project it.
    FullVector,
}

/// Local sensing and compression with scalar noise.
pub fn sense<R: Rng + ?Sized>(
    signal: &SparseSignal,
    matrix: &SensingMatrix,
    params: &SystemParams,
    rng: &mut R,
) -> Result<NodeObservations> {
    sense_with(signal, matrix, params, NoiseMode::Scalar, rng)
}

pub fn sense_with<R: Rng + ?Sized>(
    signal: &SparseSignal,
    matrix: &SensingMatrix,
    params: &SystemParams,
    mode: NoiseMode,
    rng: &mut R,
) -> Result<NodeObservations> {
    if matrix.rows() != params.m || matrix.cols() != params.n {
        return Err(Error::structure(format!(
            "matrix is {}x{}, parameters expect {}x{}",
            matrix.rows(),
            matrix.cols(),
            params.m,
            params.n
        )));
    }
    let clean_projections = matrix.project_sparse(signal)?;
    let sigma_v = params.sigma_v;
    let z = match mode {
        NoiseMode::Scalar => clean_projections
            .iter()
            .map(|c| {
                let g: f64 = rng.sample(StandardNormal);
                c + sigma_v * g
            })
            .collect(),
        NoiseMode::FullVector => {
            let mut v = vec![0.0; params.n];
            clean_projections
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    for vj in v.iter_mut() {
                        let g: f64 = rng.sample(StandardNormal);
                        *vj = sigma_v * g;
                    }
                    c + matrix.row_dot(i, &v)
                })
                .collect()
        }
    };
    Ok(NodeObservations {
        z,
        clean_projections,
    })
}
