//! MSE-optimal binary quantizer design.
//!
//! Every node quantizes its Gaussian scalar `z_i ~ N(0, σ² + σ_v²)` with the
//! threshold at zero and symmetric levels `±α_i`. The expected mismatch
//! `E|q̂_i - Φ_i s|²` after the binary symmetric channel is a quadratic in
//! `α_i`, so the optimal level and the resulting minimal MSE are available in
//! closed form and are computed node by node.

use std::f64::consts::{PI, SQRT_2};

use crate::channel::ChannelConfig;
use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Gaussian upper-tail probability `Q(t) = P(X > t)`, `X ~ N(0, 1)`.
pub fn q_function(t: f64) -> f64 {
    0.5 * libm::erfc(t / SQRT_2)
}

/// Probability that the bit received from a node disagrees in sign with the
/// clean projection `Φ_i s`, given that projection.
///
/// Noise-induced sign errors and channel flips are independent, so the
/// mismatch probability is `pe + (1 - 2 pe)·Q(|Φ_i s| / σ_v)`. With
/// `σ_v = 0` the noise term vanishes except at a zero projection, where the
/// value is the `σ_v → 0` limit of the zero-projection case, `1/2`.
pub fn flip_prob(clean_projection: f64, sigma_v: f64, pe: f64) -> f64 {
    let noise_flip = if sigma_v > 0.0 {
        q_function(clean_projection.abs() / sigma_v)
    } else if clean_projection == 0.0 {
        0.5
    } else {
        0.0
    };
    pe + (1.0 - 2.0 * pe) * noise_flip
}

/// Statistics the level design depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignInputs {
    /// Variance of a clean projection, `σ² = K σ_s² / N`.
    pub sigma2: f64,
    /// Sensing-noise standard deviation.
    pub sigma_v: f64,
    pub channel: ChannelConfig,
}

impl DesignInputs {
    pub fn new(sigma2: f64, sigma_v: f64, channel: ChannelConfig) -> Result<Self> {
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(Error::param(format!("sigma2 must be positive, got {sigma2}")));
        }
        if sigma_v.is_nan() || sigma_v < 0.0 {
            return Err(Error::param(format!("sigma_v must be nonnegative, got {sigma_v}")));
        }
        Ok(Self {
            sigma2,
            sigma_v,
            channel,
        })
    }

    pub fn from_params(params: &SystemParams, channel: ChannelConfig) -> Result<Self> {
        if channel.nodes() != params.m {
            return Err(Error::structure(format!(
                "{} channels for {} nodes",
                channel.nodes(),
                params.m
            )));
        }
        Self::new(params.sigma2(), params.sigma_v, channel)
    }

    pub fn nodes(&self) -> usize {
        self.channel.nodes()
    }

    /// `2σ²(1 - 2pe)² / (π(1 + σ_v²/σ²))`: the squared optimal level, which is
    /// also the MSE reduction it buys over sending nothing.
    fn level_sq(&self, pe: f64) -> f64 {
        level_sq(self.sigma2, self.sigma_v, pe)
    }
}

fn level_sq(sigma2: f64, sigma_v: f64, pe: f64) -> f64 {
    let gain = 1.0 - 2.0 * pe;
    2.0 * sigma2 * gain * gain / (PI * (1.0 + sigma_v * sigma_v / sigma2))
}

/// Per-node representation levels. The threshold is always zero and the
/// negative level is `-α_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizerSpec {
    alpha: Vec<f64>,
}

impl QuantizerSpec {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::param("quantizer needs at least one node"));
        }
        if let Some(a) = alpha.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
            return Err(Error::param(format!(
                "representation level must be finite and nonnegative, got {a}"
            )));
        }
        Ok(Self { alpha })
    }

    /// The same level at every node.
    pub fn fixed(m: usize, alpha: f64) -> Result<Self> {
        Self::new(vec![alpha; m])
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn nodes(&self) -> usize {
        self.alpha.len()
    }

    /// Zero threshold, fixed by the symmetry of the zero-mean input.
    pub fn threshold(&self) -> f64 {
        0.0
    }

    /// True when some node has a zero level. That happens for `pe = 1/2`,
    /// where the received bit carries no information; the fusion center then
    /// sees zeros from that node.
    pub fn is_degenerate(&self) -> bool {
        self.alpha.contains(&0.0)
    }
}

/// Binary quantization: `z_i >= 0 ↦ +α_i`, otherwise `-α_i`.
pub fn quantize(z: &[f64], spec: &QuantizerSpec) -> Result<Vec<f64>> {
    if z.len() != spec.nodes() {
        return Err(Error::structure(format!(
            "{} measurements for {} quantizers",
            z.len(),
            spec.nodes()
        )));
    }
    Ok(z
        .iter()
        .zip(spec.alpha())
        .map(|(&zi, &a)| if zi >= 0.0 { a } else { -a })
        .collect())
}

/// MSE-optimal levels
/// `ᾱ_i = sqrt(2σ²(1 - 2pe_i)² / (π(1 + (σ_v/σ)²)))`, one per node.
pub fn optimal_alpha(inputs: &DesignInputs) -> QuantizerSpec {
    QuantizerSpec {
        alpha: inputs
            .channel
            .pe()
            .iter()
            .map(|&pe| inputs.level_sq(pe).sqrt())
            .collect(),
    }
}

/// Levels designed as if the channel never flipped a bit.
pub fn naive_alpha(inputs: &DesignInputs) -> QuantizerSpec {
    let a = inputs.level_sq(0.0).sqrt();
    QuantizerSpec {
        alpha: vec![a; inputs.nodes()],
    }
}

/// Expected squared mismatch at one node:
/// `(α - ᾱ)² + σ² - ᾱ²`.
pub fn analytic_node_mse(alpha: f64, sigma2: f64, sigma_v: f64, pe: f64) -> f64 {
    let best_sq = level_sq(sigma2, sigma_v, pe);
    let d = alpha - best_sq.sqrt();
    d * d + sigma2 - best_sq
}

/// `E‖w‖²` for arbitrary levels, summed over nodes.
pub fn analytic_total_mse(spec: &QuantizerSpec, inputs: &DesignInputs) -> Result<f64> {
    if spec.nodes() != inputs.nodes() {
        return Err(Error::structure(format!(
            "{} levels for {} nodes",
            spec.nodes(),
            inputs.nodes()
        )));
    }
    Ok(spec
        .alpha()
        .iter()
        .zip(inputs.channel.pe())
        .map(|(&a, &pe)| analytic_node_mse(a, inputs.sigma2, inputs.sigma_v, pe))
        .sum())
}

/// `E‖w‖²` at the optimal levels: `Σ_i (σ² - ᾱ_i²)`.
pub fn min_total_mse(inputs: &DesignInputs) -> f64 {
    inputs
        .channel
        .pe()
        .iter()
        .map(|&pe| inputs.sigma2 - inputs.level_sq(pe))
        .sum()
}

/// Closed form of `∫₀^∞ t·Q(t/σ_v)·(2/√(2πσ²))·exp(-t²/(2σ²)) dt`, namely
/// `sqrt(σ²/(2π))·(1 - sqrt(σ²/(σ² + σ_v²)))`.
pub fn flip_weighted_magnitude(sigma: f64, sigma_v: f64) -> f64 {
    // 1 - 1/sqrt(1 + r²) rewritten as r²/(sqrt(1 + r²)(1 + sqrt(1 + r²))) to
    // avoid cancellation for small r.
    let r2 = (sigma_v / sigma).powi(2);
    let root = (1.0 + r2).sqrt();
    let one_minus = if r2.is_infinite() {
        1.0
    } else {
        r2 / (root * (1.0 + root))
    };
    (sigma * sigma / (2.0 * PI)).sqrt() * one_minus
}
