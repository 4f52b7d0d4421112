//! Parallel binary symmetric channels between the nodes and the fusion center.
//!
//! Encoding, decoding and de-mapping are collapsed into one operation on the
//! real value: a flipped bit turns `±α_i` into `∓α_i`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::quantizer::QuantizerSpec;

/// Per-node cross-over probabilities, each in `[0, 1/2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelConfig {
    pe: Vec<f64>,
}

impl ChannelConfig {
    pub fn new(pe: Vec<f64>) -> Result<Self> {
        if pe.is_empty() {
            return Err(Error::param("channel needs at least one node"));
        }
        for (i, &p) in pe.iter().enumerate() {
            check_pe(p).map_err(|e| Error::param(format!("node {i}: {e}")))?;
        }
        Ok(Self { pe })
    }

    /// `m` nodes sharing one cross-over probability.
    pub fn homogeneous(m: usize, pe: f64) -> Result<Self> {
        Self::new(vec![pe; m])
    }

    pub fn pe(&self) -> &[f64] {
        &self.pe
    }

    pub fn nodes(&self) -> usize {
        self.pe.len()
    }
}

/// Validates a single cross-over probability.
pub fn check_pe(pe: f64) -> std::result::Result<(), String> {
    if pe.is_nan() || pe < 0.0 {
        return Err(format!("cross-over probability must be >= 0, got {pe}"));
    }
    if pe > 0.5 {
        return Err(format!(
            "cross-over probability {pe} exceeds 1/2; a channel that flips more often than \
             not is the relabelled channel with probability {}, so use that value instead",
            1.0 - pe
        ));
    }
    Ok(())
}

/// What the fusion center holds after decoding and de-mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedVector {
    /// De-mapped values `q̂_i ∈ {+α_i, -α_i}`.
    pub y: Vec<f64>,
    /// Decoded bits (`true` ↔ `+α_i`). Kept separately so the sign survives
    /// a zero representation level.
    pub bits: Vec<bool>,
    /// Which transmissions were flipped. Diagnostic only; never handed to a
    /// recovery algorithm.
    pub flips: Vec<bool>,
}

impl ReceivedVector {
    /// Received bits as `±1`.
    pub fn signs(&self) -> Vec<f64> {
        self.bits.iter().map(|&b| if b { 1.0 } else { -1.0 }).collect()
    }

    pub fn flip_count(&self) -> usize {
        self.flips.iter().filter(|f| **f).count()
    }
}

/// Sends each quantized value over its own BSC. Node `i` is flipped with
/// probability `pe_i`, independently of every other node and of the sensing
/// noise. One uniform is drawn per node regardless of `pe_i`.
pub fn transmit<R: Rng + ?Sized>(
    q: &[f64],
    quantizer: &QuantizerSpec,
    config: &ChannelConfig,
    rng: &mut R,
) -> Result<ReceivedVector> {
    let alpha = quantizer.alpha();
    if q.len() != alpha.len() || q.len() != config.nodes() {
        return Err(Error::structure(format!(
            "{} quantized values, {} quantizer levels, {} channels",
            q.len(),
            alpha.len(),
            config.nodes()
        )));
    }
    let mut y = Vec::with_capacity(q.len());
    let mut bits = Vec::with_capacity(q.len());
    let mut flips = Vec::with_capacity(q.len());
    for ((&qi, &ai), &pe) in q.iter().zip(alpha).zip(config.pe()) {
        if qi.abs() != ai {
            return Err(Error::structure(format!(
                "quantized value {qi} is not ±{ai}"
            )));
        }
        let u: f64 = rng.random();
        let flip = u < pe;
        let sent_positive = !qi.is_sign_negative();
        y.push(if flip { -qi } else { qi });
        bits.push(sent_positive != flip);
        flips.push(flip);
    }
    Ok(ReceivedVector { y, bits, flips })
}

/// Data mismatch `w_i = q̂_i - Φ_i s`.
pub fn mismatch_vector(received: &ReceivedVector, clean_projections: &[f64]) -> Result<Vec<f64>> {
    if received.y.len() != clean_projections.len() {
        return Err(Error::structure(format!(
            "{} received values but {} projections",
            received.y.len(),
            clean_projections.len()
        )));
    }
    Ok(received
        .y
        .iter()
        .zip(clean_projections)
        .map(|(y, c)| y - c)
        .collect())
}
