//! Amplitude-aided one-bit compressive sensing over a noisy wireless sensor
//! network.
//!
//! Each of `M` sensor nodes observes a common `K`-sparse signal in white
//! Gaussian noise, compresses it to a scalar with a binary `±1/√N` row,
//! quantizes the scalar to one of two representation levels `±α_i`, and sends
//! the bit over a binary symmetric channel. The fusion center de-maps the
//! received bits back to `±α_i` and recovers the signal with ℓ1 minimization.
//!
//! The crate is organized as:
//!
//! * [`model`] – system parameters, signal and sensing-matrix generation,
//!   local compression.
//! * [`quantizer`] – Q-function, flip probability, the MSE-optimal
//!   representation level and the closed-form mismatch MSE.
//! * [`quadrature`] – adaptive Gauss–Kronrod integration used as an
//!   independent oracle for the closed-form integrals.
//! * [`channel`] – per-node binary symmetric channels.
//! * [`recovery`] – ℓ1 (LASSO) recovery, the BIHT sign-only baseline, NMSE.
//! * [`montecarlo`] – seeded trial runner, sweeps and Monte Carlo validators.
//! * [`config`], [`report`], [`validation`], [`cli`] – the sweep file format,
//!   CSV/plot emission, the oracle check suite and the command-line front end.
//!
//! See the `examples/` directory for one runnable program per capability.

// `!(x > 0.0)` style guards reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cli;
pub mod config;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod quadrature;
pub mod quantizer;
pub mod recovery;
pub mod report;
pub mod rng;
pub mod validation;

pub use channel::{mismatch_vector, transmit, ChannelConfig, ReceivedVector};
pub use error::{Error, Result};
pub use model::{
    db_to_linear, gen_matrix, gen_signal, sense, sense_with, snr_to_sigma_v, NodeObservations,
    NoiseMode, SensingMatrix, SparseSignal, SystemParams,
};
pub use montecarlo::{
    run_trial, sweep, validate_flip_prob, validate_mse_w, ExperimentConfig, QuantizerMode,
    RecoveryMode, SweepAxis, SweepResult, TrialRecord,
};
pub use quantizer::{
    analytic_node_mse, analytic_total_mse, flip_prob, flip_weighted_magnitude, min_total_mse, naive_alpha,
    optimal_alpha, q_function, quantize, DesignInputs, QuantizerSpec,
};
pub use recovery::{
    amplitude_rescale, biht, nmse, solve_l1, BihtParams, L1SolverParams, RecoveryResult,
};
