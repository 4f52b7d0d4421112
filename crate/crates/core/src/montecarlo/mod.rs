//! Seeded end-to-end trials, parameter sweeps, and the Monte Carlo checks of
//! the closed-form flip probability and mismatch MSE.
//!
//! Trial `t` of any experiment draws from the stream `(master_seed, t)`
//! (see [`crate::rng`]), in the fixed order signal, matrix, sensing noise,
//! channel flips. Two consequences:
//!
//! * results do not depend on the number of rayon workers, and
//! * every grid point of a sweep, and every method at a grid point, sees the
//!   same signals, matrices and noise (common random numbers), which makes
//!   method-to-method and point-to-point differences much less noisy.

mod stats;

pub use stats::{mean_estimate, ratio_estimate, CompensatedSum, Estimate};

use rayon::prelude::*;

use crate::channel::{mismatch_vector, transmit, ChannelConfig};
use crate::error::{Error, Result};
use crate::model::{db_to_linear, gen_matrix, gen_signal, sense, snr_to_sigma_v, SystemParams};
use crate::quantizer::{
    analytic_total_mse, min_total_mse, naive_alpha, optimal_alpha, quantize, DesignInputs,
    QuantizerSpec,
};
use crate::recovery::{
    amplitude_rescale, biht_from, error_energy, solve_l1_dense, BihtParams, DenseMatrix,
    L1SolverParams,
};
use crate::rng::{shared_rng, trial_rng};

/// How node representation levels are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuantizerMode {
    /// MSE-optimal levels accounting for bit flips.
    Optimal,
    /// Levels designed as if `pe = 0`.
    Naive,
    /// One fixed level at every node.
    Fixed(f64),
}

impl QuantizerMode {
    pub fn design(&self, inputs: &DesignInputs) -> Result<QuantizerSpec> {
        match *self {
            QuantizerMode::Optimal => Ok(optimal_alpha(inputs)),
            QuantizerMode::Naive => Ok(naive_alpha(inputs)),
            QuantizerMode::Fixed(a) => QuantizerSpec::fixed(inputs.nodes(), a),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            QuantizerMode::Optimal => "optimal",
            QuantizerMode::Naive => "naive",
            QuantizerMode::Fixed(_) => "fixed",
        }
    }
}

/// What the fusion center does with the received data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecoveryMode {
    /// No recovery; only the data mismatch `w = y - Φs` is measured.
    MismatchOnly,
    /// ℓ1 recovery on the de-mapped amplitudes `y`.
    L1Demapped,
    /// BIHT on the received signs, rescaled to `sqrt(K)·σ_s`.
    BihtSigns,
}

/// Cross-over probabilities of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum PeSetting {
    Homogeneous(f64),
    PerNode(Vec<f64>),
}

impl PeSetting {
    pub fn channel(&self, m: usize) -> Result<ChannelConfig> {
        match self {
            PeSetting::Homogeneous(pe) => ChannelConfig::homogeneous(m, *pe),
            PeSetting::PerNode(pe) if pe.len() == m => ChannelConfig::new(pe.clone()),
            PeSetting::PerNode(pe) => Err(Error::structure(format!(
                "{} per-node probabilities for {m} nodes",
                pe.len()
            ))),
        }
    }
}

/// Swept parameter and its grid.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepAxis {
    /// Homogeneous cross-over probability.
    Pe(Vec<f64>),
    /// Local SNR in dB.
    SnrDb(Vec<f64>),
    /// Number of sensor nodes.
    M(Vec<usize>),
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Pe(_) => "pe",
            SweepAxis::SnrDb(_) => "snr_db",
            SweepAxis::M(_) => "m",
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            SweepAxis::Pe(v) | SweepAxis::SnrDb(v) => v.clone(),
            SweepAxis::M(v) => v.iter().map(|m| *m as f64).collect(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SweepAxis::Pe(v) | SweepAxis::SnrDb(v) => v.len(),
            SweepAxis::M(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid must be nonempty, strictly ascending and in-domain.
    pub fn validate(&self) -> Result<()> {
        let values = self.values();
        if values.is_empty() {
            return Err(Error::Config(format!("{} grid is empty", self.name())));
        }
        if values.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Config(format!(
                "{} grid must be strictly ascending: {values:?}",
                self.name()
            )));
        }
        match self {
            SweepAxis::Pe(v) => {
                for &p in v {
                    crate::channel::check_pe(p).map_err(Error::Config)?;
                }
            }
            SweepAxis::SnrDb(v) => {
                if let Some(x) = v.iter().find(|x| !x.is_finite()) {
                    return Err(Error::Config(format!("SNR grid value {x} is not finite")));
                }
            }
            SweepAxis::M(v) => {
                if v.contains(&0) {
                    return Err(Error::Config("M grid values must be at least 1".into()));
                }
            }
        }
        Ok(())
    }
}

/// One experiment: the system, the method, and the sweep to run it over.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Base parameters; the swept field is overwritten per grid point.
    pub params: SystemParams,
    pub pe: PeSetting,
    pub quantizer_mode: QuantizerMode,
    pub recovery_mode: RecoveryMode,
    pub trials: usize,
    pub master_seed: u64,
    pub sweep: SweepAxis,
    /// ℓ1 weight is `lambda_scale · sqrt(E‖w‖² / M)`.
    pub lambda_scale: f64,
    pub l1_max_iters: usize,
    pub l1_tol: f64,
    pub biht_max_iters: usize,
    /// Draw one sensing matrix for all trials instead of one per trial.
    pub fixed_matrix: bool,
}

impl ExperimentConfig {
    /// Defaults: optimal quantizer, ℓ1 recovery, 500 trials, no sweep beyond
    /// the base `pe`.
    pub fn new(params: SystemParams, pe: f64) -> Self {
        Self {
            params,
            pe: PeSetting::Homogeneous(pe),
            quantizer_mode: QuantizerMode::Optimal,
            recovery_mode: RecoveryMode::L1Demapped,
            trials: 500,
            master_seed: crate::rng::DEFAULT_SEED,
            sweep: SweepAxis::Pe(vec![pe]),
            lambda_scale: 1.0,
            l1_max_iters: L1SolverParams::DEFAULT_MAX_ITERS,
            l1_tol: L1SolverParams::DEFAULT_TOL,
            biht_max_iters: BihtParams::DEFAULT_MAX_ITERS,
            fixed_matrix: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if !(self.lambda_scale.is_finite() && self.lambda_scale > 0.0) {
            return Err(Error::Config(format!(
                "lambda_scale must be positive, got {}",
                self.lambda_scale
            )));
        }
        self.sweep.validate()?;
        self.pe.channel(self.params.m)?;
        Ok(())
    }

    /// Label used in result tables.
    pub fn method_label(&self) -> String {
        match self.recovery_mode {
            RecoveryMode::MismatchOnly => self.quantizer_mode.label().to_string(),
            RecoveryMode::L1Demapped => match self.quantizer_mode {
                QuantizerMode::Optimal => "proposed_l1".to_string(),
                other => format!("{}_l1", other.label()),
            },
            RecoveryMode::BihtSigns => "biht".to_string(),
        }
    }

    /// The configuration at grid point `index` of the sweep.
    pub fn at_point(&self, index: usize) -> Result<ExperimentConfig> {
        let mut cfg = self.clone();
        match &self.sweep {
            SweepAxis::Pe(v) => cfg.pe = PeSetting::Homogeneous(v[index]),
            SweepAxis::SnrDb(v) => {
                cfg.params.sigma_v = snr_to_sigma_v(db_to_linear(v[index]), &cfg.params)?
            }
            SweepAxis::M(v) => {
                let sigma_v = cfg.params.sigma_v;
                cfg.params = SystemParams::new(
                    cfg.params.n,
                    cfg.params.k,
                    v[index],
                    cfg.params.sigma_s,
                    sigma_v,
                )?;
            }
        }
        Ok(cfg)
    }

    pub fn design_inputs(&self) -> Result<DesignInputs> {
        DesignInputs::from_params(&self.params, self.pe.channel(self.params.m)?)
    }
}

/// Solver outcome recorded per trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverDiagnostics {
    pub iterations: usize,
    pub converged: bool,
    pub residual_norm: f64,
}

/// Everything measured in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    /// `‖w‖² = ‖y - Φs‖²`.
    pub mse_w: f64,
    /// `‖s‖²`.
    pub signal_energy: f64,
    /// `‖s - ŝ‖²`, when a recovery ran.
    pub error_energy: Option<f64>,
    pub flips: usize,
    pub solver: Option<SolverDiagnostics>,
}

impl TrialRecord {
    pub fn nmse(&self) -> Option<f64> {
        self.error_energy.map(|e| e / self.signal_energy)
    }
}

/// Runs one complete trial of `config` (grid point already applied): signal,
/// matrix, sensing, quantization, channel, and the configured recovery.
pub fn run_trial(config: &ExperimentConfig, trial_index: u64) -> Result<TrialRecord> {
    let params = &config.params;
    let mut rng = trial_rng(config.master_seed, trial_index);
    let signal = gen_signal(params, &mut rng)?;
    let matrix = if config.fixed_matrix {
        gen_matrix(params, &mut shared_rng(config.master_seed, 0))?
    } else {
        gen_matrix(params, &mut rng)?
    };
    let obs = sense(&signal, &matrix, params, &mut rng)?;

    let channel = config.pe.channel(params.m)?;
    let inputs = DesignInputs::from_params(params, channel.clone())?;
    let spec = config.quantizer_mode.design(&inputs)?;
    let q = quantize(&obs.z, &spec)?;
    let received = transmit(&q, &spec, &channel, &mut rng)?;
    let w = mismatch_vector(&received, &obs.clean_projections)?;
    let mse_w = w.iter().map(|x| x * x).sum();

    let mut record = TrialRecord {
        mse_w,
        signal_energy: signal.energy(),
        error_energy: None,
        flips: received.flip_count(),
        solver: None,
    };

    let recovered = match config.recovery_mode {
        RecoveryMode::MismatchOnly => None,
        RecoveryMode::L1Demapped => {
            let noise = analytic_total_mse(&spec, &inputs)? / params.m as f64;
            let l1 = L1SolverParams {
                lambda: config.lambda_scale * noise.sqrt(),
                max_iters: config.l1_max_iters,
                tol: config.l1_tol,
            };
            let dense = DenseMatrix::from_sensing(&matrix);
            Some(solve_l1_dense(&received.y, &dense, &l1, None)?)
        }
        RecoveryMode::BihtSigns => {
            let dense = DenseMatrix::from_sensing(&matrix);
            let bp = BihtParams {
                max_iters: config.biht_max_iters,
                ..BihtParams::new(params.k, params.m)
            };
            let mut res = biht_from(&received.signs(), &dense, &bp, None)?;
            res.s_hat = amplitude_rescale(&res.s_hat, params)?;
            Some(res)
        }
    };
    if let Some(res) = recovered {
        record.error_energy = Some(error_energy(&signal, &res.s_hat)?.0);
        record.solver = Some(SolverDiagnostics {
            iterations: res.iterations,
            converged: res.converged,
            residual_norm: res.residual_norm,
        });
    }
    Ok(record)
}

/// Runs `trials` trials of a point configuration in parallel, returned in
/// trial order.
pub fn run_trials(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    (0..config.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect()
}

/// Which statistic a sweep reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    /// Mean of `‖w‖²`.
    MseW,
    /// `Σ‖s - ŝ‖² / Σ‖s‖²`.
    Nmse,
}

impl MetricKind {
    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::MseW => "mse_w",
            MetricKind::Nmse => "nmse",
        }
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub method: String,
    pub metric_mean: f64,
    pub metric_stderr: f64,
    /// Closed-form `E‖w‖²` for the levels used (mismatch sweeps only).
    pub analytic_value: Option<f64>,
    pub trials: usize,
    /// Trials whose solver hit its iteration cap.
    pub unconverged: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: &'static str,
    pub metric: MetricKind,
    pub rows: Vec<SweepRow>,
}

/// Runs the configured method at every grid point.
pub fn sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    config.validate()?;
    let metric = match config.recovery_mode {
        RecoveryMode::MismatchOnly => MetricKind::MseW,
        _ => MetricKind::Nmse,
    };
    let method = config.method_label();
    let axis_values = config.sweep.values();
    let mut rows = Vec::with_capacity(axis_values.len());
    for (idx, &axis_value) in axis_values.iter().enumerate() {
        let point = config.at_point(idx)?;
        let records = run_trials(&point)?;
        let (estimate, analytic_value) = match metric {
            MetricKind::MseW => {
                let samples: Vec<f64> = records.iter().map(|r| r.mse_w).collect();
                let inputs = point.design_inputs()?;
                let spec = point.quantizer_mode.design(&inputs)?;
                (mean_estimate(&samples), Some(analytic_total_mse(&spec, &inputs)?))
            }
            MetricKind::Nmse => {
                let err: Vec<f64> = records.iter().map(|r| r.error_energy.unwrap_or(f64::NAN)).collect();
                let energy: Vec<f64> = records.iter().map(|r| r.signal_energy).collect();
                (ratio_estimate(&err, &energy), None)
            }
        };
        rows.push(SweepRow {
            axis_value,
            method: method.clone(),
            metric_mean: estimate.mean,
            metric_stderr: estimate.stderr,
            analytic_value,
            trials: records.len(),
            unconverged: records
                .iter()
                .filter(|r| r.solver.is_some_and(|s| !s.converged))
                .count(),
        });
    }
    Ok(SweepResult {
        axis: config.sweep.name(),
        metric,
        rows,
    })
}

/// Empirical against closed-form `E‖w‖²` at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MseComparison {
    pub axis_value: f64,
    pub empirical: Estimate,
    /// Closed form for the levels actually used.
    pub analytic: f64,
    /// Closed-form minimum over all levels.
    pub minimal: f64,
}

impl MseComparison {
    pub fn within(&self, standard_errors: f64) -> bool {
        self.empirical.z_score(self.analytic) <= standard_errors
    }
}

/// Monte Carlo `E‖w‖²` over the sweep grid against the closed form. The
/// recovery mode of `config` is ignored.
pub fn validate_mse_w(config: &ExperimentConfig) -> Result<Vec<MseComparison>> {
    let mut cfg = config.clone();
    cfg.recovery_mode = RecoveryMode::MismatchOnly;
    cfg.validate()?;
    let axis_values = cfg.sweep.values();
    let mut out = Vec::with_capacity(axis_values.len());
    for (idx, &axis_value) in axis_values.iter().enumerate() {
        let point = cfg.at_point(idx)?;
        let samples: Vec<f64> = run_trials(&point)?.iter().map(|r| r.mse_w).collect();
        let inputs = point.design_inputs()?;
        let spec = point.quantizer_mode.design(&inputs)?;
        out.push(MseComparison {
            axis_value,
            empirical: mean_estimate(&samples),
            analytic: analytic_total_mse(&spec, &inputs)?,
            minimal: min_total_mse(&inputs),
        });
    }
    Ok(out)
}

/// Conditional sign-mismatch frequency at one clean projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipComparison {
    pub projection: f64,
    pub empirical: Estimate,
    pub analytic: f64,
}

impl FlipComparison {
    pub fn within(&self, standard_errors: f64) -> bool {
        self.empirical.z_score(self.analytic) <= standard_errors
    }
}

const FLIP_CHUNK: usize = 10_000;

/// For each fixed clean projection `t`, simulates `t + n` with
/// `n ~ N(0, σ_v²)`, quantizes, sends the bit through a BSC with cross-over
/// `pe`, and counts how often the received sign differs from `sign(t)`
/// (zero counts as positive). Compared against
/// [`flip_prob`](crate::quantizer::flip_prob).
pub fn validate_flip_prob(
    projections: &[f64],
    sigma_v: f64,
    pe: f64,
    trials: usize,
    master_seed: u64,
) -> Result<Vec<FlipComparison>> {
    if trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    crate::channel::check_pe(pe).map_err(Error::Parameter)?;
    let chunks = trials.div_ceil(FLIP_CHUNK);
    projections
        .iter()
        .enumerate()
        .map(|(p, &t)| {
            let mismatches = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let len = FLIP_CHUNK.min(trials - c * FLIP_CHUNK);
                    let stream = ((p as u64) << 32) | c as u64;
                    flip_chunk(t, sigma_v, pe, len, &mut trial_rng(master_seed, stream))
                })
                .collect::<Result<Vec<usize>>>()?
                .into_iter()
                .sum::<usize>();
            let freq = mismatches as f64 / trials as f64;
            Ok(FlipComparison {
                projection: t,
                empirical: Estimate {
                    mean: freq,
                    stderr: (freq * (1.0 - freq) / trials as f64).sqrt(),
                    samples: trials,
                },
                analytic: crate::quantizer::flip_prob(t, sigma_v, pe),
            })
        })
        .collect()
}

fn flip_chunk(
    t: f64,
    sigma_v: f64,
    pe: f64,
    len: usize,
    rng: &mut crate::rng::TrialRng,
) -> Result<usize> {
    use rand::Rng;
    use rand_distr::StandardNormal;
    let z: Vec<f64> = (0..len)
        .map(|_| {
            let g: f64 = rng.sample(StandardNormal);
            t + sigma_v * g
        })
        .collect();
    let spec = QuantizerSpec::fixed(len, 1.0)?;
    let q = quantize(&z, &spec)?;
    let received = transmit(&q, &spec, &ChannelConfig::homogeneous(len, pe)?, rng)?;
    let truth = t >= 0.0;
    Ok(received.bits.iter().filter(|b| **b != truth).count())
}
