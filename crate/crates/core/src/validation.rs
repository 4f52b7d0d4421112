//! The oracle check suite behind `onebit-wsn validate`.
//!
//! Every check compares an observed value against an expected one under an
//! absolute tolerance; Monte Carlo checks use four standard errors. All
//! tolerances are multiplied by [`ValidationSettings::tolerance_scale`].

use std::fmt::Write as _;

use crate::channel::ChannelConfig;
use crate::error::Result;
use crate::model::{db_to_linear, SystemParams};
use crate::montecarlo::{
    validate_flip_prob, validate_mse_w, ExperimentConfig, QuantizerMode, RecoveryMode, SweepAxis,
};
use crate::quadrature::flip_weighted_magnitude_quadrature;
use crate::quantizer::{
    analytic_total_mse, flip_prob, flip_weighted_magnitude, min_total_mse, naive_alpha, optimal_alpha,
    DesignInputs,
};
use crate::rng::DEFAULT_SEED;

/// Externally computed values the closed forms must reproduce at
/// `N=1000, K=10, M=100, σ_s=1, SNR=10 dB, pe=0.05`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceValues {
    pub alpha_opt: f64,
    pub alpha_naive: f64,
    pub total_min_mse: f64,
    /// `flip_prob(σ_v, σ_v, 0.05)`.
    pub flip_at_one_sigma: f64,
}

impl Default for ReferenceValues {
    fn default() -> Self {
        Self {
            alpha_opt: 0.068468,
            alpha_naive: 0.076076,
            total_min_mse: 0.53121,
            flip_at_one_sigma: 0.19279,
        }
    }
}

/// A named mismatch-MSE sweep checked point by point against the closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineCheck {
    pub label: String,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationSettings {
    /// Seed of the flip checks; pipeline checks carry their own.
    pub master_seed: u64,
    pub tolerance_scale: f64,
    pub reference: ReferenceValues,
    /// Trials per point of the conditional flip check.
    pub flip_trials: usize,
    pub pipeline: Vec<PipelineCheck>,
}

impl ValidationSettings {
    /// The built-in suite: `M=100, N=1000, K=10, σ_s=1`, SNR 0 and 20 dB,
    /// `pe ∈ {0, 0.1, …, 0.5}`, optimal levels, 10⁴ trials per point; 10⁶
    /// flip trials per point.
    pub fn new(master_seed: u64) -> Result<Self> {
        let mut pipeline = Vec::new();
        for snr_db in [0.0, 20.0] {
            let params = SystemParams::with_snr(1000, 10, 100, 1.0, db_to_linear(snr_db))?;
            let mut config = ExperimentConfig::new(params, 0.0);
            config.recovery_mode = RecoveryMode::MismatchOnly;
            config.quantizer_mode = QuantizerMode::Optimal;
            config.trials = 10_000;
            config.master_seed = master_seed;
            config.sweep = SweepAxis::Pe(vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5]);
            pipeline.push(PipelineCheck {
                label: format!("snr_db={snr_db}"),
                config,
            });
        }
        Ok(Self {
            master_seed,
            tolerance_scale: 1.0,
            reference: ReferenceValues::default(),
            flip_trials: 1_000_000,
            pipeline,
        })
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, expected: f64, observed: f64, tolerance: f64) -> Self {
        let passed = (observed - expected).abs() <= tolerance;
        Self {
            name: name.into(),
            expected,
            observed,
            tolerance,
            passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Tab-separated, one line per check after a header:
    /// `name expected observed tolerance PASS|FAIL`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("name\texpected\tobserved\ttolerance\tresult\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                c.name,
                c.expected,
                c.observed,
                c.tolerance,
                if c.passed { "PASS" } else { "FAIL" }
            );
        }
        out
    }
}

/// Closed-form design values against the reference constants.
pub fn design_checks(settings: &ValidationSettings) -> Result<Vec<Check>> {
    let s = settings.tolerance_scale;
    let r = &settings.reference;
    let params = SystemParams::with_snr(1000, 10, 100, 1.0, 10.0)?;
    let inputs = DesignInputs::from_params(&params, ChannelConfig::homogeneous(100, 0.05)?)?;
    let opt = optimal_alpha(&inputs);
    let minimal = min_total_mse(&inputs);
    let consistency = analytic_total_mse(&opt, &inputs)?;
    Ok(vec![
        Check::new("design.alpha_opt", r.alpha_opt, opt.alpha()[0], 1e-5 * s),
        Check::new("design.alpha_naive", r.alpha_naive, naive_alpha(&inputs).alpha()[0], 1e-5 * s),
        Check::new("design.total_min_mse", r.total_min_mse, minimal, 1e-4 * s),
        Check::new("design.mse_at_optimum", minimal, consistency, 1e-12 * minimal * s),
        Check::new("flip_prob.zero_projection", 0.5, flip_prob(0.0, 1.0, 0.05), 1e-15 * s),
        Check::new("flip_prob.one_sigma", r.flip_at_one_sigma, flip_prob(1.0, 1.0, 0.05), 1e-5 * s),
    ])
}

/// Closed-form Gaussian integral against adaptive quadrature on a 5×5
/// log-spaced grid of `(σ, σ_v)` over `[0.01, 1]²`, tolerance 1e-9.
pub fn integral_checks(settings: &ValidationSettings) -> Result<Vec<Check>> {
    let grid: Vec<f64> = (0..5).map(|i| 10f64.powf(-2.0 + 0.5 * i as f64)).collect();
    let mut checks = Vec::with_capacity(25);
    for &sigma in &grid {
        for &sigma_v in &grid {
            let oracle = flip_weighted_magnitude_quadrature(sigma, sigma_v)?;
            checks.push(Check::new(
                format!("integral[sigma={sigma:.6},sigma_v={sigma_v:.6}]"),
                oracle,
                flip_weighted_magnitude(sigma, sigma_v),
                1e-9 * settings.tolerance_scale,
            ));
        }
    }
    Ok(checks)
}

/// Conditional Monte Carlo of the sign-mismatch probability over
/// `t/σ_v ∈ {0, 0.5, 1, 2}` × `pe ∈ {0, 0.05, 0.2}`, within 4 standard errors.
pub fn flip_checks(settings: &ValidationSettings) -> Result<Vec<Check>> {
    let ratios = [0.0, 0.5, 1.0, 2.0];
    let sigma_v = 1.0;
    let mut checks = Vec::with_capacity(12);
    for (idx, pe) in [0.0, 0.05, 0.2].into_iter().enumerate() {
        let projections: Vec<f64> = ratios.iter().map(|r| r * sigma_v).collect();
        let seed = settings.master_seed.wrapping_add(idx as u64);
        for row in validate_flip_prob(&projections, sigma_v, pe, settings.flip_trials, seed)? {
            let se = row.empirical.stderr.max(f64::MIN_POSITIVE);
            checks.push(Check::new(
                format!("flip_prob[t/sigma_v={},pe={pe}]", row.projection / sigma_v),
                row.analytic,
                row.empirical.mean,
                4.0 * se * settings.tolerance_scale,
            ));
        }
    }
    Ok(checks)
}

/// Empirical `E‖w‖²` against the closed form at every point of every
/// configured pipeline sweep, within 4 standard errors.
pub fn pipeline_checks(settings: &ValidationSettings) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for item in &settings.pipeline {
        let config = &item.config;
        let method = {
            let mut c = config.clone();
            c.recovery_mode = RecoveryMode::MismatchOnly;
            c.method_label()
        };
        for row in validate_mse_w(config)? {
            checks.push(Check::new(
                format!(
                    "mse_w[{},{}={},{method}]",
                    item.label,
                    config.sweep.name(),
                    row.axis_value
                ),
                row.analytic,
                row.empirical.mean,
                4.0 * row.empirical.stderr * settings.tolerance_scale,
            ));
        }
    }
    Ok(checks)
}

/// Runs every check group in a fixed order.
pub fn run_validation(settings: &ValidationSettings) -> Result<ValidationReport> {
    let mut checks = design_checks(settings)?;
    checks.extend(integral_checks(settings)?);
    checks.extend(flip_checks(settings)?);
    checks.extend(pipeline_checks(settings)?);
    Ok(ValidationReport { checks })
}

impl Default for ValidationSettings {
    fn default() -> Self {
        Self::new(DEFAULT_SEED).expect("built-in validation parameters are valid")
    }
}
