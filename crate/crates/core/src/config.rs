//! Sweep configuration files.
//!
//! A config is TOML with an optional top-level `master_seed` and `trials`
//! and one `[sweeps.<name>]` table per sweep. Keys inside a sweep mirror the
//! field names of [`SystemParams`] and [`ExperimentConfig`]:
//!
//! ```toml
//! master_seed = 20150101
//! trials = 500
//!
//! [sweeps.nmse_vs_pe_pe]
//! metric = "nmse"               # "mse_w" or "nmse"
//! axis = "pe"                   # "pe", "snr_db" or "m"
//! grid = [0.0, 0.05, 0.1, 0.15]
//! n = 1000
//! k = 10
//! m = 100
//! sigma_s = 1.0
//! snr_db = 10.0
//! pe = 0.05
//! methods = ["proposed_l1", "biht"]
//! ```
//!
//! Methods for `mse_w` sweeps: `optimal`, `naive`, `fixed:<alpha>`. For
//! `nmse` sweeps: `proposed_l1`, `naive_l1`, `fixed_l1:<alpha>`, `biht`.
//!
//! A run manifest is the same document with every default written out plus a
//! `[manifest]` table, so it can be fed back as a config.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{db_to_linear, SystemParams};
use crate::montecarlo::{
    ExperimentConfig, MetricKind, PeSetting, QuantizerMode, RecoveryMode, SweepAxis,
};
use crate::recovery::{BihtParams, L1SolverParams};
use crate::rng::DEFAULT_SEED;

/// Trials per point of an NMSE sweep when neither the sweep nor the file
/// sets a count.
pub const DEFAULT_TRIALS: usize = 500;
/// Same, for mismatch-MSE sweeps. These are cheap and are compared against
/// the closed form, so they get more trials.
pub const DEFAULT_MSE_TRIALS: usize = 10_000;

fn default_trials(metric: MetricName) -> usize {
    match metric {
        MetricName::MseW => DEFAULT_MSE_TRIALS,
        MetricName::Nmse => DEFAULT_TRIALS,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricName {
    MseW,
    Nmse,
}

impl From<MetricName> for MetricKind {
    fn from(m: MetricName) -> Self {
        match m {
            MetricName::MseW => MetricKind::MseW,
            MetricName::Nmse => MetricKind::Nmse,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisName {
    Pe,
    SnrDb,
    M,
}

fn d_n() -> usize {
    1000
}
fn d_k() -> usize {
    10
}
fn d_m() -> usize {
    100
}
fn d_sigma_s() -> f64 {
    1.0
}
fn d_snr_db() -> f64 {
    10.0
}
fn d_pe() -> f64 {
    0.05
}
fn d_lambda_scale() -> f64 {
    1.0
}
fn d_l1_max_iters() -> usize {
    L1SolverParams::DEFAULT_MAX_ITERS
}
fn d_l1_tol() -> f64 {
    L1SolverParams::DEFAULT_TOL
}
fn d_biht_max_iters() -> usize {
    BihtParams::DEFAULT_MAX_ITERS
}

/// One `[sweeps.<name>]` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub metric: MetricName,
    pub axis: AxisName,
    pub grid: Vec<f64>,
    #[serde(default = "d_n")]
    pub n: usize,
    #[serde(default = "d_k")]
    pub k: usize,
    #[serde(default = "d_m")]
    pub m: usize,
    #[serde(default = "d_sigma_s")]
    pub sigma_s: f64,
    #[serde(default = "d_snr_db")]
    pub snr_db: f64,
    #[serde(default = "d_pe")]
    pub pe: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub methods: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default = "d_lambda_scale")]
    pub lambda_scale: f64,
    #[serde(default = "d_l1_max_iters")]
    pub l1_max_iters: usize,
    #[serde(default = "d_l1_tol")]
    pub l1_tol: f64,
    #[serde(default = "d_biht_max_iters")]
    pub biht_max_iters: usize,
    #[serde(default)]
    pub fixed_matrix: bool,
}

/// Provenance recorded next to sweep outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestInfo {
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub outputs: Vec<String>,
}

/// A whole config (or manifest) file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default)]
    pub sweeps: BTreeMap<String, SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<ManifestInfo>,
}

/// A sweep ready to run: one experiment per method, all sharing the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannedSweep {
    pub name: String,
    pub metric: MetricKind,
    pub experiments: Vec<ExperimentConfig>,
}

impl SweepFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Fills every default: the seed (`seed` flag, then file, then
    /// [`DEFAULT_SEED`]), per-sweep trial counts (`trials` flag, then sweep,
    /// then file, then [`DEFAULT_TRIALS`] or
    /// [`DEFAULT_MSE_TRIALS`] by metric) and method lists. Drops any
    /// previous `[manifest]` table.
    pub fn resolve(&self, seed: Option<u64>, trials: Option<usize>) -> Result<SweepFile> {
        let master_seed = seed.or(self.master_seed).unwrap_or(DEFAULT_SEED);
        if master_seed > i64::MAX as u64 {
            return Err(Error::Config(format!(
                "master_seed {master_seed} does not fit a TOML integer (max {})",
                i64::MAX
            )));
        }
        let mut sweeps = BTreeMap::new();
        for (name, section) in &self.sweeps {
            let mut s = section.clone();
            let fallback = default_trials(s.metric);
            s.trials = Some(trials.or(section.trials).or(self.trials).unwrap_or(fallback));
            if s.methods.is_none() {
                s.methods = Some(default_methods(s.metric));
            }
            sweeps.insert(name.clone(), s);
        }
        Ok(SweepFile {
            master_seed: Some(master_seed),
            trials: self.trials,
            sweeps,
            manifest: None,
        })
    }

    /// Validates every sweep and turns it into experiments. Fails on the
    /// first problem, before anything runs.
    pub fn plan(&self) -> Result<Vec<PlannedSweep>> {
        if self.sweeps.is_empty() {
            return Err(Error::Config("config defines no [sweeps.<name>] tables".into()));
        }
        let seed = self.master_seed.unwrap_or(DEFAULT_SEED);
        self.sweeps
            .iter()
            .map(|(name, section)| {
                plan_section(name, section, seed, self.trials)
                    .map_err(|e| Error::Config(format!("sweeps.{name}: {}", inner_message(e))))
            })
            .collect()
    }
}

fn inner_message(e: Error) -> String {
    match e {
        Error::Config(m) | Error::Parameter(m) | Error::Structure(m) => m,
        other => other.to_string(),
    }
}

fn default_methods(metric: MetricName) -> Vec<String> {
    match metric {
        MetricName::MseW => vec!["optimal".into(), "naive".into()],
        MetricName::Nmse => vec!["proposed_l1".into(), "biht".into()],
    }
}

fn parse_method(metric: MetricName, method: &str) -> Result<(QuantizerMode, RecoveryMode)> {
    let fixed = |prefix: &str| -> Result<Option<QuantizerMode>> {
        match method.strip_prefix(prefix) {
            Some(v) => v
                .trim()
                .parse::<f64>()
                .map(|a| Some(QuantizerMode::Fixed(a)))
                .map_err(|_| Error::Config(format!("methods: bad level in `{method}`"))),
            None => Ok(None),
        }
    };
    let parsed = match metric {
        MetricName::MseW => match method {
            "optimal" => Some((QuantizerMode::Optimal, RecoveryMode::MismatchOnly)),
            "naive" => Some((QuantizerMode::Naive, RecoveryMode::MismatchOnly)),
            _ => fixed("fixed:")?.map(|q| (q, RecoveryMode::MismatchOnly)),
        },
        MetricName::Nmse => match method {
            "proposed_l1" => Some((QuantizerMode::Optimal, RecoveryMode::L1Demapped)),
            "naive_l1" => Some((QuantizerMode::Naive, RecoveryMode::L1Demapped)),
            "biht" => Some((QuantizerMode::Optimal, RecoveryMode::BihtSigns)),
            _ => fixed("fixed_l1:")?.map(|q| (q, RecoveryMode::L1Demapped)),
        },
    };
    parsed.ok_or_else(|| {
        Error::Config(format!(
            "methods: unknown method `{method}` for metric {:?}; expected one of {}",
            metric,
            match metric {
                MetricName::MseW => "optimal, naive, fixed:<alpha>",
                MetricName::Nmse => "proposed_l1, naive_l1, fixed_l1:<alpha>, biht",
            }
        ))
    })
}

fn plan_section(
    name: &str,
    s: &SweepSection,
    seed: u64,
    file_trials: Option<usize>,
) -> Result<PlannedSweep> {
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        return Err(Error::Config(
            "sweep names may only contain ASCII letters, digits, '_' and '-'".into(),
        ));
    }
    if s.grid.is_empty() {
        return Err(Error::Config("grid: must not be empty".into()));
    }
    let axis = match s.axis {
        AxisName::Pe => SweepAxis::Pe(s.grid.clone()),
        AxisName::SnrDb => SweepAxis::SnrDb(s.grid.clone()),
        AxisName::M => SweepAxis::M(
            s.grid
                .iter()
                .map(|&v| {
                    if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                        Ok(v as usize)
                    } else {
                        Err(Error::Config(format!("grid: M value {v} is not a positive integer")))
                    }
                })
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    axis.validate().map_err(|e| Error::Config(format!("grid: {}", inner_message(e))))?;
    let params = SystemParams::with_snr(s.n, s.k, s.m, s.sigma_s, db_to_linear(s.snr_db))?;
    let trials = s.trials.or(file_trials).unwrap_or_else(|| default_trials(s.metric));
    let methods = s.methods.clone().unwrap_or_else(|| default_methods(s.metric));
    if methods.is_empty() {
        return Err(Error::Config("methods: must not be empty".into()));
    }
    let experiments = methods
        .iter()
        .map(|method| {
            let (quantizer_mode, recovery_mode) = parse_method(s.metric, method)?;
            let cfg = ExperimentConfig {
                params,
                pe: PeSetting::Homogeneous(s.pe),
                quantizer_mode,
                recovery_mode,
                trials,
                master_seed: seed,
                sweep: axis.clone(),
                lambda_scale: s.lambda_scale,
                l1_max_iters: s.l1_max_iters,
                l1_tol: s.l1_tol,
                biht_max_iters: s.biht_max_iters,
                fixed_matrix: s.fixed_matrix,
            };
            cfg.validate()?;
            if let QuantizerMode::Fixed(a) = quantizer_mode {
                if !(a.is_finite() && a >= 0.0) {
                    return Err(Error::Config(format!("methods: level {a} must be nonnegative")));
                }
            }
            if l1_settings_invalid(&cfg) {
                return Err(Error::Config("l1_max_iters, l1_tol and biht_max_iters must be positive".into()));
            }
            Ok(cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PlannedSweep {
        name: name.to_string(),
        metric: s.metric.into(),
        experiments,
    })
}

fn l1_settings_invalid(cfg: &ExperimentConfig) -> bool {
    cfg.l1_max_iters == 0 || !(cfg.l1_tol > 0.0) || cfg.biht_max_iters == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    const NMSE_SWEEP: &str = r#"
master_seed = 7
trials = 40

[sweeps.nmse_vs_pe]
metric = "nmse"
axis = "pe"
grid = [0.0, 0.05, 0.1]
n = 200
k = 4
m = 40
"#;

    #[test]
    fn parses_and_plans() {
        let file = SweepFile::parse(NMSE_SWEEP).unwrap();
        let plan = file.resolve(None, None).unwrap().plan().unwrap();
        assert_eq!(plan.len(), 1);
        let exps = &plan[0].experiments;
        assert_eq!(exps.len(), 2);
        assert_eq!(exps[0].method_label(), "proposed_l1");
        assert_eq!(exps[1].method_label(), "biht");
        assert_eq!(exps[0].trials, 40);
        assert_eq!(exps[0].master_seed, 7);
        assert!((exps[0].params.snr().unwrap() - 10.0).abs() < 1e-9);
    }

    #[test]
    fn flags_override_file() {
        let file = SweepFile::parse(NMSE_SWEEP).unwrap();
        let r = file.resolve(Some(99), Some(3)).unwrap();
        assert_eq!(r.master_seed, Some(99));
        assert_eq!(r.sweeps["nmse_vs_pe"].trials, Some(3));
        let defaults = SweepFile::parse("[sweeps.a]\nmetric = \"mse_w\"\naxis = \"pe\"\ngrid = [0.1]\n")
            .unwrap()
            .resolve(None, None)
            .unwrap();
        assert_eq!(defaults.master_seed, Some(DEFAULT_SEED));
        assert_eq!(defaults.sweeps["a"].trials, Some(DEFAULT_MSE_TRIALS));
        assert!(SweepFile::parse(NMSE_SWEEP).unwrap().resolve(Some(u64::MAX), None).is_err());
    }

    #[test]
    fn resolved_file_round_trips() {
        let mut r = SweepFile::parse(NMSE_SWEEP).unwrap().resolve(None, None).unwrap();
        r.manifest = Some(ManifestInfo {
            tool_version: "0.1.0".into(),
            timestamp: 1,
            outputs: vec!["nmse_vs_pe.csv".into()],
        });
        let text = r.to_toml().unwrap();
        let back = SweepFile::parse(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.resolve(None, None).unwrap().plan().unwrap(), r.plan().unwrap());
    }

    #[test]
    fn reports_parse_location() {
        let err = SweepFile::parse("[sweeps.a]\nmetric = \"nmse\"\naxis = \"pe\"\ngrid = [0.1]\nbogus = 1\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("bogus"), "{err}");
        assert!(err.contains("line 5"), "{err}");
    }

    #[test]
    fn rejects_bad_sweeps() {
        let cases = [
            ("grid = []", "grid"),
            ("grid = [0.1, 0.05]", "ascending"),
            ("grid = [0.7]", "exceeds 1/2"),
            ("grid = [0.1]\nmethods = [\"optimal\"]", "unknown method"),
            ("grid = [0.1]\nmethods = []", "methods"),
            ("grid = [0.1]\nk = 0", "sparsity"),
        ];
        for (body, needle) in cases {
            let text = format!("[sweeps.s]\nmetric = \"nmse\"\naxis = \"pe\"\n{body}\n");
            let err = SweepFile::parse(&text).unwrap().plan().unwrap_err().to_string();
            assert!(err.contains(needle), "{body}: {err}");
            assert!(err.contains("sweeps.s"), "{err}");
        }
        let m_axis = "[sweeps.s]\nmetric = \"nmse\"\naxis = \"m\"\ngrid = [10.5]\n";
        assert!(SweepFile::parse(m_axis).unwrap().plan().is_err());
        assert!(SweepFile::parse("trials = 3\n").unwrap().plan().is_err());
    }

    #[test]
    fn fixed_methods_parse() {
        assert_eq!(
            parse_method(MetricName::MseW, "fixed:0.25").unwrap(),
            (QuantizerMode::Fixed(0.25), RecoveryMode::MismatchOnly)
        );
        assert_eq!(
            parse_method(MetricName::Nmse, "fixed_l1:1").unwrap(),
            (QuantizerMode::Fixed(1.0), RecoveryMode::L1Demapped)
        );
        assert!(parse_method(MetricName::MseW, "fixed:abc").is_err());
        assert!(parse_method(MetricName::Nmse, "optimal").is_err());
    }

    #[test]
    fn shipped_config_plans() {
        let file = SweepFile::parse(include_str!("../configs/experiments.toml")).unwrap();
        let plan = file.resolve(None, None).unwrap().plan().unwrap();
        assert_eq!(plan.len(), 5);
        let nmse_vs_m = plan.iter().find(|p| p.name == "nmse_vs_m").unwrap();
        assert_eq!(nmse_vs_m.experiments.len(), 2);
        assert_eq!(nmse_vs_m.experiments[0].trials, DEFAULT_TRIALS);
        assert_eq!(plan[0].experiments[0].trials, DEFAULT_MSE_TRIALS);
    }
}
