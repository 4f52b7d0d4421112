//! Command-line front end: `design`, `sweep` and `validate`.
//!
//! Exit codes: 0 success, 1 a validation check failed, 2 usage or config
//! error, 3 I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};

use crate::channel::ChannelConfig;
use crate::config::{ManifestInfo, PlannedSweep, SweepFile};
use crate::error::{Error, Result};
use crate::model::{db_to_linear, SystemParams};
use crate::montecarlo::{sweep, MetricKind, QuantizerMode, RecoveryMode, SweepResult};
use crate::quantizer::{analytic_node_mse, min_total_mse, naive_alpha, optimal_alpha, DesignInputs};
use crate::report::{gnuplot_script, sweep_csv, PlotEntry};
use crate::rng::DEFAULT_SEED;
use crate::validation::{run_validation, PipelineCheck, ValidationSettings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub const MANIFEST_FILE: &str = "manifest.toml";
pub const PLOT_FILE: &str = "plot.gp";

#[derive(Debug, Parser)]
#[command(name = "onebit-wsn", version, about = "One-bit compressive sensing over a noisy sensor network")]
pub struct Cli {
    /// Master seed for every random draw (default: the config's
    /// `master_seed`, else 20150101).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the optimal and naive representation levels and minimal MSE.
    Design {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        m: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma_s: f64,
        #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
        snr_db: f64,
        /// One value for every node, or a comma-separated list of M values.
        #[arg(long, default_value = "0.05", value_delimiter = ',')]
        pe: Vec<f64>,
    },
    /// Run the sweeps of a config file and write CSVs, a plot script and a
    /// manifest.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Trials per grid point, overriding the config.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Run the oracle check suite and print one line per check.
    Validate {
        /// Replace the built-in mismatch-MSE checks with the `mse_w` sweeps
        /// of this config.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Also write the report to `<dir>/validation.tsv`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Trials per mismatch-MSE grid point.
        #[arg(long)]
        trials: Option<usize>,
        /// Multiplies every check tolerance.
        #[arg(long, default_value_t = 1.0)]
        tolerance_scale: f64,
    },
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } => EXIT_IO,
        Error::Quadrature(_) => EXIT_CHECK_FAILED,
        Error::Parameter(_) | Error::Structure(_) | Error::Config(_) => EXIT_USAGE,
    }
}

fn execute(cli: &Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    let pool = match cli.workers {
        Some(0) => return Err(Error::Config("--workers must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {n} workers: {e}")))?,
        None => rayon::ThreadPoolBuilder::new()
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?,
    };
    pool.install(|| match &cli.command {
        Command::Design { n, k, m, sigma_s, snr_db, pe } => {
            cmd_design(*n, *k, *m, *sigma_s, *snr_db, pe, out, err).map(|_| EXIT_OK)
        }
        Command::Sweep { config, out: dir, trials } => {
            cmd_sweep(config, dir, cli.seed, *trials, err).map(|_| EXIT_OK)
        }
        Command::Validate { config, out: dir, trials, tolerance_scale } => cmd_validate(
            config.as_deref(),
            dir.as_deref(),
            cli.seed,
            *trials,
            *tolerance_scale,
            out,
            err,
        ),
    })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |e| Error::io(path, e)
}

/// Prints the quantizer design for one system as `quantity<TAB>value` lines.
#[allow(clippy::too_many_arguments)]
pub fn cmd_design(
    n: usize,
    k: usize,
    m: usize,
    sigma_s: f64,
    snr_db: f64,
    pe: &[f64],
    out: &mut (dyn Write + Send),
    err: &mut (dyn Write + Send),
) -> Result<()> {
    let params = SystemParams::with_snr(n, k, m, sigma_s, db_to_linear(snr_db))?;
    let channel = match pe {
        [p] => ChannelConfig::homogeneous(m, *p)?,
        list if list.len() == m => ChannelConfig::new(list.to_vec())?,
        list => {
            return Err(Error::Parameter(format!(
                "--pe takes one value or one per node ({m}), got {}",
                list.len()
            )))
        }
    };
    let inputs = DesignInputs::from_params(&params, channel.clone())?;
    let opt = optimal_alpha(&inputs);
    let naive = naive_alpha(&inputs);
    let sigma2 = params.sigma2();

    let mut text = String::from("quantity\tvalue\n");
    let mut line = |name: String, v: f64| text.push_str(&format!("{name}\t{v}\n"));
    line("sigma2".into(), sigma2);
    line("sigma_v".into(), params.sigma_v);
    line("snr_linear".into(), db_to_linear(snr_db));
    let homogeneous = channel.pe().windows(2).all(|w| w[0] == w[1]);
    let node_mse: Vec<f64> = opt
        .alpha()
        .iter()
        .zip(channel.pe())
        .map(|(&a, &p)| analytic_node_mse(a, sigma2, params.sigma_v, p))
        .collect();
    if homogeneous {
        line("alpha_opt".into(), opt.alpha()[0]);
        line("alpha_naive".into(), naive.alpha()[0]);
        line("node_min_mse".into(), node_mse[0]);
    } else {
        for i in 0..m {
            line(format!("alpha_opt[{i}]"), opt.alpha()[i]);
        }
        line("alpha_naive".into(), naive.alpha()[0]);
        for (i, v) in node_mse.iter().enumerate() {
            line(format!("node_min_mse[{i}]"), *v);
        }
    }
    line("total_min_mse".into(), min_total_mse(&inputs));
    out.write_all(text.as_bytes()).map_err(io_err(Path::new("<stdout>")))?;

    let degenerate = opt.alpha().iter().filter(|a| **a == 0.0).count();
    if degenerate > 0 {
        let _ = writeln!(
            err,
            "warning: {degenerate} node(s) have pe = 1/2; their optimal level is 0 and they carry no information"
        );
    }
    Ok(())
}

/// Runs every sweep of the config and writes `<name>.csv` per sweep,
/// [`PLOT_FILE`] and [`MANIFEST_FILE`] into `out_dir`. Nothing is written
/// unless the whole config is valid and every sweep finished.
pub fn cmd_sweep(
    config_path: &Path,
    out_dir: &Path,
    seed: Option<u64>,
    trials: Option<usize>,
    err: &mut (dyn Write + Send),
) -> Result<()> {
    let file = SweepFile::load(config_path)?;
    let mut resolved = file.resolve(seed, trials)?;
    let plan = resolved.plan()?;

    let mut outputs = Vec::new();
    for planned in &plan {
        let results = run_planned(planned, err)?;
        let name = format!("{}.csv", planned.name);
        outputs.push((name, sweep_csv(&results), planned));
    }

    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut entries = Vec::new();
    for (name, csv, planned) in &outputs {
        let path = out_dir.join(name);
        std::fs::write(&path, csv).map_err(io_err(&path))?;
        entries.push(PlotEntry {
            csv: name.clone(),
            axis: planned.experiments[0].sweep.name().to_string(),
            metric: planned.metric,
            methods: planned.experiments.iter().map(|e| e.method_label()).collect(),
        });
    }
    let plot_path = out_dir.join(PLOT_FILE);
    std::fs::write(&plot_path, gnuplot_script(&entries)).map_err(io_err(&plot_path))?;

    let mut listed: Vec<String> = outputs.iter().map(|(n, _, _)| n.clone()).collect();
    listed.push(PLOT_FILE.to_string());
    resolved.manifest = Some(ManifestInfo {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        outputs: listed,
    });
    let manifest_path = out_dir.join(MANIFEST_FILE);
    std::fs::write(&manifest_path, resolved.to_toml()?).map_err(io_err(&manifest_path))?;
    let _ = writeln!(err, "wrote {} sweep(s) to {}", outputs.len(), out_dir.display());
    Ok(())
}

fn run_planned(planned: &PlannedSweep, err: &mut (dyn Write + Send)) -> Result<Vec<SweepResult>> {
    planned
        .experiments
        .iter()
        .map(|exp| {
            let result = sweep(exp)?;
            let unconverged: usize = result.rows.iter().map(|r| r.unconverged).sum();
            let _ = writeln!(
                err,
                "{}: {} done ({} points x {} trials{})",
                planned.name,
                exp.method_label(),
                result.rows.len(),
                exp.trials,
                if unconverged > 0 {
                    format!(", {unconverged} solves hit the iteration cap")
                } else {
                    String::new()
                }
            );
            Ok(result)
        })
        .collect()
}

/// Runs the check suite, prints the report and returns 0 iff every check
/// passed.
pub fn cmd_validate(
    config_path: Option<&Path>,
    out_dir: Option<&Path>,
    seed: Option<u64>,
    trials: Option<usize>,
    tolerance_scale: f64,
    out: &mut (dyn Write + Send),
    err: &mut (dyn Write + Send),
) -> Result<i32> {
    if !(tolerance_scale.is_finite() && tolerance_scale >= 0.0) {
        return Err(Error::Config(format!(
            "--tolerance-scale must be a nonnegative number, got {tolerance_scale}"
        )));
    }
    let mut settings = ValidationSettings::new(seed.unwrap_or(DEFAULT_SEED))?;
    settings.tolerance_scale = tolerance_scale;
    if let Some(path) = config_path {
        settings.pipeline = pipeline_from_config(path, seed, err)?;
    }
    if let Some(t) = trials {
        if t < 2 {
            return Err(Error::Config("--trials must be at least 2 for a standard error".into()));
        }
        settings.pipeline.iter_mut().for_each(|p| p.config.trials = t);
    }
    let report = run_validation(&settings)?;
    let tsv = report.to_tsv();
    out.write_all(tsv.as_bytes()).map_err(io_err(Path::new("<stdout>")))?;
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
        let path = dir.join("validation.tsv");
        std::fs::write(&path, &tsv).map_err(io_err(&path))?;
    }
    let failed = report.failures().count();
    let _ = writeln!(err, "{} checks, {failed} failed", report.checks.len());
    Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn pipeline_from_config(
    path: &Path,
    seed: Option<u64>,
    err: &mut (dyn Write + Send),
) -> Result<Vec<PipelineCheck>> {
    let plan = SweepFile::load(path)?.resolve(seed, None)?.plan()?;
    let mut checks = Vec::new();
    for planned in plan {
        if planned.metric != MetricKind::MseW {
            let _ = writeln!(err, "note: sweep {} is not an mse_w sweep; skipped", planned.name);
            continue;
        }
        for config in planned.experiments {
            debug_assert_eq!(config.recovery_mode, RecoveryMode::MismatchOnly);
            if !matches!(config.quantizer_mode, QuantizerMode::Optimal | QuantizerMode::Naive) {
                let _ = writeln!(
                    err,
                    "note: {} method {} has no closed form to check; skipped",
                    planned.name,
                    config.method_label()
                );
                continue;
            }
            checks.push(PipelineCheck {
                label: planned.name.clone(),
                config,
            });
        }
    }
    Ok(checks)
}
