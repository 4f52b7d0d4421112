//! CSV tables and gnuplot scripts for sweep results.
//!
//! Numbers are written with Rust's `Display` for `f64`, which is
//! locale-independent and round-trips exactly. Column order is fixed and the
//! header row is always present.

use std::fmt::Write as _;

use crate::montecarlo::{MetricKind, SweepResult};

pub const CSV_HEADER: &str = "axis_value,method,metric_mean,metric_stderr,analytic_value,trials";

/// All rows of `results` as one CSV document. `analytic_value` is left empty
/// where no closed form applies.
pub fn sweep_csv(results: &[SweepResult]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for result in results {
        for row in &result.rows {
            let analytic = row.analytic_value.map(|v| v.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{}",
                row.axis_value, row.method, row.metric_mean, row.metric_stderr, analytic, row.trials
            )
            .expect("writing to a String cannot fail");
        }
    }
    out
}

/// What the plot script needs to know about one CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotEntry {
    /// CSV file name, relative to the script.
    pub csv: String,
    pub axis: String,
    pub metric: MetricKind,
    pub methods: Vec<String>,
}

fn axis_label(axis: &str) -> &str {
    match axis {
        "pe" => "bit flipping probability P_e",
        "snr_db" => "SNR (dB)",
        "m" => "number of sensors M",
        other => other,
    }
}

/// A gnuplot script drawing one PNG per CSV, with error bars from
/// `metric_stderr` and the closed form as a line where present. Run it from
/// the directory holding the CSVs: `gnuplot plot.gp`.
pub fn gnuplot_script(entries: &[PlotEntry]) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set terminal pngcairo size 800,600\n");
    s.push_str("set grid\n");
    s.push_str("set key top left\n");
    for entry in entries {
        let png = entry.csv.trim_end_matches(".csv");
        let _ = writeln!(s, "\nset output '{png}.png'");
        let _ = writeln!(s, "set xlabel '{}'", axis_label(&entry.axis));
        match entry.metric {
            MetricKind::MseW => {
                s.push_str("unset logscale y\n");
                s.push_str("set ylabel 'MSE of w'\n");
            }
            MetricKind::Nmse => {
                s.push_str("set logscale y\n");
                s.push_str("set ylabel 'NMSE'\n");
            }
        }
        let mut curves = Vec::new();
        for method in &entry.methods {
            curves.push(format!(
                "'{}' every ::1 using 1:(strcol(2) eq '{method}' ? $3 : NaN):4 with yerrorlines title '{method}'",
                entry.csv
            ));
            if entry.metric == MetricKind::MseW {
                curves.push(format!(
                    "'{}' every ::1 using 1:(strcol(2) eq '{method}' ? $5 : NaN) with lines dashtype 2 title '{method} (closed form)'",
                    entry.csv
                ));
            }
        }
        let _ = writeln!(s, "plot {}", curves.join(", \\\n     "));
    }
    s
}
