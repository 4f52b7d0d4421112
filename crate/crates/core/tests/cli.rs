use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_onebit-wsn");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const MSE_SWEEP: &str = r#"
master_seed = 5

[sweeps.mse_vs_pe]
metric = "mse_w"
axis = "pe"
grid = [0.0, 0.2, 0.4]
n = 200
k = 4
m = 30
trials = 60
"#;

const NMSE_SWEEP: &str = r#"
trials = 8

[sweeps.nmse_vs_pe]
metric = "nmse"
axis = "pe"
grid = [0.0, 0.05, 0.1, 0.15]
n = 200
k = 4
m = 40
methods = ["proposed_l1", "biht"]
"#;

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("axis_value,method,metric_mean,metric_stderr,analytic_value,trials")
    );
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn mismatch_sweep_has_empirical_and_closed_form_columns() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "mse_vs_pe.toml", MSE_SWEEP);
    let out = tmp.path().join("out");
    let o = run(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&out.join("mse_vs_pe.csv"));
    assert_eq!(rows.len(), 6);
    for row in &rows {
        assert!(["optimal", "naive"].contains(&row[1].as_str()));
        let mean: f64 = row[2].parse().unwrap();
        let analytic: f64 = row[4].parse().unwrap();
        assert!(mean > 0.0 && analytic > 0.0);
        assert_eq!(row[5], "60");
    }
    let plot = fs::read_to_string(out.join("plot.gp")).unwrap();
    assert!(plot.contains("'mse_vs_pe.csv'"));
    let manifest = fs::read_to_string(out.join("manifest.toml")).unwrap();
    for key in ["master_seed = 5", "tool_version", "timestamp", "outputs", "lambda_scale"] {
        assert!(manifest.contains(key), "{key} missing:\n{manifest}");
    }
}

#[test]
fn method_sweep_rows_cover_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "nmse_vs_pe.toml", NMSE_SWEEP);
    let out = tmp.path().join("out");
    let o = run(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&out.join("nmse_vs_pe.csv"));
    let keys: Vec<(String, String)> = rows.iter().map(|r| (r[0].clone(), r[1].clone())).collect();
    for method in ["proposed_l1", "biht"] {
        for pe in ["0", "0.05", "0.1", "0.15"] {
            assert!(keys.contains(&(pe.to_string(), method.to_string())), "{pe} {method}");
        }
    }
    assert!(rows.iter().all(|r| r[4].is_empty()));
}

#[test]
fn manifest_rerun_is_byte_identical_across_workers() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "nmse_vs_pe.toml", NMSE_SWEEP);
    let first = tmp.path().join("first");
    let o = run(&["--workers", "1", "sweep", "--config", &cfg, "--out", first.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let manifest = first.join("manifest.toml");
    let second = tmp.path().join("second");
    let o = run(&[
        "sweep",
        "--workers",
        "3",
        "--config",
        manifest.to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read(first.join("nmse_vs_pe.csv")).unwrap(), fs::read(second.join("nmse_vs_pe.csv")).unwrap());
    let strip = |p: &Path| {
        fs::read_to_string(p)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("timestamp"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&manifest), strip(&second.join("manifest.toml")));
}

#[test]
fn seed_flag_changes_results() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "nmse_vs_pe.toml", NMSE_SWEEP);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert!(run(&["sweep", "--config", &cfg, "--out", a.to_str().unwrap()]).status.success());
    assert!(run(&["sweep", "--seed", "9", "--config", &cfg, "--out", b.to_str().unwrap()])
        .status
        .success());
    assert_ne!(fs::read(a.join("nmse_vs_pe.csv")).unwrap(), fs::read(b.join("nmse_vs_pe.csv")).unwrap());
    assert!(fs::read_to_string(b.join("manifest.toml")).unwrap().contains("master_seed = 9"));
}

#[test]
fn empty_grid_is_rejected_without_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let text = format!("{MSE_SWEEP}\n[sweeps.broken]\nmetric = \"nmse\"\naxis = \"snr_db\"\ngrid = []\n");
    let cfg = write_config(tmp.path(), "bad.toml", &text);
    let out = tmp.path().join("out");
    let o = run(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sweeps.broken"), "{}", stderr(&o));
    assert!(!out.exists());
}

#[test]
fn malformed_config_reports_line_and_key() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "bad.toml", "[sweeps.a]\nmetric = \"nmse\"\naxis = \"pe\"\ngrid = [0.1]\nsigma = 2\n");
    let o = run(&["sweep", "--config", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 5") && err.contains("sigma"), "{err}");
    let cfg = write_config(tmp.path(), "bad2.toml", "[sweeps.a]\nmetric = \"nmse\"\naxis = \"pe\"\ngrid = [0.1\n");
    let o = run(&["sweep", "--config", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));
}

#[test]
fn io_failures_name_the_path() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("missing.toml");
    let o = run(&["sweep", "--config", missing.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("missing.toml"));

    let cfg = write_config(tmp.path(), "nmse_vs_pe.toml", NMSE_SWEEP);
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = run(&["sweep", "--config", &cfg, "--out", blocker.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("file"), "{}", stderr(&o));
}

#[test]
fn design_prints_reference_design() {
    let o = run(&["design", "--n", "1000", "--k", "10", "--m", "100", "--snr-db", "10", "--pe", "0.05"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let get = |key: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{key}\t")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((get("alpha_opt") - 0.068468).abs() < 1e-5);
    assert!((get("total_min_mse") - 0.53121).abs() < 1e-4);
    assert_eq!(run(&["design", "--pe", "0.6"]).status.code(), Some(2));
}

#[test]
fn validate_passes_by_default_and_fails_at_zero_tolerance() {
    let o = run(&["validate", "--trials", "2000"]);
    let report = String::from_utf8(o.stdout.clone()).unwrap();
    assert_eq!(o.status.code(), Some(0), "{report}");
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(lines[0], "name\texpected\tobserved\ttolerance\tresult");
    assert_eq!(lines.len(), 1 + 6 + 25 + 12 + 12);
    assert!(lines[1..].iter().all(|l| l.split('\t').count() == 5 && l.ends_with("PASS")));

    let o = run(&["validate", "--trials", "50", "--tolerance-scale", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stdout).unwrap().contains("FAIL"));
}

#[test]
fn validate_uses_mismatch_sweeps_from_config() {
    let tmp = tempfile::tempdir().unwrap();
    let text = format!("{MSE_SWEEP}\n{}", NMSE_SWEEP.replace("trials = 8\n", ""));
    let cfg = write_config(tmp.path(), "mixed.toml", &text);
    let out = tmp.path().join("report");
    let o = run(&["validate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = fs::read_to_string(out.join("validation.tsv")).unwrap();
    assert_eq!(report.lines().filter(|l| l.starts_with("mse_w[mse_vs_pe,")).count(), 6);
    assert!(stderr(&o).contains("nmse_vs_pe"));
}

#[test]
fn injected_wrong_constant_fails_its_check() {
    use onebit_wsn::validation::{design_checks, ValidationSettings};
    let mut settings = ValidationSettings::default();
    settings.reference.total_min_mse = 0.5;
    let failed: Vec<String> = design_checks(&settings)
        .unwrap()
        .into_iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    assert_eq!(failed, ["design.total_min_mse"]);
}
