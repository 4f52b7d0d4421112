// A sweep file parsed, planned and run in-process; prints each CSV and the
// gnuplot script the CLI would write.
//
//     cargo run --example config_sweep

use onebit_wsn::config::SweepFile;
use onebit_wsn::report::{gnuplot_script, sweep_csv, PlotEntry};
use onebit_wsn::sweep;

const CONFIG: &str = r#"
master_seed = 3
trials = 20

[sweeps.snr]
metric = "nmse"
axis = "snr_db"
grid = [0.0, 10.0, 20.0]
n = 500
k = 5
m = 60
methods = ["proposed_l1", "naive_l1", "biht"]

[sweeps.levels]
metric = "mse_w"
axis = "pe"
grid = [0.0, 0.25, 0.5]
methods = ["optimal", "naive", "fixed:0.05"]
"#;

pub fn run_example() -> onebit_wsn::Result<()> {
    let resolved = SweepFile::parse(CONFIG)?.resolve(None, None)?;
    let mut entries = Vec::new();
    for planned in resolved.plan()? {
        let results = planned.experiments.iter().map(sweep).collect::<onebit_wsn::Result<Vec<_>>>()?;
        println!("# {}.csv\n{}", planned.name, sweep_csv(&results));
        entries.push(PlotEntry {
            csv: format!("{}.csv", planned.name),
            axis: planned.experiments[0].sweep.name().into(),
            metric: planned.metric,
            methods: planned.experiments.iter().map(|e| e.method_label()).collect(),
        });
    }
    println!("# plot.gp\n{}", gnuplot_script(&entries));
    println!("# resolved config\n{}", resolved.to_toml()?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> onebit_wsn::Result<()> {
    run_example()
}
