// An NMSE sweep over the number of sensors, written as CSV to stdout.
//
//     cargo run --example nmse_sweep > sweep.csv

use onebit_wsn::report::sweep_csv;
use onebit_wsn::{db_to_linear, sweep, ExperimentConfig, RecoveryMode, SweepAxis, SystemParams};

pub fn run_example() -> onebit_wsn::Result<()> {
    let params = SystemParams::with_snr(1000, 10, 100, 1.0, db_to_linear(10.0))?;
    let mut results = Vec::new();
    for mode in [RecoveryMode::L1Demapped, RecoveryMode::BihtSigns] {
        let mut cfg = ExperimentConfig::new(params, 0.05);
        cfg.recovery_mode = mode;
        cfg.trials = 10;
        cfg.sweep = SweepAxis::M(vec![25, 50, 100, 200]);
        results.push(sweep(&cfg)?);
    }
    print!("{}", sweep_csv(&results));
    Ok(())
}

#[allow(dead_code)]
fn main() -> onebit_wsn::Result<()> {
    run_example()
}
