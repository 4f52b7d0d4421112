// The oracle check suite at reduced Monte Carlo effort, printed as TSV.
//
//     cargo run --example validation_suite

use onebit_wsn::validation::{run_validation, ValidationSettings};

pub fn run_example() -> onebit_wsn::Result<()> {
    let mut settings = ValidationSettings {
        flip_trials: 100_000,
        ..ValidationSettings::default()
    };
    for check in &mut settings.pipeline {
        check.config.trials = 1000;
    }
    let report = run_validation(&settings)?;
    print!("{}", report.to_tsv());
    println!("{} failed", report.failures().count());
    Ok(())
}

#[allow(dead_code)]
fn main() -> onebit_wsn::Result<()> {
    run_example()
}
