mod design_levels {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/design_levels.rs"));
}

#[test]
fn design_levels_runs() {
    design_levels::run_example().expect("design_levels example runs");
}

mod flip_probability {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/flip_probability.rs"));
}

#[test]
fn flip_probability_runs() {
    flip_probability::run_example().expect("flip_probability example runs");
}

mod mismatch_mse {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/mismatch_mse.rs"));
}

#[test]
fn mismatch_mse_runs() {
    mismatch_mse::run_example().expect("mismatch_mse example runs");
}

mod l1_recovery {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/l1_recovery.rs"));
}

#[test]
fn l1_recovery_runs() {
    l1_recovery::run_example().expect("l1_recovery example runs");
}

mod biht_baseline {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/biht_baseline.rs"));
}

#[test]
fn biht_baseline_runs() {
    biht_baseline::run_example().expect("biht_baseline example runs");
}

mod nmse_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/nmse_sweep.rs"));
}

#[test]
fn nmse_sweep_runs() {
    nmse_sweep::run_example().expect("nmse_sweep example runs");
}

mod quadrature_oracle {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/quadrature_oracle.rs"));
}

#[test]
fn quadrature_oracle_runs() {
    quadrature_oracle::run_example().expect("quadrature_oracle example runs");
}

mod validation_suite {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/validation_suite.rs"));
}

#[test]
fn validation_suite_runs() {
    validation_suite::run_example().expect("validation_suite example runs");
}

mod config_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/config_sweep.rs"));
}

#[test]
fn config_sweep_runs() {
    config_sweep::run_example().expect("config_sweep example runs");
}
