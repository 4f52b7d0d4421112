// Empirical data mismatch `E‖y - Φs‖²` at the fusion center against its
// closed form, for optimal and naive levels.
//
//     cargo run --example mismatch_mse

use onebit_wsn::{
    db_to_linear, validate_mse_w, ExperimentConfig, QuantizerMode, RecoveryMode, SweepAxis,
    SystemParams,
};

pub fn run_example() -> onebit_wsn::Result<()> {
    for snr_db in [0.0, 20.0] {
        let params = SystemParams::with_snr(1000, 10, 100, 1.0, db_to_linear(snr_db))?;
        for mode in [QuantizerMode::Optimal, QuantizerMode::Naive] {
            let mut cfg = ExperimentConfig::new(params, 0.0);
            cfg.quantizer_mode = mode;
            cfg.recovery_mode = RecoveryMode::MismatchOnly;
            cfg.trials = 1000;
            cfg.sweep = SweepAxis::Pe(vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5]);
            println!("SNR {snr_db} dB, {} levels", mode.label());
            for row in validate_mse_w(&cfg)? {
                println!(
                    "  pe={:<4} empirical {:.4} ± {:.4}  closed form {:.4}  minimum {:.4}",
                    row.axis_value, row.empirical.mean, row.empirical.stderr, row.analytic, row.minimal
                );
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> onebit_wsn::Result<()> {
    run_example()
}
