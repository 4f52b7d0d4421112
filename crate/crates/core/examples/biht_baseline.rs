// Sign-only recovery with binary iterative hard thresholding, compared with
// amplitude-aided ℓ1 recovery on the same trials.
//
//     cargo run --example biht_baseline

use onebit_wsn::{db_to_linear, run_trial, ExperimentConfig, RecoveryMode, SystemParams};

pub fn run_example() -> onebit_wsn::Result<()> {
    for snr_db in [0.0, 10.0, 20.0] {
        let params = SystemParams::with_snr(1000, 10, 100, 1.0, db_to_linear(snr_db))?;
        let mut cfg = ExperimentConfig::new(params, 0.05);
        let mut totals = [0.0; 3];
        for t in 0..20 {
            cfg.recovery_mode = RecoveryMode::L1Demapped;
            let l1 = run_trial(&cfg, t)?;
            cfg.recovery_mode = RecoveryMode::BihtSigns;
            let biht = run_trial(&cfg, t)?;
            totals[0] += l1.error_energy.unwrap_or(f64::NAN);
            totals[1] += biht.error_energy.unwrap_or(f64::NAN);
            totals[2] += l1.signal_energy;
        }
        println!(
            "SNR {snr_db:>4} dB: l1 nmse {:.3}, biht nmse {:.3}",
            totals[0] / totals[2],
            totals[1] / totals[2]
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> onebit_wsn::Result<()> {
    run_example()
}
