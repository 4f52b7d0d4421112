use onebit_wsn::montecarlo::{mean_estimate, run_trials, MetricKind};
use onebit_wsn::{
    db_to_linear, q_function, sweep, validate_flip_prob, validate_mse_w, ExperimentConfig,
    QuantizerMode, RecoveryMode, SweepAxis, SystemParams,
};

fn reference_config(snr_db: f64, pe: f64) -> ExperimentConfig {
    let params = SystemParams::with_snr(1000, 10, 100, 1.0, db_to_linear(snr_db)).unwrap();
    ExperimentConfig::new(params, pe)
}

fn in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn proposed_recovery_beats_zero_estimate() {
    let mut cfg = reference_config(10.0, 0.05);
    cfg.trials = 100;
    cfg.sweep = SweepAxis::Pe(vec![0.05]);
    let row = &sweep(&cfg).unwrap().rows[0];
    assert!(row.metric_mean.is_finite());
    assert!(row.metric_mean < 1.0, "nmse {}", row.metric_mean);
}

#[test]
fn full_crossover_leaves_only_signal_energy() {
    let mut cfg = reference_config(10.0, 0.5);
    cfg.trials = 2000;
    cfg.sweep = SweepAxis::Pe(vec![0.5]);
    let row = validate_mse_w(&cfg).unwrap()[0];
    let m_sigma2 = 100.0 * 0.01;
    assert!((row.analytic - m_sigma2).abs() < 1e-12);
    assert!(row.empirical.z_score(m_sigma2) <= 4.0, "{row:?}");
}

#[test]
fn naive_levels_lose_at_high_crossover() {
    let mut cfg = reference_config(0.0, 0.2);
    cfg.trials = 2000;
    cfg.sweep = SweepAxis::Pe(vec![0.2]);
    let optimal = validate_mse_w(&cfg).unwrap()[0];
    cfg.quantizer_mode = QuantizerMode::Naive;
    let naive = validate_mse_w(&cfg).unwrap()[0];
    assert!(naive.empirical.mean >= optimal.empirical.mean, "{naive:?} vs {optimal:?}");
    assert!(naive.analytic > optimal.analytic);
    assert!(optimal.within(4.0) && naive.within(4.0));
}

#[test]
fn flip_frequency_examples() {
    let sigma_v = 0.0316;
    let rows = validate_flip_prob(&[sigma_v], sigma_v, 0.05, 1_000_000, 41).unwrap();
    assert!((rows[0].analytic - 0.19279).abs() < 1e-5);
    assert!(rows[0].within(4.0), "{:?}", rows[0]);
    let ts = [0.5 * sigma_v, 2.0 * sigma_v];
    for row in validate_flip_prob(&ts, sigma_v, 0.0, 200_000, 42).unwrap() {
        assert_eq!(row.analytic, q_function(row.projection / sigma_v));
        assert!(row.within(4.0), "{row:?}");
    }
}

#[test]
fn worker_count_does_not_change_aggregates() {
    for mode in [RecoveryMode::MismatchOnly, RecoveryMode::L1Demapped, RecoveryMode::BihtSigns] {
        let params = SystemParams::with_snr(300, 5, 60, 1.0, 10.0).unwrap();
        let mut cfg = ExperimentConfig::new(params, 0.05);
        cfg.recovery_mode = mode;
        cfg.trials = 24;
        cfg.sweep = SweepAxis::Pe(vec![0.0, 0.1]);
        let serial = in_pool(1, || sweep(&cfg).unwrap());
        let parallel = in_pool(4, || sweep(&cfg).unwrap());
        assert_eq!(serial, parallel);
        for (a, b) in serial.rows.iter().zip(&parallel.rows) {
            assert_eq!(a.metric_mean.to_bits(), b.metric_mean.to_bits());
            assert_eq!(a.metric_stderr.to_bits(), b.metric_stderr.to_bits());
        }
    }
}

#[test]
fn nmse_is_a_ratio_of_sums() {
    let params = SystemParams::with_snr(300, 5, 60, 1.0, 10.0).unwrap();
    let mut cfg = ExperimentConfig::new(params, 0.05);
    cfg.trials = 30;
    let result = sweep(&cfg).unwrap();
    assert_eq!(result.metric, MetricKind::Nmse);
    let records = run_trials(&cfg.at_point(0).unwrap()).unwrap();
    let err: f64 = records.iter().map(|r| r.error_energy.unwrap()).sum();
    let energy: f64 = records.iter().map(|r| r.signal_energy).sum();
    assert!((result.rows[0].metric_mean - err / energy).abs() < 1e-14);
    let mean_of_ratios = records.iter().map(|r| r.nmse().unwrap()).sum::<f64>() / 30.0;
    assert_ne!(result.rows[0].metric_mean, mean_of_ratios);
}

#[test]
fn standard_error_shrinks_with_root_trials() {
    let mut cfg = reference_config(10.0, 0.1);
    cfg.recovery_mode = RecoveryMode::MismatchOnly;
    let se = |trials: usize| {
        let mut c = cfg.clone();
        c.trials = trials;
        let samples: Vec<f64> = run_trials(&c).unwrap().iter().map(|r| r.mse_w).collect();
        mean_estimate(&samples).stderr
    };
    let ratio = se(500) / se(2000);
    assert!((ratio - 2.0).abs() < 0.3, "ratio {ratio}");
}
