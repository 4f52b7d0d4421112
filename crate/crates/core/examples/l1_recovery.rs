// One network snapshot end to end: sparse signal, noisy local sensing,
// one-bit quantization with optimal levels, bit flips, and ℓ1 recovery
// from the de-mapped amplitudes.
//
//     cargo run --example l1_recovery

use onebit_wsn::rng::trial_rng;
use onebit_wsn::{
    analytic_total_mse, db_to_linear, gen_matrix, gen_signal, nmse, optimal_alpha, quantize, sense,
    solve_l1, transmit, ChannelConfig, DesignInputs, L1SolverParams, SystemParams,
};

pub fn run_example() -> onebit_wsn::Result<()> {
    let params = SystemParams::with_snr(1000, 10, 100, 1.0, db_to_linear(20.0))?;
    let channel = ChannelConfig::homogeneous(params.m, 0.02)?;
    let inputs = DesignInputs::from_params(&params, channel.clone())?;
    let levels = optimal_alpha(&inputs);

    let mut rng = trial_rng(2024, 0);
    let signal = gen_signal(&params, &mut rng)?;
    let matrix = gen_matrix(&params, &mut rng)?;
    let obs = sense(&signal, &matrix, &params, &mut rng)?;
    let bits = quantize(&obs.z, &levels)?;
    let received = transmit(&bits, &levels, &channel, &mut rng)?;

    let lambda = (analytic_total_mse(&levels, &inputs)? / params.m as f64).sqrt();
    for scale in [1.0, 0.3, 0.1] {
        let result = solve_l1(&received.y, &matrix, &L1SolverParams::new(scale * lambda)?)?;
        let found = result.s_hat.iter().filter(|v| v.abs() > 1e-6).count();
        println!(
            "lambda {:.5}: nmse {:.4}, {found} nonzeros, {} iterations, converged {}",
            scale * lambda,
            nmse(&signal, &result.s_hat)?,
            result.iterations,
            result.converged
        );
    }
    println!("{} of {} bits flipped", received.flip_count(), params.m);
    Ok(())
}

#[allow(dead_code)]
fn main() -> onebit_wsn::Result<()> {
    run_example()
}
