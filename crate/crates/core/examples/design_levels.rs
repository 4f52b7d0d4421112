// Optimal and naive representation levels, and the minimal mismatch MSE,
// across crossover probabilities.
//
//     cargo run --example design_levels

use onebit_wsn::{
    analytic_total_mse, db_to_linear, min_total_mse, naive_alpha, optimal_alpha, ChannelConfig,
    DesignInputs, SystemParams,
};

pub fn run_example() -> onebit_wsn::Result<()> {
    let params = SystemParams::with_snr(1000, 10, 100, 1.0, db_to_linear(10.0))?;
    println!("sigma2 = {}, sigma_v = {:.6}", params.sigma2(), params.sigma_v);
    println!("{:>5} {:>10} {:>10} {:>12} {:>12}", "pe", "alpha", "naive", "mse(alpha)", "mse(naive)");
    for pe in [0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5] {
        let inputs = DesignInputs::from_params(&params, ChannelConfig::homogeneous(params.m, pe)?)?;
        let optimal = optimal_alpha(&inputs);
        let naive = naive_alpha(&inputs);
        println!(
            "{pe:>5} {:>10.6} {:>10.6} {:>12.6} {:>12.6}",
            optimal.alpha()[0],
            naive.alpha()[0],
            min_total_mse(&inputs),
            analytic_total_mse(&naive, &inputs)?,
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> onebit_wsn::Result<()> {
    run_example()
}
