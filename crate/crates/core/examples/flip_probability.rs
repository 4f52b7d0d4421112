// Closed-form probability that a node's received sign disagrees with the
// sign of its clean projection, against a conditional simulation.
//
//     cargo run --example flip_probability

use onebit_wsn::validate_flip_prob;

pub fn run_example() -> onebit_wsn::Result<()> {
    let sigma_v = 0.1;
    let projections: Vec<f64> = [0.0, 0.5, 1.0, 2.0].iter().map(|r| r * sigma_v).collect();
    for pe in [0.0, 0.05, 0.2] {
        for row in validate_flip_prob(&projections, sigma_v, pe, 200_000, 7)? {
            println!(
                "pe={pe:<5} t/sigma_v={:<4} closed form {:.5}  simulated {:.5} ± {:.5}",
                row.projection / sigma_v,
                row.analytic,
                row.empirical.mean,
                row.empirical.stderr
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> onebit_wsn::Result<()> {
    run_example()
}
