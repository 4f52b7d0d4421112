// The closed-form Gaussian integral behind the mismatch MSE, checked against
// adaptive Gauss-Kronrod quadrature.
//
//     cargo run --example quadrature_oracle

use onebit_wsn::flip_weighted_magnitude;
use onebit_wsn::quadrature::{gauss_kronrod, flip_weighted_magnitude_quadrature};

pub fn run_example() -> onebit_wsn::Result<()> {
    for (sigma, sigma_v) in [(0.1, 0.0316228), (0.01, 1.0), (1.0, 0.01), (0.3, 0.3)] {
        let closed = flip_weighted_magnitude(sigma, sigma_v);
        let quad = flip_weighted_magnitude_quadrature(sigma, sigma_v)?;
        println!("sigma={sigma:<6} sigma_v={sigma_v:<9} closed {closed:.12e} quadrature {quad:.12e}");
    }
    // The same integrator on a plain Gaussian tail.
    let tail = gauss_kronrod(
        |u| (-0.5 * u * u).exp() / (2.0 * std::f64::consts::PI).sqrt(),
        1.0,
        40.0,
        1e-14,
    )?;
    println!("Q(1) by quadrature {tail:.15}, by erfc {:.15}", onebit_wsn::q_function(1.0));
    Ok(())
}

#[allow(dead_code)]
fn main() -> onebit_wsn::Result<()> {
    run_example()
}
