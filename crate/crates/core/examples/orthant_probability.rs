//! Bivariate normal orthant probabilities against the centred closed form.

use std::f64::consts::PI;

use lints_lab::counterexamples::bivariate_orthant_neg;

fn main() -> lints_lab::Result<()> {
    println!(" rho   quadrature   1/4 + asin(rho)/(2 pi)");
    for k in [-9, -5, 0, 5, 9] {
        let rho = k as f64 / 10.0;
        let p = bivariate_orthant_neg(0.0, 0.0, 1.0, 1.0, rho)?;
        println!("{rho:>4}   {p:.12}   {:.12}", 0.25 + rho.asin() / (2.0 * PI));
    }
    let p = bivariate_orthant_neg(0.5, -0.3, 0.5, 2.5, 0.5)?;
    println!("\nP(X < 0, Y < 0) with means (0.5, -0.3): {p:.10}");
    Ok(())
}
