//! Noise-reduction example: after 3d forced rounds the posterior mean is
//! biased against the good arm, and 1/p estimates how long LinTS keeps
//! choosing the zero arm.

use lints_lab::counterexamples::{bias_closed_form, misperception_constants};
use lints_lab::experiments::{run_example1, run_example1_with, Example1Variant};

fn main() -> lints_lab::Result<()> {
    println!("block bias at (sigma, tau) = (1, 0): {:.7}", bias_closed_form(1.0, 0.0));
    let (p0, c1) = misperception_constants(1.0, 0.0);
    println!("p0 = {p0:.6}, C1 = {c1:.6}");

    let dims = [2, 4, 8, 16, 32, 64];
    let res = run_example1(&dims, 50, 42)?;
    println!("\n   d   median(1/p)       q1       q3");
    for (d, s) in &res.summary {
        println!("{d:>4} {:>13.3} {:>8.3} {:>8.3}", s.median, s.q1, s.q3);
    }

    // with equal prior and noise scales there is no bias
    let flat = run_example1_with(
        &[32],
        50,
        42,
        Example1Variant {
            prior_sigma: 1.0,
            noise_tau: 1.0,
        },
    )?;
    println!("\nsigma = tau, d = 32: median(1/p) = {:.3}", flat.summary[0].1.median);
    Ok(())
}
