//! Mean-shift example: after LinTS pulls the decoy arm at round 1, the
//! probability of leaving the zero arm at round 2 shrinks with d and μ.

use lints_lab::counterexamples::{decoy_arm, example2_continue_prob, example2_round2_marginals};
use lints_lab::experiments::{run_example2, Example2Mode};
use lints_lab::PosteriorState;

fn main() -> lints_lab::Result<()> {
    let d = 8;
    let r1 = -0.4;
    let state = PosteriorState::init(3 * d, 1.0)?.update(&decoy_arm(d), r1)?;
    let m = example2_round2_marginals(&state, d, 1.0)?;
    println!(
        "after r1 = {r1}: decoy ~ N({:.2}, {:.2}), good ~ N({:.2}, {:.2}), cov {:.2}",
        m.mean_decoy, m.var_decoy, m.mean_good, m.var_good, m.cov
    );
    println!("continue probability {:.6}", example2_continue_prob(r1, d)?);

    let by_d = run_example2(Example2Mode::VaryD { mu: 0.1 }, &[16.0, 64.0, 256.0, 1024.0], 50, 42)?;
    println!("\nmu = 0.1");
    for (d, s) in &by_d.summary {
        println!("  d = {d:>5}: median(1/p) = {:.3}", s.median);
    }
    let mus: Vec<f64> = (0..=5).map(|i| i as f64 / 5.0).collect();
    let by_mu = run_example2(Example2Mode::VaryMu { d: 200 }, &mus, 50, 42)?;
    println!("\nd = 200");
    for (mu, s) in &by_mu.summary {
        println!("  mu = {mu:.1}: median(1/p) = {:.3}", s.median);
    }
    Ok(())
}
