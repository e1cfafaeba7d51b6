//! TS-Bayes, TS-Freq and TS-Improved on shared random arm sets.

use lints_lab::experiments::{run_policy_compare, ExperimentConfig, ExperimentKind, Policy};

fn main() -> lints_lab::Result<()> {
    let cfg = ExperimentConfig {
        d: 10,
        arms: 20,
        horizon: 500,
        reps: 20,
        ..ExperimentConfig::for_kind(ExperimentKind::PolicyCompare)
    };
    let table = run_policy_compare(&cfg, 7)?;
    for (k, p) in cfg.policies.iter().enumerate() {
        let thin = table.thin_fraction_after(k, 100, 2.0).unwrap_or(f64::NAN);
        println!(
            "{:>8}: cumulative regret {:>8.2}, share of t > 100 with psi <= 2: {:.3}",
            p.name(),
            table.final_cum_regret(*p).unwrap_or(f64::NAN),
            thin
        );
    }
    let last = table.policy_rows(Policy::Bayes).last().expect("non-empty horizon");
    println!("mean thinness at t = {}: {:.3}", last.t, last.thinness_mean);
    Ok(())
}
