use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::boxplot::{boxplot_stats, BoxplotStats};
use crate::bandit::{run_episode_with, EpisodeOptions, InflationSchedule, LinearBanditEnv};
use crate::counterexamples::{example1_success_prob, example1_theta_star, Example1Arms, Example1Params};
use crate::error::{LabError, Result};
use crate::rng::{split_seed, RandomStream};

/// Prior and noise scales of the Example 1 run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Example1Variant {
    pub prior_sigma: f64,
    pub noise_tau: f64,
}

impl Default for Example1Variant {
    /// `σ = 1`, no noise.
    fn default() -> Self {
        Self {
            prior_sigma: 1.0,
            noise_tau: 0.0,
        }
    }
}

/// One replication at one `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Example1Rep {
    pub dim: usize,
    pub rep: usize,
    pub seed: u64,
    /// Probability that round `3d + 1` picks `A` over the zero arm.
    pub p: f64,
    pub inv_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example1Result {
    pub reps: Vec<Example1Rep>,
    /// `1/p` summaries, in grid order.
    pub summary: Vec<(usize, BoxplotStats)>,
}

impl Example1Result {
    pub fn median(&self, dim: usize) -> Option<f64> {
        self.summary.iter().find(|(d, _)| *d == dim).map(|(_, s)| s.median)
    }
}

pub fn run_example1(dims: &[usize], reps: usize, base_seed: u64) -> Result<Example1Result> {
    run_example1_with(dims, reps, base_seed, Example1Variant::default())
}

/// For every `d` and replication: draw `Θ*`, run `3d` LinTS rounds (λ = 1,
/// ι = 1) and evaluate the success probability of round `3d + 1`.
pub fn run_example1_with(
    dims: &[usize],
    reps: usize,
    base_seed: u64,
    variant: Example1Variant,
) -> Result<Example1Result> {
    if dims.is_empty() || reps == 0 {
        return Err(LabError::EmptyInput);
    }
    let jobs: Vec<(usize, usize)> = dims.iter().flat_map(|&d| (0..reps).map(move |r| (d, r))).collect();
    let out: Vec<Example1Rep> = jobs
        .par_iter()
        .map(|&(d, r)| one_rep(d, r, base_seed, variant))
        .collect::<Result<_>>()?;
    let summary = dims
        .iter()
        .map(|&d| {
            let v: Vec<f64> = out.iter().filter(|x| x.dim == d).map(|x| x.inv_p).collect();
            boxplot_stats(&v).map(|s| (d, s))
        })
        .collect::<Result<_>>()?;
    Ok(Example1Result { reps: out, summary })
}

fn one_rep(d: usize, r: usize, base_seed: u64, variant: Example1Variant) -> Result<Example1Rep> {
    let params = Example1Params::new(d, variant.prior_sigma, variant.noise_tau)?;
    let seed = split_seed(base_seed, r as u64);
    let mut rng = RandomStream::new(seed);
    let theta_star = example1_theta_star(&params, &mut rng);
    let env = LinearBanditEnv::new(
        Example1Arms(params),
        theta_star,
        variant.noise_tau,
        params.forced_rounds(),
        0,
    )?;
    let traj = run_episode_with(
        &env,
        &InflationSchedule::bayes(),
        1.0,
        &mut rng,
        EpisodeOptions { track_thinness: false },
    )?;
    let p = example1_success_prob(&traj.final_state, &params.bad_arm(), 1.0)?;
    Ok(Example1Rep {
        dim: d,
        rep: r,
        seed,
        p,
        inv_p: 1.0 / p,
    })
}
