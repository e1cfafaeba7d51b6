use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::boxplot::{boxplot_stats, BoxplotStats};
use crate::bandit::{lints_round, InflationSchedule};
use crate::counterexamples::{decoy_arm, example2_action_set, example2_continue_prob, Example2Params};
use crate::error::{LabError, Result};
use crate::gauss::PosteriorState;
use crate::rng::{split_seed, RandomStream};

/// Round-1 rejections allowed per replication.
pub const MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Example2Mode {
    /// Sweep `d` at fixed μ.
    VaryD { mu: f64 },
    /// Sweep μ at fixed `d`.
    VaryMu { d: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Example2Rep {
    pub d: usize,
    pub mu: f64,
    pub rep: usize,
    pub seed: u64,
    /// Round-1 draws until `A'` was picked.
    pub attempts: usize,
    pub r1: f64,
    pub p: f64,
    pub inv_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example2Result {
    pub mode: Example2Mode,
    pub reps: Vec<Example2Rep>,
    /// `1/p` summaries keyed by the swept value, in grid order.
    pub summary: Vec<(f64, BoxplotStats)>,
}

impl Example2Result {
    pub fn medians(&self) -> Vec<f64> {
        self.summary.iter().map(|(_, s)| s.median).collect()
    }
}

/// For every grid point and replication: draw `Θ* ~ N(μ𝟏, I)` and run round
/// 1 of LinTS (λ = 1, ι = 1) until it picks `A'`; observe
/// `r₁ = ⟨Θ*, A'⟩ + ε` and record `1/p` for the continue probability `p`.
pub fn run_example2(mode: Example2Mode, grid: &[f64], reps: usize, base_seed: u64) -> Result<Example2Result> {
    if grid.is_empty() || reps == 0 {
        return Err(LabError::EmptyInput);
    }
    let points: Vec<(usize, f64)> = grid
        .iter()
        .map(|&g| match mode {
            Example2Mode::VaryD { mu } => {
                if g < 1.0 || g.fract() != 0.0 {
                    Err(LabError::InvalidParam(format!("d must be a positive integer, got {g}")))
                } else {
                    Ok((g as usize, mu))
                }
            }
            Example2Mode::VaryMu { d } => Ok((d, g)),
        })
        .collect::<Result<_>>()?;

    let mut out = Vec::with_capacity(points.len() * reps);
    let mut summary = Vec::with_capacity(points.len());
    for (&g, &(d, mu)) in grid.iter().zip(&points) {
        let params = Example2Params::new(d, mu, 1.0)?;
        let prior = PosteriorState::init(params.ambient_dim(), 1.0)?;
        let rows: Vec<Example2Rep> = (0..reps)
            .into_par_iter()
            .map(|r| one_rep(&params, &prior, r, base_seed))
            .collect::<Result<_>>()?;
        let inv: Vec<f64> = rows.iter().map(|x| x.inv_p).collect();
        summary.push((g, boxplot_stats(&inv)?));
        out.extend(rows);
    }
    Ok(Example2Result {
        mode,
        reps: out,
        summary,
    })
}

fn one_rep(params: &Example2Params, prior: &PosteriorState, r: usize, base_seed: u64) -> Result<Example2Rep> {
    let d = params.d;
    let seed = split_seed(base_seed, r as u64);
    let mut rng = RandomStream::new(seed);
    let set = example2_action_set(d);
    let decoy = decoy_arm(d);
    let bayes = InflationSchedule::bayes();
    for attempt in 1..=MAX_REJECTIONS {
        let theta_star = params.theta_star(&mut rng);
        let pick = lints_round(prior, &set, &bayes, 1, &mut rng)?;
        let eps = rng.standard_normal();
        if pick.arm_index != 1 {
            continue;
        }
        let r1 = theta_star.dot(&decoy) + eps;
        let p = example2_continue_prob(r1, d)?;
        return Ok(Example2Rep {
            d,
            mu: params.mu,
            rep: r,
            seed,
            attempts: attempt,
            r1,
            p,
            inv_p: 1.0 / p,
        });
    }
    Err(LabError::RejectionExhausted {
        attempts: MAX_REJECTIONS,
    })
}
