use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Policy};
use crate::bandit::{run_episode, LinearBanditEnv, UniformCube};
use crate::error::{LabError, Result};
use crate::mc::Moments;
use crate::rng::RandomStream;

/// Thinness threshold for the exceedance column.
pub const PSI_CAP: f64 = 2.0;
/// Prior variance of `Θ*`, which is also the LinTS prior scale λ.
const PRIOR_VAR: f64 = 10.0;

/// Per-round averages over replications for one policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub t: usize,
    pub policy: Policy,
    pub thinness_mean: f64,
    pub inst_regret_mean: f64,
    pub cum_regret_mean: f64,
    pub inst_regret_se: f64,
    /// Fraction of replications with `ψ > PSI_CAP` at round `t`.
    pub psi_exceed_frac: f64,
}

/// Rows grouped by policy (in configuration order), then by `t`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SeriesTable {
    pub rows: Vec<SeriesRow>,
    pub reps: usize,
    /// Per-replication thinness, `thinness[policy][rep][t-1]`.
    #[serde(skip)]
    pub thinness: Vec<Vec<Vec<f64>>>,
}

impl SeriesTable {
    pub fn policy_rows(&self, policy: Policy) -> impl Iterator<Item = &SeriesRow> {
        self.rows.iter().filter(move |r| r.policy == policy)
    }

    /// Mean cumulative regret at the last round.
    pub fn final_cum_regret(&self, policy: Policy) -> Option<f64> {
        self.policy_rows(policy).last().map(|r| r.cum_regret_mean)
    }

    /// Fraction of `(rep, t)` pairs with `t > after` and `ψ ≤ cap`.
    pub fn thin_fraction_after(&self, policy_index: usize, after: usize, cap: f64) -> Option<f64> {
        let runs = self.thinness.get(policy_index)?;
        let (mut ok, mut total) = (0usize, 0usize);
        for run in runs {
            for &psi in run.iter().skip(after) {
                total += 1;
                ok += usize::from(psi <= cap);
            }
        }
        (total > 0).then(|| ok as f64 / total as f64)
    }

    /// Sum over `t` of the exceedance fraction.
    pub fn exceed_sum(&self, policy: Policy) -> f64 {
        self.policy_rows(policy).map(|r| r.psi_exceed_frac).sum()
    }
}

/// Runs every policy on its own trajectory; within a replication the
/// policies share `Θ* ~ N(0, 10 I)` and the sequence of arm sets.
pub fn run_policy_compare(cfg: &ExperimentConfig, base_seed: u64) -> Result<SeriesTable> {
    if cfg.d == 0 || cfg.arms == 0 || cfg.reps == 0 || cfg.policies.is_empty() {
        return Err(LabError::InvalidParam(
            "d, arms, reps and policies must be non-empty".into(),
        ));
    }
    let (d, horizon) = (cfg.d, cfg.horizon);
    // runs[rep][policy] = (thinness, regret)
    let runs: Vec<Vec<(Vec<f64>, Vec<f64>)>> = (0..cfg.reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = RandomStream::split(base_seed, r as u64);
            let theta_star = DVector::from_vec(rng.normals(d)) * PRIOR_VAR.sqrt();
            let arm_seed = rng.next_u64();
            let policy_seed = rng.next_u64();
            let env = LinearBanditEnv::new(
                UniformCube { dim: d, arms: cfg.arms },
                theta_star,
                1.0,
                horizon,
                arm_seed,
            )?;
            cfg.policies
                .iter()
                .map(|&p| {
                    let mut prng = RandomStream::split(policy_seed, p as u64);
                    let traj = run_episode(&env, &p.schedule(), PRIOR_VAR, &mut prng)?;
                    let psi = traj
                        .records
                        .iter()
                        .map(|x| x.thinness_of_precision.unwrap_or(f64::NAN))
                        .collect();
                    let regret = traj.records.iter().map(|x| x.instantaneous_regret).collect();
                    Ok((psi, regret))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(cfg.policies.len() * horizon);
    let mut thinness = Vec::with_capacity(cfg.policies.len());
    for (k, &policy) in cfg.policies.iter().enumerate() {
        let mut cum = 0.0;
        for t in 0..horizon {
            let mut psi = Moments::default();
            let mut regret = Moments::default();
            let mut exceed = 0usize;
            for run in &runs {
                let (p, g) = (&run[k].0[t], &run[k].1[t]);
                psi.push(*p);
                regret.push(*g);
                exceed += usize::from(*p > PSI_CAP);
            }
            cum += regret.mean();
            rows.push(SeriesRow {
                t: t + 1,
                policy,
                thinness_mean: psi.mean(),
                inst_regret_mean: regret.mean(),
                cum_regret_mean: cum,
                inst_regret_se: regret.std_error(),
                psi_exceed_frac: exceed as f64 / cfg.reps as f64,
            });
        }
        thinness.push(runs.iter().map(|run| run[k].0.clone()).collect());
    }
    Ok(SeriesTable {
        rows,
        reps: cfg.reps,
        thinness,
    })
}
