use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::bandit::{run_episode_with, ActionSetSource, ArmSet, EpisodeOptions, InflationSchedule, LinearBanditEnv};
use crate::error::{LabError, Result};
use crate::gauss::PosteriorState;
use crate::normal;
use crate::rng::RandomStream;

/// Noise-reduction example: `d` independent two-coordinate blocks, true prior
/// `N(0, σ² I_{2d})`, true noise standard deviation `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Example1Params {
    pub blocks: usize,
    pub prior_sigma: f64,
    pub noise_tau: f64,
}

impl Example1Params {
    pub fn new(blocks: usize, prior_sigma: f64, noise_tau: f64) -> Result<Self> {
        if blocks == 0 {
            return Err(LabError::InvalidParam("block count must be >= 1".into()));
        }
        if !(prior_sigma >= 0.0 && noise_tau >= 0.0) {
            return Err(LabError::InvalidParam("sigma and tau must be >= 0".into()));
        }
        Ok(Self {
            blocks,
            prior_sigma,
            noise_tau,
        })
    }

    /// Ambient dimension `2d`.
    pub fn ambient_dim(&self) -> usize {
        2 * self.blocks
    }

    /// Length `3d` of the forced phase.
    pub fn forced_rounds(&self) -> usize {
        3 * self.blocks
    }

    /// `Sign(τ² - σ²)`, with `+1` when σ = τ.
    pub fn bias_sign(&self) -> f64 {
        if self.noise_tau * self.noise_tau >= self.prior_sigma * self.prior_sigma {
            1.0
        } else {
            -1.0
        }
    }

    /// The arm `A = Sign(τ² - σ²)/√d · 𝟏_{2d}` revealed after the forced
    /// phase.
    pub fn bad_arm(&self) -> DVector<f64> {
        DVector::from_element(self.ambient_dim(), self.bias_sign() / (self.blocks as f64).sqrt())
    }
}

fn basis(dim: usize, i: usize) -> DVector<f64> {
    let mut e = DVector::zeros(dim);
    e[i] = 1.0;
    e
}

/// Action set at round `t` (1-based):
/// `{e_t}` for `t ≤ 2d`, `{e_{2(t-2d)-1}, e_{2(t-2d)}}` for `2d < t ≤ 3d`,
/// `{0, A}` afterwards.
pub fn example1_action_set(params: &Example1Params, t: usize) -> ArmSet {
    assert!(t >= 1, "rounds are 1-based");
    let dim = params.ambient_dim();
    let d = params.blocks;
    let arms = if t <= 2 * d {
        vec![basis(dim, t - 1)]
    } else if t <= 3 * d {
        let k = t - 2 * d;
        vec![basis(dim, 2 * k - 2), basis(dim, 2 * k - 1)]
    } else {
        vec![DVector::zeros(dim), params.bad_arm()]
    };
    ArmSet::new(arms).expect("example arm sets are non-empty")
}

/// [`ActionSetSource`] for the noise-reduction example.
#[derive(Debug, Clone, Copy)]
pub struct Example1Arms(pub Example1Params);

impl ActionSetSource for Example1Arms {
    fn dim(&self) -> usize {
        self.0.ambient_dim()
    }

    fn arm_set(&self, t: usize, _rng: &mut RandomStream) -> ArmSet {
        example1_action_set(&self.0, t)
    }
}

/// `Θ* ~ N(0, σ² I_{2d})`.
pub fn example1_theta_star(params: &Example1Params, rng: &mut RandomStream) -> DVector<f64> {
    DVector::from_vec(rng.normals(params.ambient_dim())) * params.prior_sigma
}

/// Probability that a fresh sample `θ̃ ~ N(θ̂, ι²Σ)` satisfies `⟨θ̃, a⟩ > 0`,
/// i.e. that LinTS picks `a` over the zero arm:
/// `Φ(⟨θ̂, a⟩ / (ι·‖a‖_Σ))`.
pub fn example1_success_prob(state: &PosteriorState, a: &DVector<f64>, iota: f64) -> Result<f64> {
    if a.len() != state.dim() {
        return Err(LabError::DimensionMismatch {
            expected: state.dim(),
            actual: a.len(),
        });
    }
    let sd = state.variance_along(a).max(0.0).sqrt();
    if sd < 1e-300 {
        return Err(LabError::DegenerateArm);
    }
    Ok(normal::cdf(state.mean().dot(a) / (iota * sd)))
}

/// One simulated bias block: `Θ* ~ N(0, σ²I₂)`, rounds `{e₁}`, `{e₂}`,
/// `{e₁, e₂}` under LinTS with λ = 1, ι = 1.
#[derive(Debug, Clone)]
pub struct BlockOutcome {
    pub theta_star: DVector<f64>,
    /// Realised reward noise of the three rounds.
    pub noise: [f64; 3],
    /// Coordinate (0 or 1) picked at round 3.
    pub chosen: usize,
    /// Posterior mean after round 3.
    pub theta_hat: DVector<f64>,
}

impl BlockOutcome {
    /// `⟨e₁ + e₂, θ̂₄⟩`.
    pub fn v_projection(&self) -> f64 {
        self.theta_hat.sum()
    }
}

pub fn simulate_bias_block(sigma: f64, tau: f64, rng: &mut RandomStream) -> Result<BlockOutcome> {
    let params = Example1Params::new(1, sigma, tau)?;
    let theta_star = example1_theta_star(&params, rng);
    let env = LinearBanditEnv::new(Example1Arms(params), theta_star, tau, 3, 0)?;
    let traj = run_episode_with(
        &env,
        &InflationSchedule::bayes(),
        1.0,
        rng,
        EpisodeOptions { track_thinness: false },
    )?;
    let mut noise = [0.0; 3];
    for (eps, rec) in noise.iter_mut().zip(&traj.records) {
        *eps = rec.reward - env.theta_star.dot(&rec.arm);
    }
    Ok(BlockOutcome {
        chosen: traj.records[2].arm_index,
        theta_hat: traj.final_state.mean().clone(),
        theta_star: env.theta_star,
        noise,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandit::run_episode;

    fn e(dim: usize, i: usize) -> DVector<f64> {
        basis(dim, i)
    }

    #[test]
    fn action_set_phases() {
        let p = Example1Params::new(2, 1.0, 0.0).unwrap();
        assert_eq!(example1_action_set(&p, 1).arms(), &[e(4, 0)]);
        assert_eq!(example1_action_set(&p, 4).arms(), &[e(4, 3)]);
        assert_eq!(example1_action_set(&p, 5).arms(), &[e(4, 0), e(4, 1)]);
        assert_eq!(example1_action_set(&p, 6).arms(), &[e(4, 2), e(4, 3)]);
        let late = example1_action_set(&p, 7);
        assert_eq!(late.arm(0), &DVector::zeros(4));
        assert_eq!(late.arm(1), &DVector::from_element(4, -1.0 / 2f64.sqrt()));
        assert!((late.bound() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn bias_sign_convention() {
        assert_eq!(Example1Params::new(3, 1.0, 0.0).unwrap().bias_sign(), -1.0);
        assert_eq!(Example1Params::new(3, 0.0, 1.0).unwrap().bias_sign(), 1.0);
        assert_eq!(Example1Params::new(3, 1.0, 1.0).unwrap().bias_sign(), 1.0);
    }

    #[test]
    fn success_prob_examples() {
        let s = PosteriorState::init(2, 1.0).unwrap();
        let a = DVector::from_column_slice(&[1.0, 1.0]);
        assert_eq!(example1_success_prob(&s, &a, 1.0).unwrap(), 0.5);
        let s = s.update(&DVector::from_column_slice(&[1.0, 0.0]), -3.0).unwrap();
        let e1 = DVector::from_column_slice(&[1.0, 0.0]);
        let sd = s.variance_along(&e1).sqrt();
        let p = example1_success_prob(&s, &e1, 2.0).unwrap();
        assert!((p - normal::cdf(s.mean()[0] / (2.0 * sd))).abs() < 1e-15);
        assert!(matches!(
            example1_success_prob(&s, &DVector::zeros(2), 1.0),
            Err(LabError::DegenerateArm)
        ));
    }

    #[test]
    fn success_prob_at_minus_one_sd() {
        // θ̂ = (-1, 0), Σ = I: ⟨θ̂, e₁⟩ = -‖e₁‖_Σ
        let s = PosteriorState::from_precision(
            1.0,
            crate::gauss::PsdMatrix::identity(2),
            DVector::from_column_slice(&[-1.0, 0.0]),
            1,
        )
        .unwrap();
        let p = example1_success_prob(&s, &DVector::from_column_slice(&[1.0, 0.0]), 1.0).unwrap();
        assert!((p - 0.158_655).abs() < 1e-6);
    }

    #[test]
    fn noiseless_forced_phase_halves_theta() {
        let p = Example1Params::new(2, 1.0, 0.0).unwrap();
        let theta = DVector::from_column_slice(&[0.8, -1.1, 0.3, 2.0]);
        let env = LinearBanditEnv::new(Example1Arms(p), theta.clone(), 0.0, 4, 0).unwrap();
        let traj = run_episode(&env, &InflationSchedule::bayes(), 1.0, &mut RandomStream::new(1)).unwrap();
        assert!((traj.final_state.mean() - &theta / 2.0).amax() < 1e-14);
    }

    #[test]
    fn block_round_three_gives_two_thirds() {
        let p = Example1Params::new(2, 1.0, 0.0).unwrap();
        let theta = DVector::from_column_slice(&[0.8, -1.1, 0.3, 2.0]);
        let env = LinearBanditEnv::new(Example1Arms(p), theta.clone(), 0.0, 6, 0).unwrap();
        let traj = run_episode(&env, &InflationSchedule::bayes(), 1.0, &mut RandomStream::new(2)).unwrap();
        let mean = traj.final_state.mean();
        for (k, rec) in traj.records[4..6].iter().enumerate() {
            let chosen = 2 * k + rec.arm_index;
            let other = 2 * k + 1 - rec.arm_index;
            assert!((mean[chosen] - 2.0 * theta[chosen] / 3.0).abs() < 1e-12);
            assert!((mean[other] - theta[other] / 2.0).abs() < 1e-12);
        }
    }
}
