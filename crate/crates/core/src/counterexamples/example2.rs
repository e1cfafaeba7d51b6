use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::orthant::bivariate_orthant_neg;
use crate::bandit::{ActionSetSource, ArmSet};
use crate::error::{LabError, Result};
use crate::gauss::PosteriorState;
use crate::rng::RandomStream;

/// Mean-shift example: true prior `N(μ 𝟏_{3d}, σ² I_{3d})` and the fixed
/// action set `{0, A', A}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Example2Params {
    pub d: usize,
    pub mu: f64,
    pub prior_sigma: f64,
}

impl Example2Params {
    pub fn new(d: usize, mu: f64, prior_sigma: f64) -> Result<Self> {
        if d == 0 {
            return Err(LabError::InvalidParam("d must be >= 1".into()));
        }
        if !mu.is_finite() || !(prior_sigma > 0.0) || !prior_sigma.is_finite() {
            return Err(LabError::InvalidParam(format!(
                "need finite mu and positive sigma, got mu={mu}, sigma={prior_sigma}"
            )));
        }
        Ok(Self { d, mu, prior_sigma })
    }

    pub fn ambient_dim(&self) -> usize {
        3 * self.d
    }

    pub fn theta_star(&self, rng: &mut RandomStream) -> DVector<f64> {
        DVector::from_fn(self.ambient_dim(), |_, _| {
            self.mu + self.prior_sigma * rng.standard_normal()
        })
    }
}

/// `A' = -(1/√d) Σ_{i≤d} e_i`.
pub fn decoy_arm(d: usize) -> DVector<f64> {
    let h = 1.0 / (d as f64).sqrt();
    DVector::from_fn(3 * d, |i, _| if i < d { -h } else { 0.0 })
}

/// `A = (1/√d) Σ_{d<i≤3d} e_i - (1/√d) Σ_{i≤d} e_i`.
pub fn good_arm(d: usize) -> DVector<f64> {
    let h = 1.0 / (d as f64).sqrt();
    DVector::from_fn(3 * d, |i, _| if i < d { -h } else { h })
}

/// `{0, A', A}` in ℝ^{3d}, in that order.
pub fn example2_action_set(d: usize) -> ArmSet {
    assert!(d >= 1, "d must be >= 1");
    ArmSet::new(vec![DVector::zeros(3 * d), decoy_arm(d), good_arm(d)]).expect("non-empty")
}

#[derive(Debug, Clone, Copy)]
pub struct Example2Arms {
    set_d: usize,
}

impl Example2Arms {
    pub fn new(d: usize) -> Self {
        Self { set_d: d }
    }
}

impl ActionSetSource for Example2Arms {
    fn dim(&self) -> usize {
        3 * self.set_d
    }

    fn arm_set(&self, _t: usize, _rng: &mut RandomStream) -> ArmSet {
        example2_action_set(self.set_d)
    }
}

/// Joint law of `(⟨θ̃, A'⟩, ⟨θ̃, A⟩)` under `θ̃ ~ N(θ̂, ι²Σ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Round2Marginals {
    pub mean_decoy: f64,
    pub var_decoy: f64,
    pub mean_good: f64,
    pub var_good: f64,
    pub cov: f64,
}

impl Round2Marginals {
    /// Probability that the next pick is `A` or `A'` (not the zero arm).
    pub fn continue_prob(&self) -> Result<f64> {
        let stop = bivariate_orthant_neg(self.mean_decoy, self.mean_good, self.var_decoy, self.var_good, self.cov)?;
        Ok(1.0 - stop)
    }
}

/// Reads the marginals of the two non-zero arms off a posterior.
pub fn example2_round2_marginals(state: &PosteriorState, d: usize, iota: f64) -> Result<Round2Marginals> {
    if state.dim() != 3 * d {
        return Err(LabError::DimensionMismatch {
            expected: 3 * d,
            actual: state.dim(),
        });
    }
    let (decoy, good) = (decoy_arm(d), good_arm(d));
    let cov = state.covariance().as_matrix();
    let s2 = iota * iota;
    Ok(Round2Marginals {
        mean_decoy: state.mean().dot(&decoy),
        var_decoy: s2 * (cov * &decoy).dot(&decoy),
        mean_good: state.mean().dot(&good),
        var_good: s2 * (cov * &good).dot(&good),
        cov: s2 * (cov * &good).dot(&decoy),
    })
}

/// Continue probability at round 2 after LinTS (λ = 1, ι = 1) pulled `A'`
/// at round 1 and saw reward `r1`:
/// `⟨θ̃₂, A'⟩ ~ N(r1/2, 1/2)`, `⟨θ̃₂, A⟩ ~ N(r1/2, 5/2)`, covariance 1/2.
pub fn example2_continue_prob(r1: f64, d: usize) -> Result<f64> {
    if d == 0 {
        return Err(LabError::InvalidParam("d must be >= 1".into()));
    }
    let m = 0.5 * r1;
    Ok(1.0 - bivariate_orthant_neg(m, m, 0.5, 2.5, 0.5)?)
}
