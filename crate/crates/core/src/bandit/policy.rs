use nalgebra::DVector;

use super::arms::ArmSet;
use super::schedule::InflationSchedule;
use crate::error::{LabError, Result};
use crate::gauss::PosteriorState;
use crate::rng::RandomStream;

/// Outcome of one LinTS decision.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundDecision {
    pub arm_index: usize,
    pub theta_tilde: DVector<f64>,
    pub iota: f64,
}

/// Index of the arm with the largest inner product; ties go to the lowest
/// index.
pub fn select_arm(theta_tilde: &DVector<f64>, arm_set: &ArmSet) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, a) in arm_set.arms().iter().enumerate() {
        let v = a.dot(theta_tilde);
        if v > best_val {
            best = i;
            best_val = v;
        }
    }
    best
}

/// One LinTS round: pick ι, draw `θ̃ ~ N(θ̂, ι²Σ)` (exactly `d` normals from
/// `rng`), take the argmax arm.
pub fn lints_round(
    state: &PosteriorState,
    arm_set: &ArmSet,
    schedule: &InflationSchedule,
    t: usize,
    rng: &mut RandomStream,
) -> Result<RoundDecision> {
    let _ = t;
    decide(state, arm_set, schedule, None, rng)
}

pub(crate) fn decide(
    state: &PosteriorState,
    arm_set: &ArmSet,
    schedule: &InflationSchedule,
    psi: Option<f64>,
    rng: &mut RandomStream,
) -> Result<RoundDecision> {
    if arm_set.dim() != state.dim() {
        return Err(LabError::DimensionMismatch {
            expected: state.dim(),
            actual: arm_set.dim(),
        });
    }
    let iota = schedule.value_with_thinness(state, psi)?;
    let theta_tilde = state.sample(iota, rng);
    let arm_index = select_arm(&theta_tilde, arm_set);
    Ok(RoundDecision {
        arm_index,
        theta_tilde,
        iota,
    })
}
