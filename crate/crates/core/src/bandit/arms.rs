use nalgebra::DVector;

use crate::error::{LabError, Result};
use crate::rng::RandomStream;

/// A finite, non-empty action set.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmSet {
    arms: Vec<DVector<f64>>,
    bound: f64,
}

impl ArmSet {
    /// The bound is the largest ℓ2 norm among the arms.
    pub fn new(arms: Vec<DVector<f64>>) -> Result<Self> {
        let first = arms.first().ok_or(LabError::EmptyInput)?;
        let d = first.len();
        if let Some(bad) = arms.iter().find(|a| a.len() != d) {
            return Err(LabError::DimensionMismatch {
                expected: d,
                actual: bad.len(),
            });
        }
        let bound = arms.iter().map(|a| a.norm()).fold(0.0, f64::max);
        Ok(Self { arms, bound })
    }

    /// Checks every arm against a declared bound (with 1e-12 slack).
    pub fn with_bound(arms: Vec<DVector<f64>>, bound: f64) -> Result<Self> {
        let mut set = Self::new(arms)?;
        if set.bound > bound + 1e-12 {
            return Err(LabError::InvalidParam(format!(
                "arm norm {} exceeds declared bound {bound}",
                set.bound
            )));
        }
        set.bound = bound;
        Ok(set)
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| DVector::from_column_slice(r)).collect())
    }

    pub fn arms(&self) -> &[DVector<f64>] {
        &self.arms
    }

    pub fn arm(&self, i: usize) -> &DVector<f64> {
        &self.arms[i]
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.arms[0].len()
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Largest expected reward `max_a ⟨θ, a⟩`.
    pub fn best_value(&self, theta: &DVector<f64>) -> f64 {
        self.arms.iter().map(|a| a.dot(theta)).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Produces the action set revealed at round `t` (1-based).
pub trait ActionSetSource: Send + Sync {
    fn dim(&self) -> usize;

    fn arm_set(&self, t: usize, rng: &mut RandomStream) -> ArmSet;
}

/// The same arm set every round.
#[derive(Debug, Clone)]
pub struct FixedArms(pub ArmSet);

impl ActionSetSource for FixedArms {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn arm_set(&self, _t: usize, _rng: &mut RandomStream) -> ArmSet {
        self.0.clone()
    }
}

/// `arms` independent draws from `Unif([-1/√d, 1/√d]^d)` each round.
#[derive(Debug, Clone, Copy)]
pub struct UniformCube {
    pub dim: usize,
    pub arms: usize,
}

impl UniformCube {
    pub fn draw(dim: usize, rng: &mut RandomStream) -> DVector<f64> {
        let h = 1.0 / (dim as f64).sqrt();
        DVector::from_fn(dim, |_, _| rng.uniform(-h, h))
    }
}

impl ActionSetSource for UniformCube {
    fn dim(&self) -> usize {
        self.dim
    }

    fn arm_set(&self, _t: usize, rng: &mut RandomStream) -> ArmSet {
        let arms = (0..self.arms).map(|_| Self::draw(self.dim, rng)).collect();
        // every cube point has norm <= 1
        ArmSet::with_bound(arms, 1.0).expect("cube arms are non-empty and bounded")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_is_max_norm() {
        let set = ArmSet::from_rows(&[&[3.0, 4.0], &[0.0, 1.0]]).unwrap();
        assert_eq!(set.bound(), 5.0);
        assert!(ArmSet::new(vec![]).is_err());
        assert!(ArmSet::from_rows(&[&[1.0], &[1.0, 2.0]]).is_err());
        assert!(ArmSet::with_bound(vec![DVector::from_element(2, 1.0)], 1.0).is_err());
    }

    #[test]
    fn cube_arms_inside_cube() {
        let mut rng = RandomStream::new(1);
        let src = UniformCube { dim: 9, arms: 20 };
        let set = src.arm_set(1, &mut rng);
        assert_eq!(set.len(), 20);
        for a in set.arms() {
            assert!(a.iter().all(|x| x.abs() <= 1.0 / 3.0));
        }
        assert!(set.bound() <= 1.0);
    }
}
