use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::gauss::{PosteriorState, PsdMatrix};

/// Constants of the diversity assumptions and the optimism lemma.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryParams {
    /// ν ∈ [1, √d]: diversity of the optimal arm against a fixed direction.
    pub nu: f64,
    /// ω: lower bound on `‖A*‖_Σ / (sqrt(‖Σ‖_*/d)·‖A*‖₂)`.
    pub omega: f64,
    /// Ψ: thinness cap.
    pub psi_cap: f64,
    /// Sub-gaussian noise scale σ.
    pub subgauss_sigma: f64,
    /// Prior/parameter bound 𝛉.
    pub prior_bound: f64,
    /// Arm norm bound 𝐚.
    pub arm_bound: f64,
    pub horizon: usize,
    pub lambda: f64,
}

impl TheoryParams {
    pub fn validate(&self, d: usize) -> Result<()> {
        let positive = [
            ("nu", self.nu),
            ("omega", self.omega),
            ("psi_cap", self.psi_cap),
            ("arm_bound", self.arm_bound),
            ("lambda", self.lambda),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(LabError::InvalidParam(format!("{name} must be positive, got {v}")));
            }
        }
        if self.subgauss_sigma < 0.0 || self.prior_bound < 0.0 {
            return Err(LabError::InvalidParam("sigma and prior bound must be >= 0".into()));
        }
        if self.nu < 1.0 || self.nu > (d as f64).sqrt() + 1e-12 {
            return Err(LabError::InvalidParam(format!(
                "nu must lie in [1, sqrt(d)], got {}",
                self.nu
            )));
        }
        if self.psi_cap < 1.0 {
            return Err(LabError::InvalidParam("psi_cap must be >= 1".into()));
        }
        Ok(())
    }
}

/// `ρ = σ·sqrt(d·log(1 + T𝐚²/λ)) + 𝛉/√λ`.
pub fn rho_theory(params: &TheoryParams, d: usize) -> f64 {
    let growth = 1.0 + params.horizon as f64 * params.arm_bound * params.arm_bound / params.lambda;
    params.subgauss_sigma * (d as f64 * growth.ln()).sqrt() + params.prior_bound / params.lambda.sqrt()
}

/// `ι = (νΨ/ω)·(ρ/√d)`.
pub fn iota_theory(params: &TheoryParams, d: usize) -> f64 {
    params.nu * params.psi_cap / params.omega * rho_theory(params, d) / (d as f64).sqrt()
}

/// Well-posedness of round `t`: `ψ(Σ) ≤ Ψ`,
/// `‖A*‖_Σ ≥ ω·sqrt(‖Σ‖_*/d)·‖A*‖₂` and
/// `|⟨A*, θ̂ - Θ*⟩| ≤ (ν/√d)·‖A*‖₂·‖θ̂ - Θ*‖₂`, with Σ the posterior
/// covariance.
pub fn well_posed(
    theta_star: &DVector<f64>,
    state: &PosteriorState,
    a_star: &DVector<f64>,
    params: &TheoryParams,
) -> Result<bool> {
    well_posed_parts(theta_star, state.mean(), state.covariance(), a_star, params)
}

pub(crate) fn well_posed_parts(
    theta_star: &DVector<f64>,
    mean: &DVector<f64>,
    cov: &PsdMatrix,
    a_star: &DVector<f64>,
    params: &TheoryParams,
) -> Result<bool> {
    let d = cov.dim();
    for v in [theta_star, mean, a_star] {
        if v.len() != d {
            return Err(LabError::DimensionMismatch {
                expected: d,
                actual: v.len(),
            });
        }
    }
    let psi = cov.thinness()?;
    if psi > params.psi_cap {
        return Ok(false);
    }
    Ok(diversity_holds(
        theta_star,
        mean,
        cov.as_matrix(),
        a_star,
        params,
        cov.as_matrix().trace(),
    ))
}

/// The two arm conditions, given a precomputed trace.
pub(crate) fn diversity_holds(
    theta_star: &DVector<f64>,
    mean: &DVector<f64>,
    cov: &DMatrix<f64>,
    a_star: &DVector<f64>,
    params: &TheoryParams,
    trace: f64,
) -> bool {
    let d = a_star.len() as f64;
    let a_norm = a_star.norm();
    let a_sigma = (cov * a_star).dot(a_star).max(0.0).sqrt();
    if a_sigma < params.omega * (trace / d).sqrt() * a_norm {
        return false;
    }
    let err = mean - theta_star;
    a_star.dot(&err).abs() <= params.nu / d.sqrt() * a_norm * err.norm()
}
