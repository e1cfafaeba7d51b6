use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::gauss::PosteriorState;

/// Parameters of the frequentist radius
/// `ρ_t = sqrt(2·[-½ log det Σ_t - ½ log det(s·I) - log δ]) + √d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoParams {
    pub delta: f64,
    pub prior_scale: f64,
}

impl RhoParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(LabError::InvalidParam(format!(
                "delta must be in (0,1), got {}",
                self.delta
            )));
        }
        if !(self.prior_scale > 0.0) || !self.prior_scale.is_finite() {
            return Err(LabError::InvalidParam(format!(
                "prior_scale must be positive, got {}",
                self.prior_scale
            )));
        }
        Ok(())
    }

    /// ρ for the given posterior, from log-determinants only.
    pub fn rho(&self, state: &PosteriorState) -> Result<f64> {
        let d = state.dim() as f64;
        let arg = -0.5 * state.log_det_covariance() - 0.5 * d * self.prior_scale.ln() - self.delta.ln();
        if !(arg > 0.0) {
            return Err(LabError::NonFiniteRho { value: arg });
        }
        Ok((2.0 * arg).sqrt() + d.sqrt())
    }
}

/// How the posterior inflation ι is chosen each round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InflationSchedule {
    /// Fixed ι (ι = 1 is plain Bayesian LinTS).
    Constant { iota: f64 },
    /// ι = ρ_t.
    FreqRho(RhoParams),
    /// ι = `base_iota` while the precision's thinness is at most
    /// `psi_threshold`, ρ_t otherwise.
    ThinnessGated {
        base_iota: f64,
        psi_threshold: f64,
        fallback: RhoParams,
    },
}

impl InflationSchedule {
    /// TS-Bayes.
    pub fn bayes() -> Self {
        InflationSchedule::Constant { iota: 1.0 }
    }

    /// TS-Freq with `δ = 1e-4` and prior scale 0.1.
    pub fn freq() -> Self {
        InflationSchedule::FreqRho(RhoParams {
            delta: 1e-4,
            prior_scale: 0.1,
        })
    }

    /// TS-Improved: ι = 5 while ψ ≤ 2, ρ_t otherwise.
    pub fn improved() -> Self {
        InflationSchedule::ThinnessGated {
            base_iota: 5.0,
            psi_threshold: 2.0,
            fallback: RhoParams {
                delta: 1e-4,
                prior_scale: 0.1,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            InflationSchedule::Constant { iota } => positive("iota", *iota),
            InflationSchedule::FreqRho(p) => p.validate(),
            InflationSchedule::ThinnessGated {
                base_iota,
                psi_threshold,
                fallback,
            } => {
                positive("base_iota", *base_iota)?;
                positive("psi_threshold", *psi_threshold)?;
                fallback.validate()
            }
        }
    }

    pub fn needs_thinness(&self) -> bool {
        matches!(self, InflationSchedule::ThinnessGated { .. })
    }

    /// ι given the state and, for the gated schedule, the thinness of its
    /// precision matrix.
    pub(crate) fn value_with_thinness(&self, state: &PosteriorState, psi: Option<f64>) -> Result<f64> {
        match self {
            InflationSchedule::Constant { iota } => Ok(*iota),
            InflationSchedule::FreqRho(p) => p.rho(state),
            InflationSchedule::ThinnessGated {
                base_iota,
                psi_threshold,
                fallback,
            } => {
                let psi = match psi {
                    Some(psi) => psi,
                    None => state.precision().thinness()?,
                };
                if psi <= *psi_threshold {
                    Ok(*base_iota)
                } else {
                    fallback.rho(state)
                }
            }
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(LabError::InvalidParam(format!("{name} must be positive, got {v}")))
    }
}

/// Inflation ι used at round `t`.
pub fn inflation_value(schedule: &InflationSchedule, state: &PosteriorState, _t: usize) -> Result<f64> {
    schedule.value_with_thinness(state, None)
}
