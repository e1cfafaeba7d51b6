use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bandit::InflationSchedule;
use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Example1,
    Example2VaryD,
    Example2VaryMu,
    PolicyCompare,
}

/// The three posterior-inflation policies of the comparison study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    Bayes,
    Freq,
    Improved,
}

impl Policy {
    pub const ALL: [Policy; 3] = [Policy::Bayes, Policy::Freq, Policy::Improved];

    pub fn name(self) -> &'static str {
        match self {
            Policy::Bayes => "bayes",
            Policy::Freq => "freq",
            Policy::Improved => "improved",
        }
    }

    pub fn schedule(self) -> InflationSchedule {
        match self {
            Policy::Bayes => InflationSchedule::bayes(),
            Policy::Freq => InflationSchedule::freq(),
            Policy::Improved => InflationSchedule::improved(),
        }
    }
}

impl FromStr for Policy {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "bayes" => Ok(Policy::Bayes),
            "freq" => Ok(Policy::Freq),
            "improved" => Ok(Policy::Improved),
            other => Err(LabError::InvalidParam(format!("unknown policy `{other}`"))),
        }
    }
}

/// Every knob of the simulation studies. [`Default`] gives the desk-scale
/// settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Example 1 blocks, or the Example 2 `d` grid.
    pub dims: Vec<usize>,
    pub mus: Vec<f64>,
    /// Fixed `d` of the μ sweep, and the dimension of the comparison study.
    pub d: usize,
    /// Fixed μ of the `d` sweep.
    pub mu: f64,
    pub reps: usize,
    pub base_seed: u64,
    pub horizon: usize,
    pub arms: usize,
    pub policies: Vec<Policy>,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: ExperimentKind::Example1,
            dims: vec![2, 4, 8, 16, 32, 64],
            mus: (0..=10).map(|i| i as f64 / 10.0).collect(),
            d: 200,
            mu: 0.1,
            reps: 50,
            base_seed: 42,
            horizon: 500,
            arms: 20,
            policies: Policy::ALL.to_vec(),
            out_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    /// Defaults of one study: Example 1 at d ≤ 64 with 50 reps, Example 2
    /// with `d = 200` for the μ sweep, the comparison at d = 50, k = 100.
    pub fn for_kind(kind: ExperimentKind) -> Self {
        let base = Self {
            kind,
            ..Self::default()
        };
        match kind {
            ExperimentKind::Example1 => base,
            ExperimentKind::Example2VaryD | ExperimentKind::Example2VaryMu => Self {
                dims: vec![16, 64, 256, 1024],
                ..base
            },
            ExperimentKind::PolicyCompare => Self {
                d: 50,
                arms: 100,
                horizon: 1000,
                reps: 20,
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(LabError::InvalidParam("reps must be >= 1".into()));
        }
        match self.kind {
            ExperimentKind::Example1 => {
                if self.dims.is_empty() || self.dims.iter().any(|&d| d < 2) {
                    return Err(LabError::InvalidParam(
                        "example1 needs a non-empty dims list with every d >= 2".into(),
                    ));
                }
            }
            ExperimentKind::Example2VaryD => {
                if self.dims.is_empty() || self.dims.contains(&0) {
                    return Err(LabError::InvalidParam("dims must be non-empty and positive".into()));
                }
            }
            ExperimentKind::Example2VaryMu => {
                if self.mus.is_empty() || self.mus.iter().any(|m| !m.is_finite()) || self.d == 0 {
                    return Err(LabError::InvalidParam(
                        "mus must be non-empty and finite, d >= 1".into(),
                    ));
                }
            }
            ExperimentKind::PolicyCompare => {
                if self.d == 0 || self.arms == 0 || self.horizon == 0 || self.policies.is_empty() {
                    return Err(LabError::InvalidParam(
                        "d, arms, horizon and policies must be non-empty".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}
