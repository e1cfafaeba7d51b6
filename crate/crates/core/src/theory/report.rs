use serde::{Deserialize, Serialize};

/// Outcome of one verification check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub samples: usize,
    pub estimate: f64,
    /// The bound or target the estimate is compared with.
    pub target: f64,
    pub std_error: f64,
    pub pass: bool,
}

impl VerificationReport {
    /// `|estimate - target| <= k · std_error`.
    pub fn within_se(name: impl Into<String>, samples: usize, estimate: f64, target: f64, se: f64, k: f64) -> Self {
        Self {
            name: name.into(),
            samples,
            estimate,
            target,
            std_error: se,
            pass: (estimate - target).abs() <= k * se,
        }
    }

    /// `|estimate - target| <= tol`.
    pub fn within_tol(name: impl Into<String>, samples: usize, estimate: f64, target: f64, se: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            samples,
            estimate,
            target,
            std_error: se,
            pass: (estimate - target).abs() <= tol,
        }
    }

    /// One-line summary, `PASS`/`FAIL` first.
    pub fn line(&self) -> String {
        format!(
            "{} {:<40} estimate={:.9} target={:.9} se={:.3e} n={}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.estimate,
            self.target,
            self.std_error,
            self.samples
        )
    }
}
