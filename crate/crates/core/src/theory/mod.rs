//! Closed-form and Monte-Carlo checks of the optimism lemma, the bias
//! decomposition identity and the uniform-cube tail lemmas.

mod decomposition;
mod optimism;
mod params;
mod report;
pub mod suites;
mod tails;

pub use decomposition::{mc_bias_decomposition, CoordinateCheck, DecompositionReport, GShape};
pub use optimism::{mc_optimism_rate, optimism_scan, OptimismScan, ScenarioKind, MAX_ATTEMPTS};
pub use params::{iota_theory, rho_theory, well_posed, TheoryParams};
pub use report::VerificationReport;
pub use suites::{run_suite, run_suite_scaled, Suite};
pub use tails::{mc_cube_tail, mc_cube_tail_with, mc_quad_lower_tail, QuadTailReport};
