//! Linear Thompson Sampling laboratory.
//!
//! The crate is organised around the pieces needed to study how LinTS behaves
//! when its posterior is (or is not) inflated:
//!
//! - [`gauss`]: dense PSD linear algebra and the Gaussian posterior state.
//! - [`bandit`]: arm sets, inflation schedules, the LinTS decision rule and
//!   the episode runner.
//! - [`counterexamples`]: the two adversarial environments (noise reduction
//!   with changing arm sets, mean shift with a fixed arm set) and the
//!   closed-form probabilities of their failure events.
//! - [`theory`]: Monte-Carlo and closed-form checks of the optimism lemma,
//!   the bias decomposition identity and the uniform-cube tail bounds.
//! - [`experiments`]: seeded, parallel replication harnesses.
//! - [`cli`]: argument parsing, CSV/JSON output and the `lints-lab` binary's
//!   dispatch.
//!
//! Every random quantity flows from a [`rng::RandomStream`] seeded by a
//! 64-bit value, so each run is reproducible bit-for-bit.

// `!(x > 0.0)` is used on purpose so NaN lands in the error branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bandit;
pub mod cli;
pub mod counterexamples;
pub mod error;
pub mod experiments;
pub mod gauss;
pub mod mc;
pub mod normal;
pub mod rng;
pub mod theory;

pub use error::{LabError, Result};
pub use gauss::{PosteriorState, PsdMatrix};
pub use rng::RandomStream;
