//! Seeded replication harnesses for the simulation studies.
//!
//! Replication `r` of every experiment draws from
//! `RandomStream::split(base_seed, r)`, so results do not depend on
//! scheduling or the number of worker threads.

mod boxplot;
mod compare;
mod config;
mod example1;
mod example2;

pub use boxplot::{boxplot_stats, BoxplotStats};
pub use compare::{run_policy_compare, SeriesRow, SeriesTable, PSI_CAP};
pub use config::{ExperimentConfig, ExperimentKind, Policy};
pub use example1::{run_example1, run_example1_with, Example1Rep, Example1Result, Example1Variant};
pub use example2::{run_example2, Example2Mode, Example2Rep, Example2Result, MAX_REJECTIONS};
