//! Linear bandit environments and the LinTS policy.

mod arms;
mod episode;
mod policy;
mod schedule;

pub use arms::{ActionSetSource, ArmSet, FixedArms, UniformCube};
pub use episode::{run_episode, run_episode_with, EpisodeOptions, LinearBanditEnv, RoundRecord, Trajectory};
pub use policy::{lints_round, select_arm, RoundDecision};
pub use schedule::{inflation_value, InflationSchedule, RhoParams};
