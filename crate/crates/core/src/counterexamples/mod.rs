//! The two adversarial environments where un-inflated LinTS fails, and the
//! closed-form probabilities of their failure events.

mod constants;
mod example1;
mod example2;
mod orthant;

pub use constants::{bias_closed_form, misperception_constants, selection_beta};
pub use example1::{
    example1_action_set, example1_success_prob, example1_theta_star, simulate_bias_block, BlockOutcome, Example1Arms,
    Example1Params,
};
pub use example2::{
    decoy_arm, example2_action_set, example2_continue_prob, example2_round2_marginals, good_arm, Example2Arms,
    Example2Params, Round2Marginals,
};
pub use orthant::bivariate_orthant_neg;
