//! Rank-one posterior updates, thinness of the precision matrix, and
//! inflated posterior samples.

use lints_lab::bandit::{inflation_value, InflationSchedule};
use lints_lab::{PosteriorState, RandomStream};
use nalgebra::DVector;

fn main() -> lints_lab::Result<()> {
    let d = 5;
    let mut rng = RandomStream::new(7);
    let theta_star = DVector::from_vec(rng.normals(d));
    let mut state = PosteriorState::init(d, 1.0)?;

    for t in 1..=200 {
        let a = DVector::from_vec(rng.unit_vector(d));
        let y = theta_star.dot(&a) + 0.5 * rng.standard_normal();
        state = state.update(&a, y)?;
        if t % 50 == 0 {
            println!(
                "t={t:>3}  |mean - theta*| = {:.4}  psi(precision) = {:.3}",
                (state.mean() - &theta_star).norm(),
                state.precision().thinness()?
            );
        }
    }

    for (name, schedule) in [
        ("bayes", InflationSchedule::bayes()),
        ("freq", InflationSchedule::freq()),
        ("improved", InflationSchedule::improved()),
    ] {
        let iota = inflation_value(&schedule, &state, state.t())?;
        let draw = state.sample(iota, &mut rng);
        println!(
            "{name:>8}: iota = {iota:.3}, |sample - mean| = {:.4}",
            (draw - state.mean()).norm()
        );
    }
    Ok(())
}
