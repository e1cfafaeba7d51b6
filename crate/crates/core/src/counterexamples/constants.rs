use std::f64::consts::PI;

use crate::normal;

/// `β = E[max(A, B)]` for independent standard normals.
///
/// `max(A, B) = (A + B)/2 + |A - B|/2` and `A - B ~ N(0, 2)`, so
/// `β = E|N(0,2)|/2 = 1/√π`.
pub fn selection_beta() -> f64 {
    1.0 / PI.sqrt()
}

/// `⟨V, E[θ̂₄]⟩ = (σ² - τ²)·β / (6·sqrt(σ² + τ² + 2))` for one bias block,
/// `V = e₁ + e₂`.
pub fn bias_closed_form(sigma: f64, tau: f64) -> f64 {
    let (s2, t2) = (sigma * sigma, tau * tau);
    (s2 - t2) * selection_beta() / (6.0 * (s2 + t2 + 2.0).sqrt())
}

/// `(p₀, C₁)` with `p₀ = ½(1 - Φ(1))` and
/// `C₁ = |σ² - τ²|·β / (12·sqrt(σ² + τ² + 2))`.
pub fn misperception_constants(sigma: f64, tau: f64) -> (f64, f64) {
    let p0 = 0.5 * (1.0 - normal::cdf(1.0));
    let (s2, t2) = (sigma * sigma, tau * tau);
    let c1 = (s2 - t2).abs() * selection_beta() / (12.0 * (s2 + t2 + 2.0).sqrt());
    (p0, c1)
}
