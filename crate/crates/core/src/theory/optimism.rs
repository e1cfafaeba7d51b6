//! Exact conditional optimism probability on rejection-sampled well-posed
//! scenarios.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::params::{diversity_holds, iota_theory, rho_theory, TheoryParams};
use super::report::VerificationReport;
use crate::error::{LabError, Result};
use crate::gauss::{cholesky, thinness, PsdMatrix};
use crate::normal;
use crate::rng::RandomStream;

/// Attempts allowed per scenario before giving up.
pub const MAX_ATTEMPTS: usize = 100_000;

/// How the error vector `E = θ̂ - Θ*` and the optimal arm are placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// `θ̂ = Θ*`.
    Centered,
    /// `E` uniform in the `Σ⁻¹`-ball of radius ρ, `A*` uniform on the sphere.
    Random,
    /// `‖E‖_{Σ⁻¹} = ρ` and `A*` at the largest angle against `E` that the
    /// diversity condition allows.
    Adversarial,
}

/// Summary of a batch of optimism probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimismScan {
    pub scenarios: usize,
    pub min: f64,
    pub mean: f64,
    /// Total draws, including rejected ones.
    pub attempts: usize,
}

struct Scenario {
    prob: f64,
    attempts: usize,
}

/// Minimum exact optimism probability over `scenarios` well-posed
/// scenarios, alternating random and adversarial placements, with ι from
/// [`iota_theory`]. Passes iff the minimum is at least `Φ(-1) - 1e-9`.
pub fn mc_optimism_rate(
    d: usize,
    params: &TheoryParams,
    scenarios: usize,
    rng: &mut RandomStream,
) -> Result<VerificationReport> {
    let seed = rng.next_u64();
    let kinds = [ScenarioKind::Random, ScenarioKind::Adversarial];
    let scan = scan_seeded(d, params, scenarios, &kinds, 1.0, seed)?;
    let target = normal::cdf(-1.0);
    Ok(VerificationReport {
        name: format!("optimism/d={d}"),
        samples: scenarios,
        estimate: scan.min,
        target,
        std_error: 0.0,
        pass: scan.min >= target - 1e-9,
    })
}

/// Same scenario machinery with a single placement kind and ι multiplied by
/// `iota_scale`.
pub fn optimism_scan(
    d: usize,
    params: &TheoryParams,
    scenarios: usize,
    kind: ScenarioKind,
    iota_scale: f64,
    rng: &mut RandomStream,
) -> Result<OptimismScan> {
    let seed = rng.next_u64();
    scan_seeded(d, params, scenarios, &[kind], iota_scale, seed)
}

fn scan_seeded(
    d: usize,
    params: &TheoryParams,
    scenarios: usize,
    kinds: &[ScenarioKind],
    iota_scale: f64,
    seed: u64,
) -> Result<OptimismScan> {
    params.validate(d)?;
    if scenarios == 0 {
        return Err(LabError::EmptyInput);
    }
    if !(iota_scale > 0.0) {
        return Err(LabError::InvalidParam(format!(
            "iota scale must be positive, got {iota_scale}"
        )));
    }
    let rho = rho_theory(params, d);
    let iota = iota_theory(params, d) * iota_scale;
    let results: Vec<Scenario> = (0..scenarios)
        .into_par_iter()
        .map(|i| {
            let mut rng = RandomStream::split(seed, i as u64);
            scenario(d, params, rho, iota, kinds[i % kinds.len()], &mut rng)
        })
        .collect::<Result<_>>()?;
    let min = results.iter().map(|s| s.prob).fold(f64::INFINITY, f64::min);
    let mean = results.iter().map(|s| s.prob).sum::<f64>() / scenarios as f64;
    Ok(OptimismScan {
        scenarios,
        min,
        mean,
        attempts: results.iter().map(|s| s.attempts).sum(),
    })
}

fn scenario(
    d: usize,
    params: &TheoryParams,
    rho: f64,
    iota: f64,
    kind: ScenarioKind,
    rng: &mut RandomStream,
) -> Result<Scenario> {
    for attempt in 1..=MAX_ATTEMPTS {
        let cov = random_covariance(d, params.psi_cap, rng)?;
        let Some(cov) = cov else { continue };
        let l = cholesky(cov.as_matrix())?.factor;
        let theta_star = DVector::from_vec(rng.normals(d)) * (params.prior_bound / (d as f64).sqrt());
        let err = match kind {
            ScenarioKind::Centered => DVector::zeros(d),
            ScenarioKind::Random => &l * ball_point(d, rho, rng),
            ScenarioKind::Adversarial => &l * (DVector::from_vec(rng.unit_vector(d)) * rho),
        };
        let a = match kind {
            ScenarioKind::Adversarial => adversarial_arm(&err, params.nu, rng),
            _ => DVector::from_vec(rng.unit_vector(d)),
        } * params.arm_bound;
        let mean = &theta_star + &err;
        let trace = cov.as_matrix().trace();
        if !diversity_holds(&theta_star, &mean, cov.as_matrix(), &a, params, trace) {
            continue;
        }
        let sd = (cov.as_matrix() * &a).dot(&a).sqrt();
        return Ok(Scenario {
            prob: normal::cdf(err.dot(&a) / (iota * sd)),
            attempts: attempt,
        });
    }
    Err(LabError::RejectionExhausted { attempts: MAX_ATTEMPTS })
}

/// `QΛQᵀ` with Haar-random `Q` and log-uniform spectrum, or `None` when
/// the thinness exceeds `psi_cap`.
fn random_covariance(d: usize, psi_cap: f64, rng: &mut RandomStream) -> Result<Option<PsdMatrix>> {
    let g = DMatrix::from_vec(d, d, rng.normals(d * d));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    let spread = rng.uniform(0.0, 2.0);
    let eig: Vec<f64> = (0..d).map(|_| rng.uniform(-spread, spread).exp()).collect();
    let lam = DMatrix::from_diagonal(&DVector::from_vec(eig));
    let cov = PsdMatrix::symmetrized(&q * lam * q.transpose());
    if thinness(&cov)? > psi_cap {
        return Ok(None);
    }
    Ok(Some(cov))
}

fn ball_point(d: usize, radius: f64, rng: &mut RandomStream) -> DVector<f64> {
    let r = radius * rng.uniform(0.0, 1.0).powf(1.0 / d as f64);
    DVector::from_vec(rng.unit_vector(d)) * r
}

/// Unit vector whose cosine with `err` is `-(ν/√d)(1 - 1e-9)`, or a random
/// unit vector when `err` vanishes.
fn adversarial_arm(err: &DVector<f64>, nu: f64, rng: &mut RandomStream) -> DVector<f64> {
    let d = err.len();
    let norm = err.norm();
    let u = DVector::from_vec(rng.unit_vector(d));
    if norm == 0.0 || d == 1 {
        return u;
    }
    let e = err / norm;
    let mut perp = &u - &e * u.dot(&e);
    let pn = perp.norm();
    if pn < 1e-12 {
        return u;
    }
    perp /= pn;
    let cos = (nu / (d as f64).sqrt() * (1.0 - 1e-9)).min(1.0);
    -e * cos + perp * (1.0 - cos * cos).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> TheoryParams {
        TheoryParams {
            nu: 2.0,
            omega: 0.5,
            psi_cap: 1.5,
            subgauss_sigma: 1.0,
            prior_bound: 1.0,
            arm_bound: 1.0,
            horizon: 1000,
            lambda: 1.0,
        }
    }

    #[test]
    fn centered_is_one_half() {
        let scan = optimism_scan(
            5,
            &params(),
            200,
            ScenarioKind::Centered,
            1.0,
            &mut RandomStream::new(1),
        )
        .unwrap();
        assert_eq!(scan.min, 0.5);
        assert_eq!(scan.mean, 0.5);
    }

    #[test]
    fn adversarial_stays_above_bound() {
        let p = params();
        let mut rng = RandomStream::new(2);
        let scan = optimism_scan(5, &p, 500, ScenarioKind::Adversarial, 1.0, &mut rng).unwrap();
        assert!(scan.min >= normal::cdf(-1.0) - 1e-9);
        assert!(scan.mean < 0.5);
        let wide = optimism_scan(5, &p, 500, ScenarioKind::Adversarial, 10.0, &mut RandomStream::new(2)).unwrap();
        assert!(wide.min > scan.min);
    }

    #[test]
    fn report_is_reproducible() {
        let p = params();
        let a = mc_optimism_rate(5, &p, 300, &mut RandomStream::new(3)).unwrap();
        let b = mc_optimism_rate(5, &p, 300, &mut RandomStream::new(3)).unwrap();
        assert_eq!(a, b);
        assert!(a.pass);
    }

    #[test]
    fn impossible_cap_exhausts() {
        // ‖A‖_Σ ≤ ψ·sqrt(‖Σ‖_*/d)·‖A‖₂, so ω > Ψ can never hold
        let p = TheoryParams { omega: 2.0, ..params() };
        let err = optimism_scan(5, &p, 1, ScenarioKind::Random, 1.0, &mut RandomStream::new(4)).unwrap_err();
        assert!(matches!(err, LabError::RejectionExhausted { .. }), "{err:?}");
    }

    #[test]
    fn adversarial_arm_angle() {
        let mut rng = RandomStream::new(5);
        let err = DVector::from_vec(rng.normals(9));
        let a = adversarial_arm(&err, 2.0, &mut rng);
        assert!((a.norm() - 1.0).abs() < 1e-12);
        let cos = a.dot(&err) / err.norm();
        assert!((cos + 2.0 / 3.0 * (1.0 - 1e-9)).abs() < 1e-12);
    }
}
