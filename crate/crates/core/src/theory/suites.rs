//! Named bundles of verification checks, as run by `lints-lab verify`.

use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::decomposition::{mc_bias_decomposition, GShape};
use super::optimism::mc_optimism_rate;
use super::params::TheoryParams;
use super::report::VerificationReport;
use super::tails::{mc_cube_tail, mc_quad_lower_tail};
use crate::counterexamples::{bias_closed_form, selection_beta, simulate_bias_block};
use crate::error::{LabError, Result};
use crate::gauss::PsdMatrix;
use crate::mc::{chunked, Moments};
use crate::rng::{split_seed, RandomStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Bias,
    Decomp,
    Tails,
    Optimism,
}

impl FromStr for Suite {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "bias" => Ok(Suite::Bias),
            "decomp" => Ok(Suite::Decomp),
            "tails" => Ok(Suite::Tails),
            "optimism" => Ok(Suite::Optimism),
            other => Err(LabError::InvalidParam(format!("unknown suite `{other}`"))),
        }
    }
}

/// Sample sizes of the full-size suites.
pub const BIAS_BLOCKS: usize = 1_000_000;
pub const BETA_PAIRS: usize = 10_000_000;
pub const DECOMP_SAMPLES: usize = 1_000_000;
pub const TAIL_SAMPLES: usize = 1_000_000;
pub const OPTIMISM_SCENARIOS: usize = 10_000;

/// `(σ, τ)` settings of the bias block check.
pub const BIAS_SETTINGS: [(f64, f64); 3] = [(1.0, 0.0), (0.0, 1.0), (2.0, 1.0)];
pub const DECOMP_SIGMAS: [f64; 3] = [1.0, 2.0, 0.5];
pub const MGF_POINTS: [f64; 4] = [-0.5, -0.1, 0.1, 0.5];

/// Parameters used by the optimism suite.
pub fn default_theory_params() -> TheoryParams {
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

/// Full-size suite.
pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<VerificationReport>> {
    run_suite_scaled(suite, seed, 1.0)
}

/// Suite with every sample count multiplied by `scale`.
pub fn run_suite_scaled(suite: Suite, seed: u64, scale: f64) -> Result<Vec<VerificationReport>> {
    if !(scale > 0.0) {
        return Err(LabError::InvalidParam(format!("scale must be positive, got {scale}")));
    }
    let n = |base: usize| ((base as f64 * scale).round() as usize).max(1_000);
    let mut out = Vec::new();
    // every check draws from its own stream, keyed by its slot below
    let stream = |slot: u64| RandomStream::new(split_seed(seed, slot));
    let wants = |s: Suite| suite == Suite::All || suite == s;

    if wants(Suite::Bias) {
        for (k, &(sigma, tau)) in BIAS_SETTINGS.iter().enumerate() {
            out.extend(bias_block_checks(sigma, tau, n(BIAS_BLOCKS), &mut stream(k as u64))?);
        }
        out.push(beta_check(n(BETA_PAIRS), &mut stream(10))?);
    }
    if wants(Suite::Bias) || wants(Suite::Decomp) {
        for (k, shape) in GShape::ALL.into_iter().enumerate() {
            let r = mc_bias_decomposition(&DECOMP_SIGMAS, shape, n(DECOMP_SAMPLES), &mut stream(20 + k as u64))?;
            out.push(r.report);
        }
    }
    if wants(Suite::Tails) {
        for (k, &(d, p)) in [(16usize, 0.1), (64, 0.01)].iter().enumerate() {
            out.push(mc_cube_tail(d, p, n(TAIL_SAMPLES), &mut stream(30 + k as u64))?);
        }
        for (k, &d) in [16usize, 36].iter().enumerate() {
            let mut rng = stream(40 + k as u64);
            let random = random_psd(d, &mut rng);
            for (tag, m) in [("identity", PsdMatrix::identity(d)), ("random", random)] {
                let r = mc_quad_lower_tail(&m, n(TAIL_SAMPLES), &mut rng)?;
                let mut mean = r.mean;
                mean.name = format!("{} {tag}", mean.name);
                out.push(mean);
                if let Some(mut tail) = r.tail {
                    tail.name = format!("{} {tag}", tail.name);
                    out.push(tail);
                }
            }
        }
    }
    if wants(Suite::Optimism) {
        let params = default_theory_params();
        for (k, &d) in [5usize, 20].iter().enumerate() {
            let scenarios = ((OPTIMISM_SCENARIOS as f64 * scale).round() as usize).max(100);
            out.push(mc_optimism_rate(d, &params, scenarios, &mut stream(50 + k as u64))?);
        }
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

/// `G Gᵀ / (2d)` with `G` a `d × 2d` standard normal matrix.
pub fn random_psd(d: usize, rng: &mut RandomStream) -> PsdMatrix {
    let g = DMatrix::from_vec(d, 2 * d, rng.normals(2 * d * d));
    PsdMatrix::symmetrized(&g * g.transpose() / (2 * d) as f64)
}

/// Block mean against the closed form, plus the sub-gaussian MGF envelope
/// `E exp(s(X - EX)) ≤ exp(s²(4σ + 4τ + 2)²/2)` with 10% slack.
pub fn bias_block_checks(
    sigma: f64,
    tau: f64,
    blocks: usize,
    rng: &mut RandomStream,
) -> Result<Vec<VerificationReport>> {
    let seed = rng.next_u64();
    let parts = chunked(blocks, seed, |rng, len| {
        (0..len)
            .map(|_| simulate_bias_block(sigma, tau, rng).map(|b| b.v_projection()))
            .collect::<Result<Vec<f64>>>()
    });
    let mut values = Vec::with_capacity(blocks);
    for p in parts {
        values.extend(p?);
    }
    let moments: Moments = values.iter().fold(Moments::default(), |mut m, &v| {
        m.push(v);
        m
    });
    let target = bias_closed_form(sigma, tau);
    let mut out = vec![VerificationReport::within_se(
        format!("bias/block sigma={sigma} tau={tau}"),
        blocks,
        moments.mean(),
        target,
        moments.std_error(),
        3.0,
    )];
    let mean = moments.mean();
    let width = 4.0 * sigma + 4.0 * tau + 2.0;
    for s in MGF_POINTS {
        let mgf = values.iter().map(|v| (s * (v - mean)).exp()).sum::<f64>() / blocks as f64;
        let bound = (s * s * width * width / 2.0).exp();
        out.push(VerificationReport {
            name: format!("bias/mgf sigma={sigma} tau={tau} s={s}"),
            samples: blocks,
            estimate: mgf,
            target: bound,
            std_error: 0.0,
            pass: mgf <= 1.1 * bound,
        });
    }
    Ok(out)
}

/// `E[max(A, B)]` over `pairs` draws against `1/√π`, tolerance 5e-4.
pub fn beta_check(pairs: usize, rng: &mut RandomStream) -> Result<VerificationReport> {
    let seed = rng.next_u64();
    let moments: Moments = chunked(pairs, seed, |rng, len| {
        let mut m = Moments::default();
        for _ in 0..len {
            m.push(rng.standard_normal().max(rng.standard_normal()));
        }
        m
    })
    .into_iter()
    .collect();
    Ok(VerificationReport::within_tol(
        "bias/beta",
        pairs,
        moments.mean(),
        selection_beta(),
        moments.std_error(),
        5e-4,
    ))
}
