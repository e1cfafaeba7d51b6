//! Tail bounds for arms drawn uniformly from `[-1/√d, 1/√d]^d`.

use nalgebra::DVector;

use super::report::VerificationReport;
use crate::error::{LabError, Result};
use crate::gauss::PsdMatrix;
use crate::mc::{binomial_se, chunked, Moments};
use crate::rng::RandomStream;

fn cube_point(d: usize, half: f64, rng: &mut RandomStream, out: &mut [f64]) {
    for v in out.iter_mut().take(d) {
        *v = rng.uniform(-half, half);
    }
}

/// `P(⟨A, V⟩ > sqrt(2 log(1/p))) ≤ p`, tested for a random unit `V` and
/// for `𝟏/√d`.
pub fn mc_cube_tail(d: usize, p: f64, n: usize, rng: &mut RandomStream) -> Result<VerificationReport> {
    if d == 0 {
        return Err(LabError::InvalidParam("d must be positive".into()));
    }
    let random = DVector::from_vec(rng.unit_vector(d));
    let ones = DVector::from_element(d, 1.0 / (d as f64).sqrt());
    let mut report = mc_cube_tail_with(d, p, n, &[random, ones], rng)?;
    report.name = format!("tails/cube d={d} p={p}");
    Ok(report)
}

/// Cube tail check against caller-supplied unit directions. The estimate
/// is the largest exceedance frequency over the directions.
pub fn mc_cube_tail_with(
    d: usize,
    p: f64,
    n: usize,
    directions: &[DVector<f64>],
    rng: &mut RandomStream,
) -> Result<VerificationReport> {
    if !(p > 0.0 && p < 1.0) {
        return Err(LabError::InvalidParam(format!("p must lie in (0, 1), got {p}")));
    }
    if n == 0 || directions.is_empty() {
        return Err(LabError::EmptyInput);
    }
    for v in directions {
        if v.len() != d {
            return Err(LabError::DimensionMismatch {
                expected: d,
                actual: v.len(),
            });
        }
    }
    let threshold = (2.0 * (1.0 / p).ln()).sqrt();
    let half = 1.0 / (d as f64).sqrt();
    let seed = rng.next_u64();
    let counts = chunked(n, seed, |rng, len| {
        let mut a = vec![0.0; d];
        let mut hits = vec![0usize; directions.len()];
        for _ in 0..len {
            cube_point(d, half, rng, &mut a);
            for (h, v) in hits.iter_mut().zip(directions) {
                let dot: f64 = a.iter().zip(v.iter()).map(|(x, y)| x * y).sum();
                *h += usize::from(dot > threshold);
            }
        }
        hits
    });
    let mut totals = vec![0usize; directions.len()];
    for c in counts {
        totals.iter_mut().zip(c).for_each(|(t, h)| *t += h);
    }
    let worst = totals.iter().copied().max().unwrap_or(0) as f64 / n as f64;
    let se = binomial_se(p, n);
    Ok(VerificationReport {
        name: format!("tails/cube d={d} p={p}"),
        samples: n,
        estimate: worst,
        target: p,
        std_error: se,
        pass: worst <= p + 3.0 * se,
    })
}

/// Mean identity and, when applicable, the lower-tail ceiling.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadTailReport {
    /// Sample mean of `‖A‖²_Σ` against `‖Σ‖_*/(3d)`, within 3 SE.
    pub mean: VerificationReport,
    /// Frequency of `‖A‖²_Σ ≤ ‖Σ‖_*/(6d)` against 0.05; only for ψ ≤ 2
    /// and d ≥ 20.
    pub tail: Option<VerificationReport>,
}

pub fn mc_quad_lower_tail(sigma_m: &PsdMatrix, n: usize, rng: &mut RandomStream) -> Result<QuadTailReport> {
    if n < 2 {
        return Err(LabError::EmptyInput);
    }
    let d = sigma_m.dim();
    let (_, nuc) = sigma_m.norms();
    let psi = sigma_m.thinness().ok();
    let half = 1.0 / (d as f64).sqrt();
    let low = nuc / (6.0 * d as f64);
    let m = sigma_m.as_matrix();
    let seed = rng.next_u64();
    let parts = chunked(n, seed, |rng, len| {
        let mut a = vec![0.0; d];
        let mut moments = Moments::default();
        let mut below = 0usize;
        for _ in 0..len {
            cube_point(d, half, rng, &mut a);
            let mut q = 0.0;
            for j in 0..d {
                let col = m.column(j);
                let s: f64 = col.iter().zip(&a).map(|(x, y)| x * y).sum();
                q += a[j] * s;
            }
            moments.push(q);
            below += usize::from(q <= low);
        }
        (moments, below)
    });
    let below: usize = parts.iter().map(|p| p.1).sum();
    let moments: Moments = parts.into_iter().map(|p| p.0).collect();
    let target = nuc / (3.0 * d as f64);
    let mean = VerificationReport::within_se(
        format!("tails/quad-mean d={d}"),
        n,
        moments.mean(),
        target,
        moments.std_error(),
        3.0,
    );
    let tail = match psi {
        Some(psi) if psi <= 2.0 && d >= 20 => {
            let freq = below as f64 / n as f64;
            Some(VerificationReport {
                name: format!("tails/quad-lower d={d}"),
                samples: n,
                estimate: freq,
                target: 0.05,
                std_error: binomial_se(freq, n),
                pass: freq <= 0.05,
            })
        }
        _ => None,
    };
    Ok(QuadTailReport { mean, tail })
}
