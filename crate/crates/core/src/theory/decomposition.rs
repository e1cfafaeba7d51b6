//! `E[X_i·g(Y, Z)] = (σ_i²/Σσ²)·E[Y·g(Y, Z)]` with `Y = Σ X_i`.
//!
//! Both sides are estimated on one common sample. The `X` columns are
//! moment-matched first: centred, then Gram-Schmidt orthogonalised under
//! the empirical inner product and rescaled to empirical variance `σ_i²`.
//! Under that normalisation the linear shape gives identical sides up to
//! rounding.

use serde::{Deserialize, Serialize};

use super::report::VerificationReport;
use crate::error::{LabError, Result};
use crate::mc::{chunked, Moments};
use crate::rng::RandomStream;

/// Test functions `g(y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GShape {
    One,
    Linear,
    PositivePartIndicator,
}

impl GShape {
    pub const ALL: [GShape; 3] = [GShape::One, GShape::Linear, GShape::PositivePartIndicator];

    pub fn eval(self, y: f64, _z: f64) -> f64 {
        match self {
            GShape::One => 1.0,
            GShape::Linear => y,
            GShape::PositivePartIndicator => f64::from(y > 0.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GShape::One => "one",
            GShape::Linear => "linear",
            GShape::PositivePartIndicator => "positive_part_indicator",
        }
    }

    /// Exact value of `E[X_i·g]`.
    pub fn exact(self, sigmas: &[f64], i: usize) -> f64 {
        let total: f64 = sigmas.iter().map(|s| s * s).sum();
        let s2 = sigmas[i] * sigmas[i];
        match self {
            GShape::One => 0.0,
            GShape::Linear => s2,
            GShape::PositivePartIndicator => s2 / (2.0 * std::f64::consts::PI * total).sqrt(),
        }
    }
}

/// Per-coordinate estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinateCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// Standard error of the paired difference `lhs - rhs`.
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub shape: GShape,
    pub coordinates: Vec<CoordinateCheck>,
    pub report: VerificationReport,
}

/// Runs the identity check for one shape. Passes iff every coordinate has
/// `|lhs - rhs| ≤ 4·se`; the linear shape must in addition agree to 1e-10.
pub fn mc_bias_decomposition(
    sigmas: &[f64],
    shape: GShape,
    n: usize,
    rng: &mut RandomStream,
) -> Result<DecompositionReport> {
    if sigmas.is_empty() || n < 2 {
        return Err(LabError::EmptyInput);
    }
    if sigmas.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(LabError::InvalidParam("sigmas must be positive and finite".into()));
    }
    let k = sigmas.len();
    let seed = rng.next_u64();
    let blocks = chunked(n, seed, |rng, len| {
        let mut x = vec![Vec::with_capacity(len); k];
        let mut z = Vec::with_capacity(len);
        for _ in 0..len {
            for (col, s) in x.iter_mut().zip(sigmas) {
                col.push(s * rng.standard_normal());
            }
            z.push(rng.standard_normal());
        }
        (x, z)
    });
    let mut cols: Vec<Vec<f64>> = vec![Vec::with_capacity(n); k];
    let mut z = Vec::with_capacity(n);
    for (bx, bz) in blocks {
        for (c, b) in cols.iter_mut().zip(bx) {
            c.extend(b);
        }
        z.extend(bz);
    }
    moment_match(&mut cols, sigmas)?;

    let total: f64 = sigmas.iter().map(|s| s * s).sum();
    let mut lhs = vec![Moments::default(); k];
    let mut rhs = vec![0.0; k];
    let mut diff = vec![Moments::default(); k];
    let mut yg_sum = 0.0;
    for j in 0..n {
        let y: f64 = cols.iter().map(|c| c[j]).sum();
        let g = shape.eval(y, z[j]);
        yg_sum += y * g;
        for i in 0..k {
            let xi = cols[i][j] * g;
            let w = sigmas[i] * sigmas[i] / total;
            lhs[i].push(xi);
            diff[i].push(xi - w * y * g);
        }
    }
    let yg = yg_sum / n as f64;
    for i in 0..k {
        rhs[i] = sigmas[i] * sigmas[i] / total * yg;
    }
    let coordinates: Vec<CoordinateCheck> = (0..k)
        .map(|i| CoordinateCheck {
            lhs: lhs[i].mean(),
            rhs: rhs[i],
            std_error: diff[i].std_error(),
        })
        .collect();
    let pass = coordinates.iter().all(|c| {
        let gap = (c.lhs - c.rhs).abs();
        gap <= 4.0 * c.std_error + 1e-12 && (shape != GShape::Linear || gap <= 1e-10)
    });
    let worst = coordinates.iter().map(|c| (c.lhs - c.rhs).abs()).fold(0.0, f64::max);
    let se = coordinates.iter().map(|c| c.std_error).fold(0.0, f64::max);
    Ok(DecompositionReport {
        shape,
        report: VerificationReport {
            name: format!("decomp/{}", shape.name()),
            samples: n,
            estimate: worst,
            target: 0.0,
            std_error: se,
            pass,
        },
        coordinates,
    })
}

/// Centres each column, orthogonalises against the previous ones under
/// `⟨u, v⟩ = (1/n)Σ u_j v_j` and rescales to mean square `σ_i²`.
fn moment_match(cols: &mut [Vec<f64>], sigmas: &[f64]) -> Result<()> {
    let n = cols[0].len() as f64;
    for (i, sigma) in sigmas.iter().enumerate() {
        let (done, rest) = cols.split_at_mut(i);
        let c = &mut rest[0];
        let mean = c.iter().sum::<f64>() / n;
        c.iter_mut().for_each(|v| *v -= mean);
        for prev in done.iter() {
            let pp: f64 = prev.iter().map(|v| v * v).sum();
            let cp: f64 = prev.iter().zip(c.iter()).map(|(p, v)| p * v).sum();
            let f = cp / pp;
            c.iter_mut().zip(prev).for_each(|(v, p)| *v -= f * p);
        }
        let ms = c.iter().map(|v| v * v).sum::<f64>() / n;
        if !(ms > 0.0) {
            return Err(LabError::InvalidParam("degenerate sample column".into()));
        }
        let scale = sigma / ms.sqrt();
        c.iter_mut().for_each(|v| *v *= scale);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_is_exact() {
        let r = mc_bias_decomposition(&[1.0, 2.0, 0.5], GShape::Linear, 50_000, &mut RandomStream::new(1)).unwrap();
        for (i, c) in r.coordinates.iter().enumerate() {
            assert!((c.lhs - c.rhs).abs() < 1e-10);
            assert!((c.lhs - GShape::Linear.exact(&[1.0, 2.0, 0.5], i)).abs() < 1e-10);
        }
        assert!(r.report.pass);
    }

    #[test]
    fn constant_shape_is_zero() {
        let r = mc_bias_decomposition(&[1.0, 2.0], GShape::One, 20_000, &mut RandomStream::new(2)).unwrap();
        for c in &r.coordinates {
            assert!(c.lhs.abs() < 1e-12 && c.rhs.abs() < 1e-12);
        }
        assert!(r.report.pass);
    }

    #[test]
    fn indicator_matches_closed_form() {
        let sigmas = [1.0, 2.0];
        let r = mc_bias_decomposition(
            &sigmas,
            GShape::PositivePartIndicator,
            200_000,
            &mut RandomStream::new(3),
        )
        .unwrap();
        assert!(r.report.pass, "{:?}", r);
        let exact0 = 1.0 / (2.0 * std::f64::consts::PI * 5.0).sqrt();
        assert!((GShape::PositivePartIndicator.exact(&sigmas, 0) - exact0).abs() < 1e-15);
        for (i, c) in r.coordinates.iter().enumerate() {
            let ex = GShape::PositivePartIndicator.exact(&sigmas, i);
            assert!((c.rhs - ex).abs() < 0.01, "{} vs {}", c.rhs, ex);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let mut rng = RandomStream::new(4);
        assert!(mc_bias_decomposition(&[], GShape::One, 10, &mut rng).is_err());
        assert!(mc_bias_decomposition(&[1.0, -1.0], GShape::One, 10, &mut rng).is_err());
    }
}
