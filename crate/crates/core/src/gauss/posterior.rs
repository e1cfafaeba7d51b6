use nalgebra::{DMatrix, DVector};

use super::matrix::{cholesky, cholesky_downdate, quad_form, symmetrize, PsdMatrix};
use crate::error::{LabError, Result};
use crate::rng::RandomStream;

/// Gaussian belief `N(mean, covariance)` maintained by LinTS.
///
/// Precision and covariance are both kept: the precision is what the
/// algorithm updates (and what the thinness gate inspects), the covariance and
/// its Cholesky factor are what sampling needs. Rank-one updates keep both in
/// O(d²) per round.
#[derive(Debug, Clone)]
pub struct PosteriorState {
    lambda: f64,
    precision: PsdMatrix,
    covariance: PsdMatrix,
    chol: DMatrix<f64>,
    info: DVector<f64>,
    mean: DVector<f64>,
    t: usize,
    updates_since_refactor: usize,
    clamped: bool,
}

impl PosteriorState {
    /// Prior `N(0, λI)` at round 1.
    pub fn init(d: usize, lambda: f64) -> Result<Self> {
        if d == 0 {
            return Err(LabError::InvalidParam("dimension must be >= 1".into()));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(LabError::InvalidParam(format!("lambda must be positive, got {lambda}")));
        }
        Ok(Self {
            lambda,
            precision: PsdMatrix::scaled_identity(d, 1.0 / lambda),
            covariance: PsdMatrix::scaled_identity(d, lambda),
            chol: DMatrix::identity(d, d) * lambda.sqrt(),
            info: DVector::zeros(d),
            mean: DVector::zeros(d),
            t: 1,
            updates_since_refactor: 0,
            clamped: false,
        })
    }

    /// Builds a state from an arbitrary precision matrix and information
    /// vector by direct inversion.
    pub fn from_precision(lambda: f64, precision: PsdMatrix, info: DVector<f64>, t: usize) -> Result<Self> {
        let d = precision.dim();
        if info.len() != d {
            return Err(LabError::DimensionMismatch {
                expected: d,
                actual: info.len(),
            });
        }
        let cov = invert_spd(precision.as_matrix())?;
        let covariance = PsdMatrix::symmetrized(cov);
        let chol = cholesky(covariance.as_matrix())?;
        let mean = covariance.as_matrix() * &info;
        Ok(Self {
            lambda,
            precision,
            covariance,
            chol: chol.factor,
            info,
            mean,
            t,
            updates_since_refactor: 0,
            clamped: chol.clamped_pivots > 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn precision(&self) -> &PsdMatrix {
        &self.precision
    }

    pub fn covariance(&self) -> &PsdMatrix {
        &self.covariance
    }

    /// Lower-triangular `L` with `L Lᵀ = covariance`.
    pub fn chol(&self) -> &DMatrix<f64> {
        &self.chol
    }

    pub fn info(&self) -> &DVector<f64> {
        &self.info
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Whether the most recent factorisation clamped a pivot.
    pub fn clamped(&self) -> bool {
        self.clamped
    }

    /// log det(covariance) from the Cholesky diagonal.
    pub fn log_det_covariance(&self) -> f64 {
        2.0 * self.chol.diagonal().iter().map(|l| l.ln()).sum::<f64>()
    }

    /// Posterior after observing reward `y` for arm `a` (unit assumed noise).
    ///
    /// Covariance follows Sherman–Morrison,
    /// `Σ' = Σ - (Σa)(Σa)ᵀ / (1 + aᵀΣa)`, and the Cholesky factor follows the
    /// matching rank-one downdate, refactorised from scratch every
    /// `max(32, d)` updates or whenever the downdate loses definiteness.
    pub fn update(&self, a: &DVector<f64>, y: f64) -> Result<Self> {
        let d = self.dim();
        if a.len() != d {
            return Err(LabError::DimensionMismatch {
                expected: d,
                actual: a.len(),
            });
        }
        let mut next = self.clone();
        next.t += 1;
        if a.iter().all(|x| *x == 0.0) {
            return Ok(next);
        }

        let v = self.covariance.as_matrix() * a;
        let denom = 1.0 + v.dot(a);

        let mut cov = self.covariance.as_matrix().clone();
        cov.ger(-1.0 / denom, &v, &v, 1.0);
        symmetrize(&mut cov);

        let mut precision = self.precision.as_matrix().clone();
        precision.ger(1.0, a, a, 1.0);
        symmetrize(&mut precision);

        next.info.axpy(y, a, 1.0);
        next.mean = &cov * &next.info;

        next.updates_since_refactor += 1;
        let refactor_every = d.max(32);
        let downdated =
            next.updates_since_refactor < refactor_every && cholesky_downdate(&mut next.chol, v / denom.sqrt());
        if downdated {
            next.clamped = false;
        } else {
            let c = cholesky(&cov)?;
            next.chol = c.factor;
            next.clamped = c.clamped_pivots > 0;
            next.updates_since_refactor = 0;
        }
        next.covariance = PsdMatrix::symmetrized(cov);
        next.precision = PsdMatrix::symmetrized(precision);
        Ok(next)
    }

    /// Draws `θ̃ = mean + ι·L·z` with `z` a vector of `d` standard normals
    /// taken from `rng` in index order.
    pub fn sample(&self, iota: f64, rng: &mut RandomStream) -> DVector<f64> {
        let z = rng.normals(self.dim());
        self.sample_with_normals(iota, &z)
    }

    /// Same as [`sample`](Self::sample) with the standard normals supplied.
    pub fn sample_with_normals(&self, iota: f64, z: &[f64]) -> DVector<f64> {
        assert_eq!(z.len(), self.dim(), "normal vector length must match dimension");
        let z = DVector::from_column_slice(z);
        let mut out = self.mean.clone();
        out.gemv(iota, &self.chol, &z, 1.0);
        out
    }

    /// `aᵀ Σ a`.
    pub fn variance_along(&self, a: &DVector<f64>) -> f64 {
        quad_form(a, self.covariance.as_matrix())
    }
}

/// Inverse of a symmetric positive definite matrix through nalgebra's LU
/// (kept independent of this module's Cholesky path).
pub(crate) fn invert_spd(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| LabError::InvalidParam("matrix is singular".into()))
}
