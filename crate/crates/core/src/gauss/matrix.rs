use nalgebra::{DMatrix, DVector};

use crate::error::{LabError, Result};

/// Absolute tolerance for the symmetry check.
const SYMMETRY_TOL: f64 = 1e-10;
/// Most negative eigenvalue still accepted as PSD.
const PSD_TOL: f64 = 1e-10;
/// Cholesky pivots below this value are clamped up to it.
pub const PIVOT_FLOOR: f64 = 1e-12;

/// A symmetric, numerically positive semi-definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdMatrix {
    inner: DMatrix<f64>,
}

impl PsdMatrix {
    /// Validates symmetry (absolute 1e-10) and PSD-ness (eigenvalues >= -1e-10).
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(LabError::DimensionMismatch {
                expected: m.nrows(),
                actual: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(LabError::InvalidParam("matrix dimension must be positive".into()));
        }
        check_symmetric(&m)?;
        let min_eig = m.symmetric_eigenvalues().min();
        if min_eig < -PSD_TOL {
            return Err(LabError::InvalidParam(format!(
                "matrix is not PSD (smallest eigenvalue {min_eig:e})"
            )));
        }
        Ok(Self { inner: m })
    }

    /// Averages `m` with its transpose and wraps it without the eigenvalue check.
    /// Only for matrices PSD by construction (posterior updates).
    pub(crate) fn symmetrized(mut m: DMatrix<f64>) -> Self {
        symmetrize(&mut m);
        Self { inner: m }
    }

    pub fn identity(d: usize) -> Self {
        Self::scaled_identity(d, 1.0)
    }

    pub fn scaled_identity(d: usize, scale: f64) -> Self {
        Self {
            inner: DMatrix::identity(d, d) * scale,
        }
    }

    /// Diagonal matrix; negative entries are rejected.
    pub fn diag(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(LabError::InvalidParam("matrix dimension must be positive".into()));
        }
        if let Some(v) = values.iter().find(|v| **v < 0.0 || !v.is_finite()) {
            return Err(LabError::InvalidParam(format!("diagonal entry {v} is not PSD")));
        }
        Ok(Self {
            inner: DMatrix::from_diagonal(&DVector::from_column_slice(values)),
        })
    }

    /// Row-major construction.
    pub fn from_rows(d: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != d * d {
            return Err(LabError::DimensionMismatch {
                expected: d * d,
                actual: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(d, d, entries))
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.inner
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { inner: &self.inner * c }
    }

    pub fn cholesky(&self) -> Result<Cholesky> {
        cholesky(&self.inner)
    }

    pub fn norms(&self) -> (f64, f64) {
        psd_norms(self)
    }

    pub fn thinness(&self) -> Result<f64> {
        thinness(self)
    }

    /// log det via the Cholesky factor.
    pub fn log_det(&self) -> Result<f64> {
        Ok(self.cholesky()?.log_det())
    }
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    let d = m.nrows();
    for i in 0..d {
        for j in (i + 1)..d {
            let diff = (m[(i, j)] - m[(j, i)]).abs();
            if diff > SYMMETRY_TOL || diff.is_nan() {
                return Err(LabError::NonSymmetric { row: i, col: j, diff });
            }
        }
    }
    Ok(())
}

pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let d = m.nrows();
    for i in 0..d {
        for j in (i + 1)..d {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}

/// Lower-triangular Cholesky factor, plus the number of pivots that had to be
/// clamped to [`PIVOT_FLOOR`].
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    pub factor: DMatrix<f64>,
    pub clamped_pivots: usize,
}

impl Cholesky {
    pub fn log_det(&self) -> f64 {
        2.0 * self.factor.diagonal().iter().map(|l| l.ln()).sum::<f64>()
    }

    pub fn clamped(&self) -> bool {
        self.clamped_pivots > 0
    }
}

/// Cholesky–Banachiewicz factorisation `m = L Lᵀ`.
///
/// Pivots that fall below 1e-12 (near-singular or rounding-negative) are
/// clamped to 1e-12 and counted.
pub fn cholesky(m: &DMatrix<f64>) -> Result<Cholesky> {
    if !m.is_square() {
        return Err(LabError::DimensionMismatch {
            expected: m.nrows(),
            actual: m.ncols(),
        });
    }
    check_symmetric(m)?;
    let d = m.nrows();
    let mut l = DMatrix::<f64>::zeros(d, d);
    let mut clamped = 0;
    for j in 0..d {
        let mut pivot = m[(j, j)];
        for k in 0..j {
            pivot -= l[(j, k)] * l[(j, k)];
        }
        if !(pivot >= PIVOT_FLOOR) {
            pivot = PIVOT_FLOOR;
            clamped += 1;
        }
        let ljj = pivot.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..d {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(Cholesky {
        factor: l,
        clamped_pivots: clamped,
    })
}

/// In-place rank-one downdate: turns `L` with `LLᵀ = M` into the factor of
/// `M - w wᵀ`. Returns `false` (leaving `l` partially modified) when the
/// downdated matrix is not safely positive definite.
pub(crate) fn cholesky_downdate(l: &mut DMatrix<f64>, mut w: DVector<f64>) -> bool {
    let d = l.nrows();
    for k in 0..d {
        let lkk = l[(k, k)];
        let r2 = lkk * lkk - w[k] * w[k];
        if !(r2 > 1e-10 * lkk * lkk) || !(r2 >= PIVOT_FLOOR) {
            return false;
        }
        let r = r2.sqrt();
        let c = r / lkk;
        let s = w[k] / lkk;
        l[(k, k)] = r;
        for i in (k + 1)..d {
            let lik = (l[(i, k)] - s * w[i]) / c;
            l[(i, k)] = lik;
            w[i] = c * w[i] - s * lik;
        }
    }
    true
}

/// `(operator norm, nuclear norm)` of a PSD matrix: the largest eigenvalue
/// from a symmetric eigensolve, and the trace.
pub fn psd_norms(m: &PsdMatrix) -> (f64, f64) {
    let eig = m.inner.symmetric_eigenvalues();
    (eig.max(), m.inner.trace())
}

/// Thinness coefficient `sqrt(d · ‖M‖_op / ‖M‖_*)`, in `[1, √d]`.
pub fn thinness(m: &PsdMatrix) -> Result<f64> {
    let (op, nuc) = psd_norms(m);
    if nuc <= 1e-300 {
        return Err(LabError::ZeroMatrix);
    }
    let d = m.dim() as f64;
    Ok((d * op / nuc).sqrt().clamp(1.0, d.sqrt()))
}

/// `sqrt(aᵀ M a)`.
pub fn quad_norm(a: &DVector<f64>, m: &PsdMatrix) -> Result<f64> {
    if a.len() != m.dim() {
        return Err(LabError::DimensionMismatch {
            expected: m.dim(),
            actual: a.len(),
        });
    }
    Ok(quad_form(a, &m.inner).max(0.0).sqrt())
}

pub(crate) fn quad_form(a: &DVector<f64>, m: &DMatrix<f64>) -> f64 {
    (m * a).dot(a)
}
