//! Dense PSD linear algebra and the Gaussian posterior of LinTS.

mod matrix;
mod posterior;

pub use matrix::{cholesky, psd_norms, quad_norm, thinness, Cholesky, PsdMatrix, PIVOT_FLOOR};
pub use posterior::PosteriorState;
