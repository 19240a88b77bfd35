//! Dense complex linear algebra.
//!
//! Matrices are stored row-major as [`Complex64`]. Real problems are the
//! special case with zero imaginary parts.

mod dense;
mod eigen;
mod hermitian;
mod norm;

pub use dense::DenseMatrix;
pub use eigen::Eigen;
pub use hermitian::HermitianMatrix;
pub use norm::SpectralSummary;

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Off-diagonal threshold of the Jacobi eigensolver, relative to `‖B‖_F`.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;
/// Relative accuracy of the power iteration in [`DenseMatrix::spectral_norm`].
pub const DEFAULT_NORM_TOL: f64 = 1e-13;
/// Eigenvalues at or below `DEFAULT_RANK_TOL * λ1` count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Shorthand constructor for a complex scalar.
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `⟨x, y⟩ = Σ x_i conj(y_i)`.
pub fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sq(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum()
}

pub fn norm(x: &[Complex64]) -> f64 {
    norm_sq(x).sqrt()
}

pub fn sub(x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn real_vector(values: &[f64]) -> Vec<Complex64> {
    values.iter().map(|&v| c64(v, 0.0)).collect()
}

pub(crate) fn check_finite(values: &[Complex64]) -> crate::Result<()> {
    match values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
        Some(i) => Err(crate::Error::NonFinite(i)),
        None => Ok(()),
    }
}
