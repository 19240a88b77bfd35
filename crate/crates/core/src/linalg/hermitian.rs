use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{c64, DenseMatrix};
use crate::{Error, Permutation, Result};

/// Inputs whose relative Frobenius asymmetry exceeds this are rejected.
const HERMITIAN_TOL: f64 = 1e-8;
/// Diagonal entries within this distance of 1 count as unit.
const UNIT_DIAGONAL_TOL: f64 = 1e-12;

/// Dense Hermitian matrix `B = L + D + L^*`.
///
/// Construction symmetrizes the input to `(B + B^*)/2` with a real diagonal,
/// so `B[j][i] == conj(B[i][j])` holds exactly for every stored entry.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: DenseMatrix,
}

impl HermitianMatrix {
    pub fn new(m: DenseMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let n = m.rows();
        let scale = m.frobenius_norm();
        let mut asym = 0.0;
        for i in 0..n {
            for j in 0..n {
                asym += (m[(i, j)] - m[(j, i)].conj()).norm_sqr();
            }
        }
        let asym = asym.sqrt();
        if asym > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(asym / scale));
        }
        let mut inner = m;
        for i in 0..n {
            inner[(i, i)] = c64(inner[(i, i)].re, 0.0);
            for j in 0..i {
                let avg = (inner[(i, j)] + inner[(j, i)].conj()) * 0.5;
                inner[(i, j)] = avg;
                inner[(j, i)] = avg.conj();
            }
        }
        Ok(Self { inner })
    }

    pub fn from_real(n: usize, data: &[f64]) -> Result<Self> {
        Self::new(DenseMatrix::from_real(n, n, data)?)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: DenseMatrix::identity(n),
        }
    }

    /// `B = A A^*`, optionally after normalizing the rows of `A` to unit
    /// length. With normalization the diagonal is set to exactly one.
    pub fn from_factor(a: &DenseMatrix, normalize_rows: bool) -> Result<Self> {
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::Empty);
        }
        let normalized;
        let factor = if normalize_rows {
            normalized = a.normalized_rows()?;
            &normalized
        } else {
            a
        };
        let mut b = factor.mul_adjoint(factor)?;
        if normalize_rows {
            for i in 0..b.rows() {
                b[(i, i)] = c64(1.0, 0.0);
            }
        }
        Self::new(b)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.inner.rows()
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.inner
    }

    pub fn into_dense(self) -> DenseMatrix {
        self.inner
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Complex64] {
        self.inner.row(i)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.inner[(i, i)].re).collect()
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.inner.mul_vec(x)
    }

    /// First index whose diagonal entry differs from one, if any.
    pub fn first_non_unit_diagonal(&self) -> Option<usize> {
        (0..self.n()).find(|&i| (self.inner[(i, i)].re - 1.0).abs() > UNIT_DIAGONAL_TOL)
    }

    pub fn is_unit_diagonal(&self) -> bool {
        self.first_non_unit_diagonal().is_none()
    }

    /// `D^{-1/2} B D^{-1/2}` together with `diag(D)^{-1/2}`; a solution `ỹ`
    /// of the rescaled system maps back through `y = D^{-1/2} ỹ`.
    pub fn rescale_unit_diagonal(&self) -> Result<(Self, Vec<f64>)> {
        let n = self.n();
        let mut scaling = Vec::with_capacity(n);
        for (i, d) in self.diagonal().into_iter().enumerate() {
            if d <= 0.0 {
                return Err(Error::DiagonalNotPositive(i));
            }
            scaling.push(1.0 / d.sqrt());
        }
        let mut m = self.inner.clone();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] *= scaling[i] * scaling[j];
            }
            m[(i, i)] = c64(1.0, 0.0);
        }
        Ok((Self::new(m)?, scaling))
    }

    /// Strictly lower triangular part `L`.
    pub fn strict_lower(&self) -> DenseMatrix {
        let n = self.n();
        let mut l = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..i {
                l[(i, j)] = self.inner[(i, j)];
            }
        }
        l
    }

    /// Off-diagonal part `H = B - D = L + L^*`.
    pub fn off_diagonal(&self) -> DenseMatrix {
        let mut h = self.inner.clone();
        for i in 0..self.n() {
            h[(i, i)] = c64(0.0, 0.0);
        }
        h
    }

    /// `B_σ` with `B_σ[i][j] = B[σ(i)][σ(j)]`.
    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        let n = self.n();
        if sigma.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: sigma.len(),
            });
        }
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            let si = sigma.get(i);
            for j in 0..n {
                m[(i, j)] = self.inner[(si, sigma.get(j))];
            }
        }
        Ok(Self { inner: m })
    }

    /// Strictly lower part of `B_σ`, computed without forming `B_σ`.
    pub fn permuted_strict_lower(&self, sigma: &Permutation) -> Result<DenseMatrix> {
        let n = self.n();
        if sigma.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: sigma.len(),
            });
        }
        let mut l = DenseMatrix::zeros(n, n);
        for i in 0..n {
            let si = sigma.get(i);
            for j in 0..i {
                l[(i, j)] = self.inner[(si, sigma.get(j))];
            }
        }
        Ok(l)
    }

    /// Squared energy semi-norm `Re⟨By, y⟩`, clamped at zero.
    pub fn energy_seminorm_sq(&self, y: &[Complex64]) -> Result<f64> {
        let by = self.mul_vec(y)?;
        Ok(super::dot(&by, y).re.max(0.0))
    }
}

impl DenseMatrix {
    /// Copy of `self` with every row scaled to unit Euclidean length.
    pub fn normalized_rows(&self) -> Result<Self> {
        let mut out = self.clone();
        for i in 0..out.rows() {
            let len = super::norm(out.row(i));
            if len == 0.0 {
                return Err(Error::ZeroRow(i));
            }
            for v in out.row_mut(i) {
                *v /= len;
            }
        }
        Ok(out)
    }
}
