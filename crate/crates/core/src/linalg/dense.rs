use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use super::check_finite;
use crate::{Error, Result};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries. Rejects NaN/Inf.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_row_major(rows, cols, data.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// The matrix `K` with `K[s][t] = min(s, t)` for 0-based `s, t`
    /// (first row and column zero, `K[n-1][n-1] = n - 1`).
    pub fn k_matrix(n: usize) -> Self {
        let mut k = Self::zeros(n, n);
        for s in 0..n {
            for t in 0..n {
                k[(s, t)] = Complex64::new(s.min(t) as f64, 0.0);
            }
        }
        k
    }

    pub fn diagonal_from(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let src = other.row(k);
                for (o, b) in out.row_mut(i).iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self * other^*` without materializing the adjoint.
    pub fn mul_adjoint(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut out = Self::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            let ri = self.row(i);
            for j in 0..other.rows {
                out[(i, j)] = super::dot(ri, other.row(j));
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `self^* x`.
    pub fn adjoint_mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: x.len(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for (i, xi) in x.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * xi;
            }
        }
        Ok(out)
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a * b))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        super::norm(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    #[test]
    fn hadamard_examples() {
        let x = DenseMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let mask = DenseMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let ones = DenseMatrix::from_real(2, 2, &[1.0; 4]).unwrap();
        assert_eq!(
            x.hadamard(&mask).unwrap(),
            DenseMatrix::from_real(2, 2, &[0.0, 2.0, 3.0, 0.0]).unwrap()
        );
        assert_eq!(x.hadamard(&ones).unwrap(), x);
        assert_eq!(x.hadamard(&DenseMatrix::zeros(2, 2)).unwrap(), DenseMatrix::zeros(2, 2));
        assert!(x.hadamard(&DenseMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn k_matrix_examples() {
        assert_eq!(DenseMatrix::k_matrix(1), DenseMatrix::zeros(1, 1));
        assert_eq!(
            DenseMatrix::k_matrix(2),
            DenseMatrix::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]).unwrap()
        );
        assert_eq!(
            DenseMatrix::k_matrix(3),
            DenseMatrix::from_real(3, 3, &[0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 2.0]).unwrap()
        );
    }

    #[test]
    fn rejects_non_finite_and_bad_length() {
        assert_eq!(
            DenseMatrix::from_real(1, 2, &[1.0, f64::NAN]),
            Err(Error::NonFinite(1))
        );
        assert!(DenseMatrix::from_real(2, 2, &[1.0]).is_err());
    }

    #[test]
    fn adjoint_products_agree() {
        let a = DenseMatrix::from_row_major(
            2,
            3,
            alloc::vec![c64(1.0, 1.0), c64(0.0, 2.0), c64(-1.0, 0.5), c64(3.0, 0.0), c64(0.5, -1.0), c64(2.0, 2.0)],
        )
        .unwrap();
        let direct = a.matmul(&a.adjoint()).unwrap();
        assert!(direct.max_abs_diff(&a.mul_adjoint(&a).unwrap()).unwrap() < 1e-14);
        let x = [c64(1.0, -1.0), c64(2.0, 0.5)];
        let lhs = a.adjoint_mul_vec(&x).unwrap();
        let rhs = a.adjoint().mul_vec(&x).unwrap();
        for (l, r) in lhs.iter().zip(&rhs) {
            assert!((l - r).norm() < 1e-14);
        }
    }
}
