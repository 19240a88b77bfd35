//! Cyclic Jacobi eigensolver for dense Hermitian matrices.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{c64, DenseMatrix, HermitianMatrix};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `B = V Λ V^*` with eigenvalues sorted descending and
/// the matching eigenvectors stored as the columns of `vectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `V Λ V^*`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for i in 0..n {
            for (k, v) in scaled.row_mut(i).iter_mut().enumerate() {
                *v *= self.values[k];
            }
        }
        scaled.mul_adjoint(&self.vectors).expect("square factors")
    }
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

impl HermitianMatrix {
    /// Eigenvalues (descending) and orthonormal eigenvectors.
    ///
    /// Sweeps stop once the off-diagonal Frobenius norm drops to
    /// `tol * ‖B‖_F`; more than 100 sweeps is reported as non-convergence.
    pub fn eigen(&self, tol: f64) -> Result<Eigen> {
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument("eigensolver tolerance must be positive".into()));
        }
        let n = self.n();
        let mut a = self.as_dense().clone();
        let mut v = DenseMatrix::identity(n);
        let threshold = tol * a.frobenius_norm();

        let mut converged = off_diagonal_norm(&a) <= threshold;
        let mut sweeps = 0;
        while !converged {
            if sweeps == MAX_SWEEPS {
                return Err(Error::NoConvergence);
            }
            sweeps += 1;
            for p in 0..n {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
            converged = off_diagonal_norm(&a) <= threshold;
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
        let values = order.iter().map(|&i| a[(i, i)].re).collect();
        let mut vectors = DenseMatrix::zeros(n, n);
        for (k, &src) in order.iter().enumerate() {
            for i in 0..n {
                vectors[(i, k)] = v[(i, src)];
            }
        }
        Ok(Eigen { values, vectors })
    }

    pub fn eigenvalues(&self, tol: f64) -> Result<Vec<f64>> {
        Ok(self.eigen(tol)?.values)
    }
}

/// Annihilates `a[p][q]` with the unitary `U = diag(1, e^{-iφ}) R(θ)` acting
/// on coordinates `p, q`, where `φ = arg a[p][q]`.
fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Skip rotations that cannot change the diagonal in floating point.
    if g < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = c64(0.0, 0.0);
        a[(q, p)] = c64(0.0, 0.0);
        return;
    }
    let phase = apq / g;
    let theta = (aqq - app) / (2.0 * g);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] in the (p, q) plane.
    let u_pp = c64(c, 0.0);
    let u_pq = c64(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = c64(0.0, 0.0);
    a[(q, p)] = c64(0.0, 0.0);
    a[(p, p)] = c64(app - t * g, 0.0);
    a[(q, q)] = c64(aqq + t * g, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_EIGEN_TOL;
    use alloc::vec;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn diagonal_and_rank_one() {
        let d = HermitianMatrix::from_real(2, &[1.0, 0.0, 0.0, 3.0]).unwrap();
        assert_close(&d.eigenvalues(DEFAULT_EIGEN_TOL).unwrap(), &[3.0, 1.0], 0.0);
        let ones = HermitianMatrix::from_real(2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_close(&ones.eigenvalues(DEFAULT_EIGEN_TOL).unwrap(), &[2.0, 0.0], 1e-15);
    }

    #[test]
    fn complex_reconstruction_and_unitarity() {
        let m = DenseMatrix::from_row_major(
            3,
            3,
            vec![
                c64(2.0, 0.0), c64(1.0, 1.0), c64(0.0, -0.5),
                c64(1.0, -1.0), c64(3.0, 0.0), c64(0.25, 0.0),
                c64(0.0, 0.5), c64(0.25, 0.0), c64(-1.0, 0.0),
            ],
        )
        .unwrap();
        let b = HermitianMatrix::new(m).unwrap();
        let e = b.eigen(DEFAULT_EIGEN_TOL).unwrap();
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        let err = e.reconstruct().sub(b.as_dense()).unwrap().frobenius_norm();
        assert!(err <= 1e-12 * b.as_dense().frobenius_norm());
        let gram = e.vectors.adjoint().matmul(&e.vectors).unwrap();
        assert!(gram.max_abs_diff(&DenseMatrix::identity(3)).unwrap() < 1e-13);
    }

    #[test]
    fn rejects_non_positive_tolerance() {
        assert!(HermitianMatrix::identity(2).eigen(0.0).is_err());
    }
}
