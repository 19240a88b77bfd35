//! Worst-case expected contraction of the energy error over one shuffled
//! sweep: `max_e E_σ[‖Q_σ e‖²_B] / ‖e‖²_B` over `e ∈ Ran(B)`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::MAX_ENUMERATION_N;
use crate::linalg::{DenseMatrix, HermitianMatrix, DEFAULT_EIGEN_TOL, DEFAULT_RANK_TOL};
use crate::solver::error_iteration_matrix;
use crate::{Error, Permutation, Result, RngState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AveragingMode {
    /// Average over all `n!` orderings (`n ≤ 8`).
    Exact,
    /// Average over `trials` uniform orderings drawn from `seed`.
    Sampled { trials: usize, seed: u64 },
}

fn accumulate(acc: &mut DenseMatrix, b: &HermitianMatrix, omega: f64, sigma: &Permutation) -> Result<()> {
    let q = error_iteration_matrix(b, omega, sigma)?;
    let bq = b.as_dense().matmul(&q)?;
    let qbq = q.adjoint().matmul(&bq)?;
    *acc = acc.add(&qbq)?;
    Ok(())
}

/// Largest eigenvalue of `E[Q_σ^* B Q_σ]` relative to `B` on `Ran(B)`.
pub fn expected_contraction(b: &HermitianMatrix, omega: f64, mode: AveragingMode) -> Result<f64> {
    let n = b.n();
    let mut acc = DenseMatrix::zeros(n, n);
    let count = match mode {
        AveragingMode::Exact => {
            if n > MAX_ENUMERATION_N {
                return Err(Error::TooLarge {
                    n,
                    limit: MAX_ENUMERATION_N,
                    hint: "use sampled averaging",
                });
            }
            let mut count = 0usize;
            for sigma in Permutation::all(n) {
                accumulate(&mut acc, b, omega, &sigma)?;
                count += 1;
            }
            count
        }
        AveragingMode::Sampled { trials, seed } => {
            if trials == 0 {
                return Err(Error::InvalidArgument("trials must be at least 1".into()));
            }
            let mut rng = RngState::new(seed);
            for _ in 0..trials {
                accumulate(&mut acc, b, omega, &rng.permutation(n))?;
            }
            trials
        }
    };
    let mean = acc.scale(1.0 / count as f64);

    let eig = b.eigen(DEFAULT_EIGEN_TOL)?;
    let lambda1 = eig.values[0];
    if lambda1 <= 0.0 {
        return Err(if eig.values.iter().all(|&v| v == 0.0) {
            Error::ZeroMatrix
        } else {
            Error::NotPsd(lambda1)
        });
    }
    let basis: Vec<(f64, Vec<Complex64>)> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > DEFAULT_RANK_TOL * lambda1)
        .map(|(k, &v)| (v, eig.vector(k)))
        .collect();
    let r = basis.len();

    // W = Λ^{-1/2} V_r^* M V_r Λ^{-1/2}
    let mut w = DenseMatrix::zeros(r, r);
    for (j, (lj, vj)) in basis.iter().enumerate() {
        let mv = mean.mul_vec(vj)?;
        for (i, (li, vi)) in basis.iter().enumerate() {
            let entry: Complex64 = vi.iter().zip(&mv).map(|(a, m)| a.conj() * m).sum();
            w[(i, j)] = entry / (li * lj).sqrt();
        }
    }
    // Hermitian by construction; averaging removes rounding asymmetry, which
    // dominates when the contraction is zero.
    let w = HermitianMatrix::new(w.add(&w.adjoint())?.scale(0.5))?;
    let top = w.eigenvalues(DEFAULT_EIGEN_TOL)?[0];
    Ok(top.max(0.0))
}
