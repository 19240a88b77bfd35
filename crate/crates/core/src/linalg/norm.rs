use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{c64, DenseMatrix, HermitianMatrix, DEFAULT_EIGEN_TOL};
use crate::{Error, Result};

const MAX_POWER_ITERATIONS: usize = 200_000;

impl DenseMatrix {
    /// Largest singular value, by power iteration on `M^* M`.
    ///
    /// Starts from the normalized all-ones vector; if that lies in the kernel
    /// of `M` a single retry is made from a fixed perturbed start.
    pub fn spectral_norm(&self, tol: f64) -> f64 {
        if self.rows() == 0 || self.cols() == 0 || self.max_abs() == 0.0 {
            return 0.0;
        }
        let n = self.cols();
        let ones = vec![c64(1.0, 0.0); n];
        match self.power_iteration(ones, tol) {
            Some(sigma) => sigma,
            None => {
                let perturbed = (0..n)
                    .map(|i| c64(1.0 + 0.5 * (1.0 + i as f64).sin(), 0.25 * (i as f64).cos()))
                    .collect();
                self.power_iteration(perturbed, tol).unwrap_or(0.0)
            }
        }
    }

    /// Returns `None` when the iterate collapses to zero.
    fn power_iteration(&self, mut v: Vec<Complex64>, tol: f64) -> Option<f64> {
        let mut len = super::norm(&v);
        let mut estimate = 0.0;
        for _ in 0..MAX_POWER_ITERATIONS {
            v.iter_mut().for_each(|x| *x /= len);
            let mv = self.mul_vec(&v).expect("matching dimension");
            let rayleigh = super::norm_sq(&mv);
            if rayleigh == 0.0 {
                return None;
            }
            let w = self.adjoint_mul_vec(&mv).expect("matching dimension");
            len = super::norm(&w);
            // ‖M*Mv − ρv‖ ≤ √tol·ρ keeps a stagnating quotient from passing
            // for convergence when the top singular values are close.
            let residual_sq: f64 = w.iter().zip(&v).map(|(wi, vi)| (wi - vi * rayleigh).norm_sqr()).sum();
            let converged = (rayleigh - estimate).abs() <= tol * rayleigh && residual_sq <= tol * rayleigh * rayleigh;
            estimate = rayleigh;
            if converged {
                break;
            }
            v = w;
        }
        Some(estimate.sqrt())
    }
}

/// Spectral quantities of a positive semi-definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    /// All eigenvalues, non-increasing.
    pub eigenvalues: Vec<f64>,
    pub lambda1: f64,
    /// Smallest eigenvalue counted in the numerical rank.
    pub lambda_r: f64,
    pub rank: usize,
    /// Essential condition number `λ1 / λr`.
    pub kappa_bar: f64,
    pub spectral_norm: f64,
}

impl HermitianMatrix {
    pub fn spectral_summary(&self, rank_tol: f64) -> Result<SpectralSummary> {
        if !(rank_tol > 0.0 && rank_tol < 1.0) {
            return Err(Error::InvalidArgument("rank tolerance must lie in (0, 1)".into()));
        }
        let eigenvalues = self.eigenvalues(DEFAULT_EIGEN_TOL)?;
        let lambda1 = eigenvalues[0];
        if lambda1 <= 0.0 {
            return Err(if eigenvalues.iter().all(|&v| v == 0.0) {
                Error::ZeroMatrix
            } else {
                Error::NotPsd(*eigenvalues.last().unwrap())
            });
        }
        let smallest = *eigenvalues.last().unwrap();
        if smallest < -rank_tol * lambda1 {
            return Err(Error::NotPsd(smallest));
        }
        let cutoff = rank_tol * lambda1;
        let rank = eigenvalues.iter().filter(|&&v| v > cutoff).count();
        let lambda_r = eigenvalues[rank - 1];
        Ok(SpectralSummary {
            lambda1,
            lambda_r,
            rank,
            kappa_bar: lambda1 / lambda_r,
            spectral_norm: lambda1.max(-smallest),
            eigenvalues,
        })
    }
}
