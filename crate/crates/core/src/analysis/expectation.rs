//! The permutation average `E[LL^*] = (1/n!) Σ_σ P_σ^* L_σ L_σ^* P_σ`.
//!
//! Entry `(s, t)` of `P_σ^* L_σ L_σ^* P_σ` sums `H_{sl} H_{lt}` over the
//! indices `l` that `σ` places before both `s` and `t`. Under a uniform
//! ordering that happens with probability 1/2 when `s = t` and 1/3
//! otherwise, which gives the closed form `H²/3 + diag(H²)/6`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::MAX_ENUMERATION_N;
use crate::linalg::{c64, DenseMatrix, HermitianMatrix, DEFAULT_EIGEN_TOL};
use crate::permutation::factorial;
use crate::{Error, Permutation, Result, RngState};

/// `P_σ^* L_σ L_σ^* P_σ`: the Gram matrix of the permuted strict lower
/// part, mapped back to the original indexing.
pub fn conjugated_llt(b: &HermitianMatrix, sigma: &Permutation) -> Result<DenseMatrix> {
    let l = b.permuted_strict_lower(sigma)?;
    let gram = l.mul_adjoint(&l)?;
    let n = b.n();
    let mut out = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(sigma.get(i), sigma.get(j))] = gram[(i, j)];
        }
    }
    Ok(out)
}

/// Sample mean of `P_σ^* L_σ L_σ^* P_σ` with entrywise standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct LltEstimate {
    pub mean: DenseMatrix,
    /// Row-major standard error of each entry of `mean` (zero for a single
    /// sample or an exhaustive average).
    pub std_error: Vec<f64>,
    pub samples: usize,
}

impl LltEstimate {
    pub fn std_error_at(&self, i: usize, j: usize) -> f64 {
        self.std_error[i * self.mean.cols() + j]
    }
}

/// Averages `P_σ^* L_σ L_σ^* P_σ` over the given permutations (Welford).
pub fn llt_over<I>(b: &HermitianMatrix, perms: I) -> Result<LltEstimate>
where
    I: IntoIterator<Item = Permutation>,
{
    let n = b.n();
    let mut mean = vec![c64(0.0, 0.0); n * n];
    let mut m2 = vec![0.0; n * n];
    let mut count = 0usize;
    for sigma in perms {
        let term = conjugated_llt(b, &sigma)?;
        count += 1;
        let k = count as f64;
        for ((mu, acc), x) in mean.iter_mut().zip(m2.iter_mut()).zip(term.as_slice()) {
            let before = *x - *mu;
            *mu += before / k;
            *acc += (before * (*x - *mu).conj()).re;
        }
    }
    if count == 0 {
        return Err(Error::InvalidArgument("at least one permutation is required".into()));
    }
    let std_error = if count > 1 {
        let k = count as f64;
        m2.iter().map(|&s| (s.max(0.0) / (k - 1.0)).sqrt() / k.sqrt()).collect()
    } else {
        vec![0.0; n * n]
    };
    Ok(LltEstimate {
        mean: DenseMatrix::from_row_major(n, n, mean)?,
        std_error,
        samples: count,
    })
}

/// Exact `E[LL^*]` by summing over all `n!` orderings (`n ≤ 8`).
pub fn expected_llt_bruteforce(b: &HermitianMatrix) -> Result<DenseMatrix> {
    let n = b.n();
    if n > MAX_ENUMERATION_N {
        return Err(Error::TooLarge {
            n,
            limit: MAX_ENUMERATION_N,
            hint: "use montecarlo",
        });
    }
    // Plain summation; the Welford path is for sampled estimates.
    let mut sum = DenseMatrix::zeros(n, n);
    for sigma in Permutation::all(n) {
        sum = sum.add(&conjugated_llt(b, &sigma)?)?;
    }
    Ok(sum.scale(1.0 / factorial(n) as f64))
}

/// Closed form `H²/3 + diag(H²)/6` with `H = B − D`.
pub fn expected_llt_closed(b: &HermitianMatrix) -> DenseMatrix {
    let h = b.off_diagonal();
    let h2 = h.matmul(&h).expect("square");
    let mut out = h2.scale(1.0 / 3.0);
    for i in 0..b.n() {
        out[(i, i)] += h2[(i, i)] / 6.0;
    }
    out
}

/// `(1/n) K ∘ H²` with `K[s][t] = min(s, t)` (0-based). This weights each
/// entry by the target indices rather than by positions in the ordering and
/// does not equal the permutation average; it is kept for comparison.
pub fn expected_llt_min_index_formula(b: &HermitianMatrix) -> DenseMatrix {
    let n = b.n();
    let h = b.off_diagonal();
    let h2 = h.matmul(&h).expect("square");
    DenseMatrix::k_matrix(n)
        .hadamard(&h2)
        .expect("same shape")
        .scale(1.0 / n as f64)
}

/// Sampled `E[LL^*]` over `trials` uniform orderings.
pub fn expected_llt_montecarlo(b: &HermitianMatrix, trials: usize, rng: &mut RngState) -> Result<LltEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let n = b.n();
    llt_over(b, (0..trials).map(|_| rng.permutation(n)))
}

/// Spectral norm of a Hermitian matrix (largest eigenvalue modulus).
pub fn hermitian_norm(m: &HermitianMatrix) -> Result<f64> {
    let values = m.eigenvalues(DEFAULT_EIGEN_TOL)?;
    Ok(values.iter().fold(0.0f64, |acc, v| acc.max(v.abs())))
}

/// Worst entrywise disagreement between an oracle and a candidate matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixComparison {
    pub max_abs_diff: f64,
    /// 0-based location of the largest disagreement.
    pub worst_entry: (usize, usize),
    pub oracle_value: Complex64,
    pub candidate_value: Complex64,
    pub agrees: bool,
}

pub fn compare_matrices(oracle: &DenseMatrix, candidate: &DenseMatrix, tol: f64) -> Result<MatrixComparison> {
    oracle.max_abs_diff(candidate)?;
    let mut worst = (0, 0);
    let mut max_abs_diff = 0.0;
    for i in 0..oracle.rows() {
        for j in 0..oracle.cols() {
            let d = (oracle[(i, j)] - candidate[(i, j)]).norm();
            if d > max_abs_diff {
                max_abs_diff = d;
                worst = (i, j);
            }
        }
    }
    Ok(MatrixComparison {
        max_abs_diff,
        worst_entry: worst,
        oracle_value: oracle[worst],
        candidate_value: candidate[worst],
        agrees: max_abs_diff <= tol,
    })
}

/// Norm checks for `E[LL^*]` and `H = B − D`.
#[derive(Debug, Clone, PartialEq)]
pub struct LltNormReport {
    pub norm_e: f64,
    pub norm_b: f64,
    pub norm_h: f64,
    /// `‖E[LL^*]‖ ≤ 4‖B‖²`.
    pub general_ok: bool,
    /// `‖H‖ ≤ 2‖B‖`.
    pub h_general_ok: bool,
    pub psd_unit_diagonal: bool,
    /// `‖E[LL^*]‖ < ‖B‖²`, only checked for PSD unit-diagonal `B`.
    pub psd_ok: Option<bool>,
    /// `‖H‖ ≤ ‖B‖`, only checked for PSD unit-diagonal `B`.
    pub h_psd_ok: Option<bool>,
}

impl LltNormReport {
    pub fn pass(&self) -> bool {
        self.general_ok && self.h_general_ok && self.psd_ok != Some(false) && self.h_psd_ok != Some(false)
    }
}

const ROUNDING_SLACK: f64 = 1e-12;
const STRICT_MARGIN: f64 = 1e-10;

pub fn verify_llt_norm_bounds(b: &HermitianMatrix) -> Result<LltNormReport> {
    let e = HermitianMatrix::new(expected_llt_closed(b))?;
    let h = HermitianMatrix::new(b.off_diagonal())?;
    let norm_e = hermitian_norm(&e)?;
    let norm_h = hermitian_norm(&h)?;
    let b_values = b.eigenvalues(DEFAULT_EIGEN_TOL)?;
    let lambda1 = b_values[0];
    let lambda_min = *b_values.last().unwrap();
    let norm_b = lambda1.abs().max(lambda_min.abs());
    let norm_b_sq = norm_b * norm_b;

    let psd_unit_diagonal = b.is_unit_diagonal() && lambda_min >= -1e-10 * lambda1.abs();
    Ok(LltNormReport {
        norm_e,
        norm_b,
        norm_h,
        general_ok: norm_e <= 4.0 * norm_b_sq * (1.0 + ROUNDING_SLACK),
        h_general_ok: norm_h <= 2.0 * norm_b * (1.0 + ROUNDING_SLACK),
        psd_unit_diagonal,
        psd_ok: psd_unit_diagonal.then_some(norm_e <= norm_b_sq * (1.0 - STRICT_MARGIN)),
        h_psd_ok: psd_unit_diagonal.then_some(norm_h <= norm_b * (1.0 + ROUNDING_SLACK)),
    })
}
