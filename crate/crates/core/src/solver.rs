//! SOR / Gauss-Seidel sweeps on `B y = b` and the equivalent Kaczmarz sweeps
//! on `A x = b` for `B = A A^*`.
//!
//! Sweeps are written in projection form: each step relaxes one coordinate
//! using the latest values, so a sweep costs `O(n²)` and never forms
//! `(I + ωL)^{-1}`. The matrix form only appears in
//! [`error_iteration_matrix`].

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{self, c64, DenseMatrix, HermitianMatrix};
use crate::{Error, OrderingStrategy, Permutation, Result, RngState};

/// Rows of a Kaczmarz factor must have unit norm to this accuracy.
const ROW_NORM_TOL: f64 = 1e-10;

pub fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega < 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidOmega(omega))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Relaxation parameter in `(0, 2)`; `1` is Gauss-Seidel.
    pub omega: f64,
    pub max_sweeps: usize,
    /// Iteration stops once the squared energy error is at or below this.
    pub target_error_sq: f64,
    pub seed: u64,
    pub record_orders: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            omega: 1.0,
            max_sweeps: 100,
            target_error_sq: 1e-24,
            seed: 0,
            record_orders: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        check_omega(self.omega)?;
        if self.max_sweeps == 0 {
            return Err(Error::InvalidArgument("max_sweeps must be at least 1".into()));
        }
        if !(self.target_error_sq >= 0.0) {
            return Err(Error::InvalidArgument("target_error_sq must be non-negative".into()));
        }
        Ok(())
    }
}

/// Per-sweep record of one solver run. Entry `k` refers to the iterate after
/// `k` sweeps; entry 0 is the starting point.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationHistory {
    pub errors_sq: Vec<f64>,
    pub residuals: Vec<f64>,
    pub orders: Option<Vec<Vec<usize>>>,
    pub final_iterate: Vec<Complex64>,
}

impl IterationHistory {
    pub fn sweeps(&self) -> usize {
        self.errors_sq.len() - 1
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn check_order(order: &[usize], n: usize) -> Result<()> {
    check_len(n, order.len())?;
    match order.iter().find(|&&i| i >= n) {
        Some(&i) => Err(Error::InvalidArgument(alloc::format!("sweep index {} out of range", i + 1))),
        None => Ok(()),
    }
}

fn check_unit_diagonal(b: &HermitianMatrix) -> Result<()> {
    match b.first_non_unit_diagonal() {
        Some(i) => Err(Error::NotUnitDiagonal(i)),
        None => Ok(()),
    }
}

fn check_unit_rows(a: &DenseMatrix) -> Result<()> {
    match (0..a.rows()).find(|&i| (linalg::norm(a.row(i)) - 1.0).abs() > ROW_NORM_TOL) {
        Some(i) => Err(Error::RowNotNormalized(i)),
        None => Ok(()),
    }
}

/// One relaxed sweep over `order`: `y_i ← y_i + ω (b_i − ⟨row_i(B), y⟩)`.
///
/// `B` must have unit diagonal. For the cyclic order this equals
/// `y + ω (I + ωL)^{-1} (b − By)`.
pub fn sor_sweep(
    b: &HermitianMatrix,
    rhs: &[Complex64],
    y: &mut [Complex64],
    omega: f64,
    order: &[usize],
) -> Result<()> {
    let n = b.n();
    check_len(n, rhs.len())?;
    check_len(n, y.len())?;
    check_order(order, n)?;
    check_unit_diagonal(b)?;
    sor_sweep_unchecked(b, rhs, y, omega, order);
    Ok(())
}

/// Inner products are accumulated in sweep order when `order` is a
/// permutation, so relabelling the system reproduces the iterates bit for bit.
fn sor_sweep_unchecked(b: &HermitianMatrix, rhs: &[Complex64], y: &mut [Complex64], omega: f64, order: &[usize]) {
    let sum_order: Option<&[usize]> = is_permutation(order).then_some(order);
    for &i in order {
        let row = b.row(i);
        let by: Complex64 = match sum_order {
            Some(o) => o.iter().map(|&j| row[j] * y[j]).sum(),
            None => row.iter().zip(y.iter()).map(|(bij, yj)| bij * yj).sum(),
        };
        y[i] += (rhs[i] - by) * omega;
    }
}

fn is_permutation(order: &[usize]) -> bool {
    let mut seen = alloc::vec![false; order.len()];
    order.iter().all(|&i| i < seen.len() && !core::mem::replace(&mut seen[i], true))
}

/// One relaxed Kaczmarz sweep: `x ← x + ω (b_i − ⟨a_i, x⟩) a_i^*` for each
/// row index `i` in `order`. Rows of `A` must be unit norm.
pub fn kaczmarz_sweep(
    a: &DenseMatrix,
    rhs: &[Complex64],
    x: &mut [Complex64],
    omega: f64,
    order: &[usize],
) -> Result<()> {
    check_len(a.rows(), rhs.len())?;
    check_len(a.cols(), x.len())?;
    check_order(order, a.rows())?;
    check_unit_rows(a)?;
    kaczmarz_sweep_unchecked(a, rhs, x, omega, order);
    Ok(())
}

fn kaczmarz_sweep_unchecked(a: &DenseMatrix, rhs: &[Complex64], x: &mut [Complex64], omega: f64, order: &[usize]) {
    for &i in order {
        let row = a.row(i);
        let ax: Complex64 = row.iter().zip(x.iter()).map(|(aij, xj)| aij * xj).sum();
        let step = (rhs[i] - ax) * omega;
        for (xj, aij) in x.iter_mut().zip(row) {
            *xj += step * aij.conj();
        }
    }
}

fn residual_norm(b: &HermitianMatrix, rhs: &[Complex64], y: &[Complex64]) -> f64 {
    let by = b.mul_vec(y).expect("checked dimensions");
    linalg::norm(&linalg::sub(rhs, &by))
}

/// Runs SOR sweeps under `strategy` until `max_sweeps` or the target error.
///
/// `ybar` is any solution of `B y = b`; the recorded error
/// `|ȳ − y^{(k)}|_B²` does not depend on which solution is supplied.
pub fn run_solver(
    b: &HermitianMatrix,
    rhs: &[Complex64],
    y0: &[Complex64],
    ybar: &[Complex64],
    config: &SolverConfig,
    strategy: &OrderingStrategy,
) -> Result<IterationHistory> {
    config.validate()?;
    let n = b.n();
    check_len(n, rhs.len())?;
    check_len(n, y0.len())?;
    check_len(n, ybar.len())?;
    check_unit_diagonal(b)?;
    strategy.check_size(n)?;

    let error_sq = |y: &[Complex64]| b.energy_seminorm_sq(&linalg::sub(ybar, y)).expect("checked dimensions");
    let mut rng = RngState::new(config.seed);
    let mut y = y0.to_vec();
    let mut errors_sq = alloc::vec![error_sq(&y)];
    let mut residuals = alloc::vec![residual_norm(b, rhs, &y)];
    let mut orders = config.record_orders.then(Vec::new);

    for _ in 0..config.max_sweeps {
        if *errors_sq.last().unwrap() <= config.target_error_sq {
            break;
        }
        let order = strategy.sweep_order(n, &mut rng)?;
        sor_sweep_unchecked(b, rhs, &mut y, config.omega, &order);
        errors_sq.push(error_sq(&y));
        residuals.push(residual_norm(b, rhs, &y));
        if let Some(o) = orders.as_mut() {
            o.push(order);
        }
    }
    Ok(IterationHistory {
        errors_sq,
        residuals,
        orders,
        final_iterate: y,
    })
}

/// Kaczmarz counterpart of [`run_solver`]: errors are `‖x̄ − x^{(k)}‖²` and
/// residuals `‖b − A x^{(k)}‖`. With `x0 = A^* y0` and the same seed the
/// history matches `run_solver` on `B = A A^*`.
pub fn run_kaczmarz(
    a: &DenseMatrix,
    rhs: &[Complex64],
    x0: &[Complex64],
    xbar: &[Complex64],
    config: &SolverConfig,
    strategy: &OrderingStrategy,
) -> Result<IterationHistory> {
    config.validate()?;
    let n = a.rows();
    check_len(n, rhs.len())?;
    check_len(a.cols(), x0.len())?;
    check_len(a.cols(), xbar.len())?;
    check_unit_rows(a)?;
    strategy.check_size(n)?;

    let residual = |x: &[Complex64]| linalg::norm(&linalg::sub(rhs, &a.mul_vec(x).expect("checked dimensions")));
    let mut rng = RngState::new(config.seed);
    let mut x = x0.to_vec();
    let mut errors_sq = alloc::vec![linalg::norm_sq(&linalg::sub(xbar, &x))];
    let mut residuals = alloc::vec![residual(&x)];
    let mut orders = config.record_orders.then(Vec::new);

    for _ in 0..config.max_sweeps {
        if *errors_sq.last().unwrap() <= config.target_error_sq {
            break;
        }
        let order = strategy.sweep_order(n, &mut rng)?;
        kaczmarz_sweep_unchecked(a, rhs, &mut x, config.omega, &order);
        errors_sq.push(linalg::norm_sq(&linalg::sub(xbar, &x)));
        residuals.push(residual(&x));
        if let Some(o) = orders.as_mut() {
            o.push(order);
        }
    }
    Ok(IterationHistory {
        errors_sq,
        residuals,
        orders,
        final_iterate: x,
    })
}

/// `Q_σ = I − ω P_σ^* (I + ω L_σ)^{-1} P_σ B` in the original indexing:
/// the error map of one SOR sweep that visits coordinates in the order
/// `σ(0), σ(1), …`.
pub fn error_iteration_matrix(b: &HermitianMatrix, omega: f64, sigma: &Permutation) -> Result<DenseMatrix> {
    check_omega(omega)?;
    check_unit_diagonal(b)?;
    let n = b.n();
    check_len(n, sigma.len())?;

    // Row i of Y solves (I + ω L_σ) Y = P_σ B by forward substitution.
    let mut y = DenseMatrix::zeros(n, n);
    for i in 0..n {
        let si = sigma.get(i);
        let mut row: Vec<Complex64> = b.row(si).to_vec();
        for j in 0..i {
            let l = b.get(si, sigma.get(j)) * omega;
            if l != c64(0.0, 0.0) {
                for (r, yj) in row.iter_mut().zip(y.row(j)) {
                    *r -= l * yj;
                }
            }
        }
        y.row_mut(i).copy_from_slice(&row);
    }
    let mut q = DenseMatrix::identity(n);
    for i in 0..n {
        let si = sigma.get(i);
        for (qv, yv) in q.row_mut(si).iter_mut().zip(y.row(i)) {
            *qv -= yv * omega;
        }
    }
    Ok(q)
}

/// Geometric mean of `e[k+1]/e[k]` over the last `window` sweeps.
///
/// Returns 0 when the error reaches exactly zero inside the window (this
/// includes a run that starts at zero error).
pub fn empirical_rate(history: &IterationHistory, window: usize) -> Result<f64> {
    if window == 0 {
        return Err(Error::InvalidArgument("rate window must be at least 1".into()));
    }
    let e = &history.errors_sq;
    if e.last() == Some(&0.0) {
        return Ok(0.0);
    }
    if e.len() < window + 1 {
        return Err(Error::InvalidArgument(alloc::format!(
            "history has {} sweeps, rate window needs {window}",
            e.len().saturating_sub(1)
        )));
    }
    let tail = &e[e.len() - window - 1..];
    if tail.contains(&0.0) {
        return Ok(0.0);
    }
    Ok((tail[window] / tail[0]).powf(1.0 / window as f64))
}
