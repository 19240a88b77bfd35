//! Test-system generators with planted solutions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{self, c64, DenseMatrix, HermitianMatrix, DEFAULT_EIGEN_TOL, DEFAULT_RANK_TOL};
use crate::{Error, Result, RngState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    /// `2m` unit vectors in the plane at angles `jπ/(2m)`.
    Fan { m: usize },
    /// Gaussian `n×m` factor with normalized rows.
    Random { n: usize, m: usize, complex: bool },
    /// Gaussian `n×r` factor with normalized rows.
    LowRank { n: usize, r: usize },
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ProblemKind::Fan { m } => write!(f, "fan m={m}"),
            ProblemKind::Random { n, m, complex } => write!(f, "random n={n} m={m} complex={complex}"),
            ProblemKind::LowRank { n, r } => write!(f, "lowrank n={n} r={r}"),
        }
    }
}

/// A consistent system `B ȳ = b` with unit-diagonal `B`, optionally with the
/// factor `A` (`B = A A^*`) and `x̄ = A^* ȳ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub matrix: HermitianMatrix,
    pub factor: Option<DenseMatrix>,
    pub rhs: Vec<Complex64>,
    pub ybar: Vec<Complex64>,
    pub xbar: Option<Vec<Complex64>>,
    pub kind: ProblemKind,
    pub seed: Option<u64>,
}

impl ProblemInstance {
    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// One-line descriptor, e.g. `"lowrank n=8 r=2 seed=7"`.
    pub fn describe(&self) -> String {
        match self.seed {
            Some(s) => format!("{} seed={s}", self.kind),
            None => format!("{}", self.kind),
        }
    }

    /// Default starting vector: zero for an inhomogeneous system, the last
    /// unit vector for `b = 0`. Its energy is `B[n][n] = 1`, and it is not
    /// annihilated by the first projection of a cyclic sweep.
    pub fn default_start(&self) -> Vec<Complex64> {
        default_start(&self.rhs)
    }
}

pub fn default_start(rhs: &[Complex64]) -> Vec<Complex64> {
    let mut y0 = alloc::vec![c64(0.0, 0.0); rhs.len()];
    if let Some(last) = y0.last_mut() {
        if rhs.iter().all(|v| *v == c64(0.0, 0.0)) {
            *last = c64(1.0, 0.0);
        }
    }
    y0
}

/// The homogeneous fan system: rows `a_j = (cos(jθ), sin(jθ))`,
/// `j = 0..2m`, `θ = π/(2m)`; `A^*A = mI`, rank 2, `‖B‖ = m`.
pub fn fan_example(m: usize) -> Result<ProblemInstance> {
    if m == 0 {
        return Err(Error::InvalidArgument("fan example needs m >= 1".into()));
    }
    let theta = PI / (2 * m) as f64;
    let mut entries = Vec::with_capacity(4 * m);
    for j in 0..2 * m {
        let angle = j as f64 * theta;
        entries.push(c64(angle.cos(), 0.0));
        entries.push(c64(angle.sin(), 0.0));
    }
    let a = DenseMatrix::from_row_major(2 * m, 2, entries)?;
    let matrix = HermitianMatrix::from_factor(&a, true)?;
    let zeros = alloc::vec![c64(0.0, 0.0); 2 * m];
    Ok(ProblemInstance {
        matrix,
        factor: Some(a),
        rhs: zeros.clone(),
        ybar: zeros,
        xbar: Some(alloc::vec![c64(0.0, 0.0); 2]),
        kind: ProblemKind::Fan { m },
        seed: None,
    })
}

fn gaussian(rng: &mut RngState, complex: bool) -> Complex64 {
    if complex {
        c64(rng.standard_normal(), rng.standard_normal())
    } else {
        c64(rng.standard_normal(), 0.0)
    }
}

fn gaussian_vector(n: usize, rng: &mut RngState, complex: bool) -> Vec<Complex64> {
    (0..n).map(|_| gaussian(rng, complex)).collect()
}

/// Gaussian `n×m` factor with unit rows, `B = AA^*`, Gaussian planted `ȳ`,
/// `b = Bȳ` and `x̄ = A^*ȳ`.
pub fn random_normalized_factor(n: usize, m: usize, complex: bool, rng: &mut RngState) -> Result<ProblemInstance> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("factor dimensions must be at least 1".into()));
    }
    let seed = rng.seed();
    let mut a = DenseMatrix::zeros(n, m);
    for i in 0..n {
        loop {
            let row = gaussian_vector(m, rng, complex);
            let len = linalg::norm(&row);
            if len > 0.0 {
                for (dst, v) in a.row_mut(i).iter_mut().zip(row) {
                    *dst = v / len;
                }
                break;
            }
        }
    }
    let matrix = HermitianMatrix::from_factor(&a, true)?;
    let ybar = gaussian_vector(n, rng, complex);
    let rhs = matrix.mul_vec(&ybar)?;
    let xbar = a.adjoint_mul_vec(&ybar)?;
    Ok(ProblemInstance {
        matrix,
        factor: Some(a),
        rhs,
        ybar,
        xbar: Some(xbar),
        kind: ProblemKind::Random { n, m, complex },
        seed: Some(seed),
    })
}

/// Real rank-`r` instance (`r ≤ n`) built from an `n×r` factor.
pub fn low_rank_psd(n: usize, r: usize, rng: &mut RngState) -> Result<ProblemInstance> {
    if r == 0 || r > n {
        return Err(Error::InvalidArgument(format!("rank {r} must lie in 1..={n}")));
    }
    let mut p = random_normalized_factor(n, r, false, rng)?;
    p.kind = ProblemKind::LowRank { n, r };
    Ok(p)
}

/// Gaussian `ȳ` and the consistent right-hand side `b = Bȳ`.
pub fn plant_solution(b: &HermitianMatrix, rng: &mut RngState) -> (Vec<Complex64>, Vec<Complex64>) {
    let complex = b.as_dense().as_slice().iter().any(|v| v.im != 0.0);
    let ybar = gaussian_vector(b.n(), rng, complex);
    let rhs = b.mul_vec(&ybar).expect("matching dimension");
    (rhs, ybar)
}

/// Whether `b` lies in `Ran(B)`: `‖(I − Π)b‖ ≤ tol·‖b‖` with `Π` the
/// orthogonal projector onto the eigenvectors above the rank tolerance.
pub fn consistency_check(b: &HermitianMatrix, rhs: &[Complex64], tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("consistency tolerance must be positive".into()));
    }
    if rhs.len() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: b.n(),
            found: rhs.len(),
        });
    }
    let rhs_norm = linalg::norm(rhs);
    if rhs_norm == 0.0 {
        return Ok(true);
    }
    let eig = b.eigen(DEFAULT_EIGEN_TOL)?;
    let scale = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut residual = rhs.to_vec();
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda.abs() > DEFAULT_RANK_TOL * scale {
            let v = eig.vector(k);
            let coeff = linalg::dot(rhs, &v);
            for (r, vi) in residual.iter_mut().zip(&v) {
                *r -= coeff * vi;
            }
        }
    }
    Ok(linalg::norm(&residual) <= tol * rhs_norm)
}
