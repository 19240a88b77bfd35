//! Relaxation sweeps (SOR, Gauss-Seidel, Kaczmarz) for consistent Hermitian
//! positive semi-definite systems under cyclic and randomized equation
//! orderings, together with the triangular-truncation machinery used to
//! bound their convergence rates.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! plotting live in the `shufflesor-cli` companion crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod error;
pub mod linalg;
pub mod ordering;
pub mod permutation;
pub mod problems;
pub mod solver;

pub use error::{Error, Result};
pub use linalg::{
    c64, DenseMatrix, Eigen, HermitianMatrix, SpectralSummary, DEFAULT_EIGEN_TOL,
    DEFAULT_NORM_TOL, DEFAULT_RANK_TOL,
};
pub use num_complex::Complex64;
pub use ordering::{derive_seed, OrderingStrategy, RngState, StrategyKind};
pub use permutation::Permutation;
pub use problems::{ProblemInstance, ProblemKind};
pub use solver::{IterationHistory, SolverConfig};
