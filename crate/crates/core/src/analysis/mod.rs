//! Permutation averages of triangular truncations, truncation-norm
//! statistics over orderings, and the per-sweep convergence bounds.

mod bounds;
mod contraction;
mod expectation;
mod truncation;

pub use bounds::{evaluate_bounds, log_factor, relaxation_rate, BoundConstants, BoundReport};
pub use contraction::{expected_contraction, AveragingMode};
pub use expectation::{
    compare_matrices, conjugated_llt, expected_llt_bruteforce, expected_llt_closed,
    expected_llt_min_index_formula, expected_llt_montecarlo, hermitian_norm, llt_over,
    verify_llt_norm_bounds, LltEstimate, LltNormReport, MatrixComparison,
};
pub use truncation::{
    expected_truncation_norm, min_truncation_exhaustive, min_truncation_heuristic, truncation_ratio,
    MeanEstimate, SearchMethod, TruncationStats,
};

/// Largest `n` for which sums over all `n!` permutations are evaluated.
pub const MAX_ENUMERATION_N: usize = 8;
