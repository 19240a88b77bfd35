//! Per-sweep contraction factors for the squared energy error.
//!
//! Every SOR-type bound has the shape
//! `1 − ω(2−ω)λ1 / ((1 + c·ωλ1)² κ̄)` where `c` bounds `‖L_σ‖/‖B‖` for the
//! orderings in use: `½⌊log₂(2n)⌋` for an arbitrary fixed ordering,
//! `C0 ln r` for small rank, `1` in expectation over shuffled orderings and
//! `C1` for the best preshuffled ordering.

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{HermitianMatrix, SpectralSummary, DEFAULT_RANK_TOL};
use crate::solver::check_omega;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    /// Small-rank constant; has no default, the small-rank rate is only
    /// evaluated when it is supplied.
    pub c0: Option<f64>,
    /// Best-ordering truncation constant for PSD unit-diagonal matrices.
    pub c1: f64,
    /// Best-ordering truncation constant for general Hermitian matrices.
    pub c2: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        Self {
            c0: None,
            c1: 32.42,
            c2: 2907.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub omega: f64,
    pub n: usize,
    pub rank: usize,
    pub lambda1: f64,
    pub lambda_r: f64,
    pub kappa_bar: f64,
    /// Cyclic SOR with `c = ½⌊log₂(2n)⌋`.
    pub rate_cyclic: f64,
    /// Cyclic SOR with `c = C0 ln r`; needs `C0` and `r ≥ 2`.
    pub rate_cyclic_small_rank: Option<f64>,
    /// Expected per-sweep factor of `n` single random steps:
    /// `(1 − ω(2−ω)λ1/(nκ̄))^n`.
    pub rate_single_step: f64,
    /// Expected factor for shuffled sweeps (`c = 1`).
    pub rate_shuffled: f64,
    /// Factor for the best preshuffled ordering (`c = C1`).
    pub rate_preshuffled: f64,
    pub constants: BoundConstants,
}

/// `⌊log₂(2n)⌋ / 2`, the bound on `‖L‖/‖B‖` valid for every ordering.
pub fn log_factor(n: usize) -> f64 {
    let two_n = 2 * n.max(1) as u64;
    (63 - two_n.leading_zeros()) as f64 / 2.0
}

/// `1 − ω(2−ω)λ1 / ((1 + c·ωλ1)² κ̄)`.
pub fn relaxation_rate(omega: f64, lambda1: f64, kappa_bar: f64, c: f64) -> f64 {
    let denom = 1.0 + c * omega * lambda1;
    1.0 - omega * (2.0 - omega) * lambda1 / (denom * denom * kappa_bar)
}

fn in_unit_interval(name: &str, rate: f64) -> Result<f64> {
    if (0.0..1.0).contains(&rate) {
        Ok(rate)
    } else {
        Err(Error::InvalidArgument(alloc::format!("{name} rate {rate} outside [0, 1)")))
    }
}

impl BoundReport {
    /// Evaluates all bounds from precomputed spectral data.
    pub fn from_summary(n: usize, s: &SpectralSummary, omega: f64, constants: BoundConstants) -> Result<Self> {
        check_omega(omega)?;
        if !(constants.c1 > 0.0) || constants.c0.is_some_and(|c| !(c > 0.0)) {
            return Err(Error::InvalidArgument("bound constants must be positive".into()));
        }
        let (l1, kb) = (s.lambda1, s.kappa_bar);
        let single = 1.0 - omega * (2.0 - omega) * l1 / (n as f64 * kb);
        let small_rank = match constants.c0 {
            Some(c0) if s.rank >= 2 => Some(in_unit_interval(
                "small-rank",
                relaxation_rate(omega, l1, kb, c0 * (s.rank as f64).ln()),
            )?),
            _ => None,
        };
        Ok(Self {
            omega,
            n,
            rank: s.rank,
            lambda1: l1,
            lambda_r: s.lambda_r,
            kappa_bar: kb,
            rate_cyclic: in_unit_interval("cyclic", relaxation_rate(omega, l1, kb, log_factor(n)))?,
            rate_cyclic_small_rank: small_rank,
            rate_single_step: in_unit_interval("single-step", single.max(0.0).powi(n as i32))?,
            rate_shuffled: in_unit_interval("shuffled", relaxation_rate(omega, l1, kb, 1.0))?,
            rate_preshuffled: in_unit_interval("preshuffled", relaxation_rate(omega, l1, kb, constants.c1))?,
            constants,
        })
    }
}

/// Bound report for a PSD unit-diagonal `B`.
pub fn evaluate_bounds(b: &HermitianMatrix, omega: f64, constants: BoundConstants) -> Result<BoundReport> {
    check_omega(omega)?;
    if let Some(i) = b.first_non_unit_diagonal() {
        return Err(Error::NotUnitDiagonal(i));
    }
    let summary = b.spectral_summary(DEFAULT_RANK_TOL)?;
    BoundReport::from_summary(b.n(), &summary, omega, constants)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_factor_values() {
        assert_eq!(log_factor(1), 0.5);
        assert_eq!(log_factor(2), 1.0);
        assert_eq!(log_factor(3), 1.0);
        assert_eq!(log_factor(4), 1.5);
        assert_eq!(log_factor(8), 2.0);
        assert_eq!(log_factor(1000), 5.0);
        assert_eq!(log_factor(1024), 5.5);
    }

    #[test]
    fn identity_rates() {
        let r = evaluate_bounds(&HermitianMatrix::identity(4), 1.0, BoundConstants::default()).unwrap();
        // λ1 = κ̄ = 1, ω = 1: shuffled 1 − 1/4.
        assert!((r.rate_shuffled - 0.75).abs() < 1e-15);
        assert!((r.rate_single_step - 0.75f64.powi(4)).abs() < 1e-15);
        assert!(r.rate_cyclic_small_rank.is_none());
    }

    #[test]
    fn rejects_invalid_inputs() {
        let id = HermitianMatrix::identity(2);
        assert_eq!(evaluate_bounds(&id, 2.0, BoundConstants::default()), Err(Error::InvalidOmega(2.0)));
        assert_eq!(evaluate_bounds(&id, 0.0, BoundConstants::default()), Err(Error::InvalidOmega(0.0)));
        let scaled = HermitianMatrix::from_real(2, &[2.0, 0.0, 0.0, 2.0]).unwrap();
        assert!(evaluate_bounds(&scaled, 1.0, BoundConstants::default()).is_err());
        let bad = BoundConstants {
            c0: Some(-1.0),
            ..Default::default()
        };
        assert!(evaluate_bounds(&id, 1.0, bad).is_err());
    }
}
