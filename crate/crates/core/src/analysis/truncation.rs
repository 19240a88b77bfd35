//! Statistics of `‖L_σ‖ / ‖B‖` over orderings `σ`.

use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use super::MAX_ENUMERATION_N;
use crate::linalg::{HermitianMatrix, DEFAULT_NORM_TOL};
use crate::{Error, Permutation, Result, RngState};

/// Relative improvement a neighbouring ordering must achieve to be taken.
const IMPROVEMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    Exhaustive,
    Heuristic,
    MonteCarlo,
}

impl fmt::Display for SearchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMethod::Exhaustive => "exhaustive",
            SearchMethod::Heuristic => "heuristic",
            SearchMethod::MonteCarlo => "montecarlo",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncationStats {
    /// Ratio for the given (identity) ordering.
    pub ratio_identity: f64,
    pub min_ratio: f64,
    pub argmin: Permutation,
    pub mean_ratio: f64,
    pub max_ratio: f64,
    pub method: SearchMethod,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Caches `‖B‖` for repeated ratio evaluations.
struct RatioEvaluator<'a> {
    b: &'a HermitianMatrix,
    norm_b: f64,
}

impl<'a> RatioEvaluator<'a> {
    fn new(b: &'a HermitianMatrix) -> Result<Self> {
        let norm_b = b.as_dense().spectral_norm(DEFAULT_NORM_TOL);
        if norm_b == 0.0 {
            return Err(Error::ZeroMatrix);
        }
        Ok(Self { b, norm_b })
    }

    fn ratio(&self, sigma: &Permutation) -> Result<f64> {
        let l = self.b.permuted_strict_lower(sigma)?;
        Ok(l.spectral_norm(DEFAULT_NORM_TOL) / self.norm_b)
    }
}

/// `‖L_σ‖ / ‖B‖`.
pub fn truncation_ratio(b: &HermitianMatrix, sigma: &Permutation) -> Result<f64> {
    RatioEvaluator::new(b)?.ratio(sigma)
}

/// Exact minimum, mean and maximum over all `n!` orderings (`n ≤ 8`).
pub fn min_truncation_exhaustive(b: &HermitianMatrix) -> Result<TruncationStats> {
    let n = b.n();
    if n > MAX_ENUMERATION_N {
        return Err(Error::TooLarge {
            n,
            limit: MAX_ENUMERATION_N,
            hint: "use heuristic",
        });
    }
    let eval = RatioEvaluator::new(b)?;
    let ratio_identity = eval.ratio(&Permutation::identity(n))?;
    let mut stats = TruncationStats {
        ratio_identity,
        min_ratio: f64::INFINITY,
        argmin: Permutation::identity(n),
        mean_ratio: 0.0,
        max_ratio: 0.0,
        method: SearchMethod::Exhaustive,
        samples: 0,
    };
    let mut sum = 0.0;
    for sigma in Permutation::all(n) {
        let r = eval.ratio(&sigma)?;
        sum += r;
        stats.samples += 1;
        stats.max_ratio = stats.max_ratio.max(r);
        if r < stats.min_ratio {
            stats.min_ratio = r;
            stats.argmin = sigma;
        }
    }
    stats.mean_ratio = (sum / stats.samples as f64).clamp(stats.min_ratio, stats.max_ratio);
    Ok(stats)
}

/// Local search for a small `‖L_σ‖`: from each of `restarts` random
/// orderings, take the best improving swap of adjacent positions until none
/// improves. The result bounds the true minimum from above.
///
/// Mean and maximum are taken over the random starting orderings.
pub fn min_truncation_heuristic(b: &HermitianMatrix, restarts: usize, rng: &mut RngState) -> Result<TruncationStats> {
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    let n = b.n();
    let eval = RatioEvaluator::new(b)?;
    let ratio_identity = eval.ratio(&Permutation::identity(n))?;
    let mut best = (f64::INFINITY, Permutation::identity(n));
    let (mut start_sum, mut start_max) = (0.0, 0.0f64);

    for _ in 0..restarts {
        let mut sigma = rng.permutation(n);
        let mut current = eval.ratio(&sigma)?;
        start_sum += current;
        start_max = start_max.max(current);
        loop {
            let mut step = None;
            let mut step_value = current * (1.0 - IMPROVEMENT_TOL);
            for k in 0..n.saturating_sub(1) {
                sigma.swap_positions(k, k + 1);
                let r = eval.ratio(&sigma)?;
                sigma.swap_positions(k, k + 1);
                if r < step_value {
                    step_value = r;
                    step = Some(k);
                }
            }
            match step {
                Some(k) => {
                    sigma.swap_positions(k, k + 1);
                    current = step_value;
                }
                None => break,
            }
        }
        if current < best.0 {
            best = (current, sigma);
        }
    }
    let mean_ratio = start_sum / restarts as f64;
    Ok(TruncationStats {
        ratio_identity,
        min_ratio: best.0,
        argmin: best.1,
        mean_ratio: mean_ratio.max(best.0),
        max_ratio: start_max,
        method: SearchMethod::Heuristic,
        samples: restarts,
    })
}

/// Monte Carlo estimate of `E[‖L_σ‖] / ‖B‖` over uniform orderings.
pub fn expected_truncation_norm(b: &HermitianMatrix, trials: usize, rng: &mut RngState) -> Result<MeanEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let eval = RatioEvaluator::new(b)?;
    let (mut mean, mut m2) = (0.0, 0.0);
    for k in 1..=trials {
        let r = eval.ratio(&rng.permutation(b.n()))?;
        let delta = r - mean;
        mean += delta / k as f64;
        m2 += delta * (r - mean);
    }
    let std_error = if trials > 1 {
        (m2 / (trials - 1) as f64).sqrt() / (trials as f64).sqrt()
    } else {
        0.0
    };
    Ok(MeanEstimate {
        mean,
        std_error,
        samples: trials,
    })
}
