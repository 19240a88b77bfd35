//! Seeded randomness and sweep-order policies.
//!
//! All randomness flows through [`RngState`], a ChaCha8 stream keyed by a
//! 64-bit seed. Independent trials use [`derive_seed`] so that each trial's
//! stream depends only on `(base_seed, trial_index)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Permutation, Result};

/// SplitMix64 finalizer applied to `base + golden·(index + 1)`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic random stream (ChaCha8 keyed by `seed`).
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream for trial `index` of an experiment seeded with `base`.
    pub fn for_trial(base: u64, index: u64) -> Self {
        Self::new(derive_seed(base, index))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw from `{0, …, n-1}` by rejection sampling (no modulo bias).
    pub fn uniform_index(&mut self, n: usize) -> usize {
        assert!(n > 0, "uniform_index over an empty range");
        let range = n as u64;
        let reject_below = range.wrapping_neg() % range;
        loop {
            let x = self.rng.next_u64();
            if x >= reject_below {
                return (x % range) as usize;
            }
        }
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Uniform random permutation of `{0, …, n-1}` (Fisher–Yates).
    pub fn permutation(&mut self, n: usize) -> Permutation {
        let mut map: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.uniform_index(i + 1);
            map.swap(i, j);
        }
        Permutation::new(map).expect("shuffle of the identity is a bijection")
    }
}

/// Uniformly distributed permutation of length `n`; advances `rng`.
pub fn random_permutation(n: usize, rng: &mut RngState) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::InvalidArgument("permutation length must be at least 1".into()));
    }
    Ok(rng.permutation(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyKind {
    Cyclic,
    Shuffled,
    Preshuffled,
    SingleStepRandom,
    Fixed,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 5] = [
        StrategyKind::Cyclic,
        StrategyKind::Shuffled,
        StrategyKind::Preshuffled,
        StrategyKind::SingleStepRandom,
        StrategyKind::Fixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Cyclic => "cyclic",
            StrategyKind::Shuffled => "shuffled",
            StrategyKind::Preshuffled => "preshuffled",
            StrategyKind::SingleStepRandom => "single-step-random",
            StrategyKind::Fixed => "fixed",
        }
    }

    pub fn needs_permutation(self) -> bool {
        matches!(self, StrategyKind::Preshuffled | StrategyKind::Fixed)
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cyclic" => Ok(StrategyKind::Cyclic),
            "shuffled" => Ok(StrategyKind::Shuffled),
            "preshuffled" => Ok(StrategyKind::Preshuffled),
            "single-step-random" | "single-step" | "random" => Ok(StrategyKind::SingleStepRandom),
            "fixed" => Ok(StrategyKind::Fixed),
            other => Err(Error::InvalidArgument(format!("unknown strategy {other:?}"))),
        }
    }
}

/// How the `n` coordinate steps of one sweep are ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderingStrategy {
    /// `0, 1, …, n-1` every sweep.
    Cyclic,
    /// A fresh uniform permutation every sweep.
    Shuffled,
    /// One random permutation, drawn once and reused every sweep.
    Preshuffled(Permutation),
    /// `n` independent uniform picks per sweep (repetition allowed).
    SingleStepRandom,
    /// A caller-chosen permutation reused every sweep.
    Fixed(Permutation),
}

impl OrderingStrategy {
    pub fn from_kind(kind: StrategyKind, sigma: Option<Permutation>) -> Result<Self> {
        match (kind, sigma) {
            (StrategyKind::Cyclic, _) => Ok(Self::Cyclic),
            (StrategyKind::Shuffled, _) => Ok(Self::Shuffled),
            (StrategyKind::SingleStepRandom, _) => Ok(Self::SingleStepRandom),
            (StrategyKind::Preshuffled, Some(s)) => Ok(Self::Preshuffled(s)),
            (StrategyKind::Fixed, Some(s)) => Ok(Self::Fixed(s)),
            (kind, None) => Err(Error::InvalidArgument(format!("strategy {kind} requires a permutation"))),
        }
    }

    /// Preshuffled strategy whose permutation is drawn from `rng`.
    pub fn preshuffled(n: usize, rng: &mut RngState) -> Result<Self> {
        Ok(Self::Preshuffled(random_permutation(n, rng)?))
    }

    pub fn kind(&self) -> StrategyKind {
        match self {
            Self::Cyclic => StrategyKind::Cyclic,
            Self::Shuffled => StrategyKind::Shuffled,
            Self::Preshuffled(_) => StrategyKind::Preshuffled,
            Self::SingleStepRandom => StrategyKind::SingleStepRandom,
            Self::Fixed(_) => StrategyKind::Fixed,
        }
    }

    pub fn permutation(&self) -> Option<&Permutation> {
        match self {
            Self::Preshuffled(s) | Self::Fixed(s) => Some(s),
            _ => None,
        }
    }

    pub fn check_size(&self, n: usize) -> Result<()> {
        match self.permutation() {
            Some(s) if s.len() != n => Err(Error::DimensionMismatch {
                expected: n,
                found: s.len(),
            }),
            _ => Ok(()),
        }
    }

    /// Coordinate order (0-based) for the next sweep.
    pub fn sweep_order(&self, n: usize, rng: &mut RngState) -> Result<Vec<usize>> {
        self.check_size(n)?;
        Ok(match self {
            Self::Cyclic => (0..n).collect(),
            Self::Shuffled => rng.permutation(n).into_vec(),
            Self::Preshuffled(s) | Self::Fixed(s) => s.as_slice().to_vec(),
            Self::SingleStepRandom => (0..n).map(|_| rng.uniform_index(n)).collect(),
        })
    }

    pub fn describe(&self) -> String {
        match self.permutation() {
            Some(s) => format!("{}({s})", self.kind()),
            None => String::from(self.kind().name()),
        }
    }
}
