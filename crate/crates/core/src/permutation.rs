use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

/// A bijection `σ` of `{0, …, n-1}`.
///
/// Stored 0-based. The textual form (`Display`/`FromStr`) is the 1-based
/// comma-separated list used on the command line, e.g. `"3,1,2"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &i in &map {
            if i >= n {
                return Err(Error::InvalidPermutation(format!("index {} out of range", i + 1)));
            }
            if core::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation(format!("index {} repeated", i + 1)));
            }
        }
        Ok(Self(map))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &s) in self.0.iter().enumerate() {
            inv[s] = i;
        }
        Self(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &s)| i == s)
    }

    /// `(P_σ x)_i = x_{σ(i)}`.
    pub fn apply<T: Copy>(&self, x: &[T]) -> Vec<T> {
        self.0.iter().map(|&s| x[s]).collect()
    }

    /// `P_σ^*`: inverse of [`Permutation::apply`].
    pub fn apply_inverse<T: Copy + Default>(&self, x: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); x.len()];
        for (i, &s) in self.0.iter().enumerate() {
            out[s] = x[i];
        }
        out
    }

    /// Swaps the entries at positions `i` and `j`.
    pub fn swap_positions(&mut self, i: usize, j: usize) {
        self.0.swap(i, j);
    }

    /// Advances to the lexicographically next permutation; returns `false`
    /// (leaving `self` unchanged) when already at the last one.
    pub fn next_lexicographic(&mut self) -> bool {
        let p = &mut self.0;
        let n = p.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && p[i - 1] >= p[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while p[j] <= p[i - 1] {
            j -= 1;
        }
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }

    /// Iterates over all `n!` permutations in lexicographic order.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some(Self::identity(n)),
        }
    }
}

pub struct AllPermutations {
    next: Option<Permutation>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if succ.next_lexicographic() {
            self.next = Some(succ);
        }
        Some(current)
    }
}

pub(crate) fn factorial(n: usize) -> usize {
    (1..=n).product()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", s + 1)?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let map = s
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                match tok.parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(Error::InvalidPermutation(format!("bad index {:?}", tok.to_string()))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        assert!("1,2,2".parse::<Permutation>().is_err());
        assert!("0,1".parse::<Permutation>().is_err());
        assert!("a".parse::<Permutation>().is_err());
    }

    #[test]
    fn text_form_is_one_based() {
        let p: Permutation = "3,1,2".parse().unwrap();
        assert_eq!(p.as_slice(), &[2, 0, 1]);
        assert_eq!(p.to_string(), "3,1,2");
    }

    #[test]
    fn enumerates_all() {
        assert_eq!(Permutation::all(1).count(), 1);
        assert_eq!(Permutation::all(4).count(), 24);
        let mut seen: Vec<_> = Permutation::all(4).collect();
        seen.dedup();
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn apply_and_inverse() {
        let p: Permutation = "2,3,1".parse().unwrap();
        let x = [10, 20, 30];
        assert_eq!(p.apply(&x), vec![20, 30, 10]);
        assert_eq!(p.apply_inverse(&p.apply(&x)), x.to_vec());
        assert_eq!(p.inverse().apply(&p.apply(&x)), x.to_vec());
    }
}
