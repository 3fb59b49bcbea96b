use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// A tuple of naturals indexing monomials and grid nodes.
///
/// The total order is graded lexicographic: first by `|n|`, then
/// lexicographically with the first coordinate most significant. In two
/// variables the ascending order is `1, y, x, y², xy, x², …`.
///
/// The componentwise partial order `k ≤ n` is exposed through
/// [`MultiIndex::is_below`], never through `PartialOrd`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// The standard basis vector `e_i`.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![0; dim];
        v[axis] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, axis: usize) -> u32 {
        self.0[axis]
    }

    /// `|n|`
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise `self ≤ other`.
    pub fn is_below(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `n!` = `n₁!⋯n_d!`
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&e| factorial(e)).product()
    }

    /// `binom(n, k)` = `Π binom(n_i, k_i)`, zero unless `k ≤ n`.
    pub fn binomial(&self, k: &MultiIndex) -> BigInt {
        if !k.is_below(self) {
            return BigInt::from(0);
        }
        self.0.iter().zip(&k.0).map(|(&n, &k)| binomial(n, k)).product()
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !other.is_below(self) {
            return None;
        }
        Some(MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.dim(), other.dim(), "multi-index dimension mismatch");
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn with(&self, axis: usize, value: u32) -> MultiIndex {
        let mut v = self.0.clone();
        v[axis] = value;
        MultiIndex(v)
    }

    /// `n − e_i`, if `n_i > 0`.
    pub fn decrement(&self, axis: usize) -> Option<MultiIndex> {
        if self.0[axis] == 0 {
            None
        } else {
            Some(self.with(axis, self.0[axis] - 1))
        }
    }

    pub fn increment(&self, axis: usize) -> MultiIndex {
        self.with(axis, self.0[axis] + 1)
    }

    /// All `k ≤ self` in ascending graded-lex order.
    pub fn box_below(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zero(self.dim())];
        for (axis, &top) in self.0.iter().enumerate() {
            out = out.into_iter().flat_map(|k| (0..=top).map(move |e| k.with(axis, e))).collect();
        }
        out.sort();
        out
    }

    /// All indices of dimension `dim` with `|n| = total`, ascending.
    pub fn with_total(dim: usize, total: u32) -> Vec<MultiIndex> {
        fn rec(dim: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == dim {
                prefix.push(remaining);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in 0..=remaining {
                prefix.push(e);
                rec(dim, remaining - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if dim == 0 {
            if total == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(dim, total, &mut Vec::with_capacity(dim), &mut out);
        out.sort();
        out
    }

    /// All indices with `|n| ≤ max_total`, ascending.
    pub fn up_to_total(dim: usize, max_total: u32) -> Vec<MultiIndex> {
        (0..=max_total).flat_map(|t| MultiIndex::with_total(dim, t)).collect()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        MultiIndex(v.to_vec())
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Falling factorial `(n)_k = n(n−1)⋯(n−k+1)`.
pub fn falling(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    ((n - k + 1)..=n).fold(BigInt::one(), |acc, v| acc * v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order_in_two_variables() {
        let got = MultiIndex::up_to_total(2, 2);
        let want: Vec<MultiIndex> =
            [[0, 0], [0, 1], [1, 0], [0, 2], [1, 1], [2, 0]].into_iter().map(MultiIndex::from).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn factorial_and_binomial() {
        let n = MultiIndex::from([3, 2]);
        assert_eq!(n.factorial(), BigInt::from(12));
        assert_eq!(n.binomial(&MultiIndex::from([1, 1])), BigInt::from(6));
        assert_eq!(n.binomial(&MultiIndex::from([4, 0])), BigInt::from(0));
        assert_eq!(falling(5, 2), BigInt::from(20));
        assert_eq!(falling(2, 3), BigInt::from(0));
    }

    #[test]
    fn box_below_counts() {
        let n = MultiIndex::from([2, 1, 3]);
        let b = n.box_below();
        assert_eq!(b.len(), 3 * 2 * 4);
        assert!(b.iter().all(|k| k.is_below(&n)));
        assert!(b.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn partial_order_is_componentwise() {
        let a = MultiIndex::from([1, 2]);
        let b = MultiIndex::from([2, 1]);
        assert!(!a.is_below(&b) && !b.is_below(&a));
        assert!(a < b); // graded-lex still totally orders them
        assert_eq!(b.checked_sub(&MultiIndex::from([1, 1])), Some(MultiIndex::from([1, 0])));
        assert_eq!(a.checked_sub(&b), None);
    }
}
