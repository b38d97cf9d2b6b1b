//! Derivative multi-indices: per-direction derivative counts.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

/// Count of partial derivatives in each coordinate direction.
///
/// Ordering is lexicographic on the counts. A sorted index string
/// `a <= b <= ... <= d` and its count vector name the same component of a
/// symmetric tensor; this type always uses counts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn unit(dim: usize, direction: usize) -> Self {
        let mut counts = vec![0; dim];
        counts[direction] = 1;
        MultiIndex(counts)
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        MultiIndex(counts)
    }

    /// Builds the count vector of an index string such as `[0, 1, 1]`.
    pub fn from_indices(dim: usize, indices: &[usize]) -> Self {
        let mut counts = vec![0; dim];
        for &i in indices {
            counts[i] += 1;
        }
        MultiIndex(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn order(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Sorted index string, e.g. counts `[1, 2]` give `[0, 1, 1]`.
    pub fn indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.order());
        for (i, &c) in self.0.iter().enumerate() {
            out.extend(core::iter::repeat_n(i, c as usize));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn with_increment(&self, direction: usize) -> Self {
        let mut counts = self.0.clone();
        counts[direction] += 1;
        MultiIndex(counts)
    }

    pub fn with_decrement(&self, direction: usize) -> Option<Self> {
        let mut counts = self.0.clone();
        counts[direction] = counts[direction].checked_sub(1)?;
        Some(MultiIndex(counts))
    }

    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Number of index strings with these counts: `|a|! / prod(a_i!)`.
    pub fn multinomial(&self) -> BigInt {
        let mut acc = BigInt::one();
        let mut running = 0u64;
        for &c in &self.0 {
            for j in 1..=u64::from(c) {
                running += 1;
                acc *= running;
                acc /= j;
            }
        }
        acc
    }

    /// Product of binomials `prod_i C(self_i, sub_i)`.
    pub fn binomial(&self, sub: &Self) -> BigInt {
        let mut acc = BigInt::one();
        for (&n, &k) in self.0.iter().zip(&sub.0) {
            for j in 0..u64::from(k) {
                acc *= u64::from(n) - j;
                acc /= j + 1;
            }
        }
        acc
    }

    /// All multi-indices `b <= self`, in lexicographic order.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::with_capacity(self.dim()))];
        for &c in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (c as usize + 1));
            for prefix in &out {
                for v in 0..=c {
                    let mut p = prefix.0.clone();
                    p.push(v);
                    next.push(MultiIndex(p));
                }
            }
            out = next;
        }
        out
    }

    /// All sub-indices `b <= self` with `|b| = order`.
    pub fn sub_indices_of_order(&self, order: usize) -> Vec<MultiIndex> {
        self.sub_indices().into_iter().filter(|b| b.order() == order).collect()
    }

    /// All multi-indices of total `order` in `dim` directions, lexicographic.
    pub fn all_of_order(dim: usize, order: usize) -> Vec<MultiIndex> {
        fn rec(dim: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == dim {
                prefix.push(left);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for v in 0..=left {
                prefix.push(v);
                rec(dim, left - v, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if dim == 0 {
            if order == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(dim, order as u32, &mut Vec::with_capacity(dim), &mut out);
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multinomial_counts_index_strings() {
        // brute force: count strings over {0,1,2} of length 4 with counts [2,1,1]
        let target = MultiIndex::from_counts(vec![2, 1, 1]);
        let mut n = 0;
        for s in 0..81u32 {
            let idx: Vec<usize> = (0..4).map(|k| ((s / 3u32.pow(k)) % 3) as usize).collect();
            if MultiIndex::from_indices(3, &idx) == target {
                n += 1;
            }
        }
        assert_eq!(target.multinomial(), BigInt::from(n));
        assert_eq!(MultiIndex::zero(2).multinomial(), BigInt::one());
    }

    #[test]
    fn binomial_product() {
        let a = MultiIndex::from_counts(vec![4, 2]);
        let b = MultiIndex::from_counts(vec![2, 1]);
        assert_eq!(a.binomial(&b), BigInt::from(12));
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let all = MultiIndex::all_of_order(3, 2);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|m| m.order() == 2));
        assert_eq!(MultiIndex::from_counts(vec![1, 2]).sub_indices().len(), 6);
    }

    #[test]
    fn indices_round_trip() {
        let m = MultiIndex::from_counts(vec![1, 0, 2]);
        assert_eq!(m.indices(), vec![0, 2, 2]);
        assert_eq!(MultiIndex::from_indices(3, &m.indices()), m);
        assert_eq!(m.to_string(), "[1,0,2]");
    }
}
