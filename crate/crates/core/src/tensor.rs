//! Symmetric tensors with matrix-valued components.

use alloc::collections::BTreeMap;

use crate::matrix::MatrixPoly;
use crate::multi_index::MultiIndex;

/// A totally symmetric tensor of a fixed order, one component per sorted
/// index string (equivalently per count vector). Zero components are not
/// stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymTensor {
    dim: usize,
    rank: usize,
    order: usize,
    entries: BTreeMap<MultiIndex, MatrixPoly>,
}

impl SymTensor {
    pub fn zero(dim: usize, rank: usize, order: usize) -> Self {
        SymTensor { dim, rank, order, entries: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: &MultiIndex) -> Option<&MatrixPoly> {
        self.entries.get(index)
    }

    /// Nonzero components in lexicographic multi-index order.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &MatrixPoly)> {
        self.entries.iter()
    }

    /// Adds `m` to the component at `index`.
    pub fn add_at(&mut self, index: MultiIndex, m: &MatrixPoly) {
        assert_eq!(index.order(), self.order, "component order mismatch");
        assert_eq!(index.dim(), self.dim, "component dimension mismatch");
        if m.is_zero() {
            return;
        }
        let sum = match self.entries.get(&index) {
            Some(old) => old + m,
            None => m.clone(),
        };
        if sum.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, sum);
        }
    }

    pub fn map(&self, f: impl Fn(&MatrixPoly) -> MatrixPoly) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), f(v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        SymTensor { entries, ..*self }
    }

    pub fn all_entries(&self, pred: impl Fn(&MatrixPoly) -> bool) -> bool {
        self.entries.values().all(pred)
    }
}
