//! Square matrices of polynomials: the fiber (bundle-index) structure of
//! operator coefficients.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::poly::ScalarPoly;
use crate::{half, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixPoly {
    rank: usize,
    /// Row-major.
    entries: Vec<ScalarPoly>,
}

impl MatrixPoly {
    pub fn zero(rank: usize) -> Self {
        assert!(rank >= 1, "fiber rank must be positive");
        MatrixPoly { rank, entries: alloc::vec![ScalarPoly::zero(); rank * rank] }
    }

    /// `p` times the identity.
    pub fn scalar(rank: usize, p: ScalarPoly) -> Self {
        let mut m = Self::zero(rank);
        for i in 0..rank {
            m.entries[i * rank + i] = p.clone();
        }
        m
    }

    pub fn identity(rank: usize) -> Self {
        Self::scalar(rank, ScalarPoly::one())
    }

    /// Elementary matrix with a one at `(row, col)`.
    pub fn unit(rank: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zero(rank);
        m.entries[row * rank + col] = ScalarPoly::one();
        m
    }

    pub fn from_fn(rank: usize, mut f: impl FnMut(usize, usize) -> ScalarPoly) -> Self {
        let entries = (0..rank * rank).map(|k| f(k / rank, k % rank)).collect();
        MatrixPoly { rank, entries }
    }

    /// Builds from row-major entries; panics unless there are `rank^2`.
    pub fn from_entries(rank: usize, entries: Vec<ScalarPoly>) -> Self {
        assert_eq!(entries.len(), rank * rank);
        MatrixPoly { rank, entries }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, row: usize, col: usize) -> &ScalarPoly {
        &self.entries[row * self.rank + col]
    }

    pub fn entries(&self) -> &[ScalarPoly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ScalarPoly::is_zero)
    }

    /// The scalar `p` if this is `p` times the identity.
    pub fn as_scalar(&self) -> Option<&ScalarPoly> {
        let d = self.get(0, 0);
        let ok = (0..self.rank).all(|i| {
            (0..self.rank).all(|j| if i == j { self.get(i, j) == d } else { self.get(i, j).is_zero() })
        });
        ok.then_some(d)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.rank, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_skew(&self) -> bool {
        *self == -self.transpose()
    }

    /// `(1/2 (M + M^T), 1/2 (M - M^T))`.
    pub fn sym_split(&self) -> (Self, Self) {
        let t = self.transpose();
        ((self + &t).scale(&half()), (self - &t).scale(&half()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        MatrixPoly { rank: self.rank, entries: self.entries.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn derive(&self, direction: usize) -> Self {
        MatrixPoly { rank: self.rank, entries: self.entries.iter().map(|p| p.derive(direction)).collect() }
    }

    pub fn derive_multi(&self, alpha: &crate::MultiIndex) -> Self {
        MatrixPoly { rank: self.rank, entries: self.entries.iter().map(|p| p.derive_multi(alpha)).collect() }
    }

    /// Matrix times column vector.
    pub fn apply(&self, column: &[ScalarPoly]) -> Vec<ScalarPoly> {
        (0..self.rank)
            .map(|i| {
                let mut acc = ScalarPoly::zero();
                for (j, f) in column.iter().enumerate() {
                    let c = self.get(i, j);
                    if !c.is_zero() && !f.is_zero() {
                        acc += &(c * f);
                    }
                }
                acc
            })
            .collect()
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&ScalarPoly, &ScalarPoly) -> ScalarPoly) -> Self {
        assert_eq!(self.rank, rhs.rank, "fiber rank mismatch");
        MatrixPoly { rank: self.rank, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| f(a, b)).collect() }
    }
}

impl Add for &MatrixPoly {
    type Output = MatrixPoly;
    fn add(self, rhs: &MatrixPoly) -> MatrixPoly {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &MatrixPoly {
    type Output = MatrixPoly;
    fn sub(self, rhs: &MatrixPoly) -> MatrixPoly {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &MatrixPoly {
    type Output = MatrixPoly;
    fn neg(self) -> MatrixPoly {
        MatrixPoly { rank: self.rank, entries: self.entries.iter().map(|p| -p).collect() }
    }
}

impl Neg for MatrixPoly {
    type Output = MatrixPoly;
    fn neg(self) -> MatrixPoly {
        -&self
    }
}

impl Mul for &MatrixPoly {
    type Output = MatrixPoly;
    fn mul(self, rhs: &MatrixPoly) -> MatrixPoly {
        assert_eq!(self.rank, rhs.rank, "fiber rank mismatch");
        let n = self.rank;
        MatrixPoly::from_fn(n, |i, j| {
            let mut acc = ScalarPoly::zero();
            for k in 0..n {
                let (a, b) = (self.get(i, k), rhs.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        })
    }
}
