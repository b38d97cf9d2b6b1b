//! Right-ordered normal form of linear differential operators.
//!
//! An operator is stored as `sum_k S_k^{a..b} d_a .. d_b` with each `S_k` a
//! symmetric tensor whose components are matrices. Because partials commute,
//! the plain coefficient of `d^alpha` is `multinomial(alpha) * S_k[alpha]`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::MatrixPoly;
use crate::multi_index::MultiIndex;
use crate::poly::ScalarPoly;
use crate::tensor::SymTensor;
use crate::{half, Rational};

/// Plain coefficients `c_alpha` of `sum c_alpha d^alpha`.
pub(crate) type Plain = BTreeMap<MultiIndex, MatrixPoly>;

pub(crate) fn plain_add(out: &mut Plain, alpha: MultiIndex, m: MatrixPoly) {
    if m.is_zero() {
        return;
    }
    match out.get_mut(&alpha) {
        Some(old) => {
            *old = &*old + &m;
            if old.is_zero() {
                out.remove(&alpha);
            }
        }
        None => {
            out.insert(alpha, m);
        }
    }
}

/// Adds `scale * (d^left o coeff o d^right)` in normal form, using
/// `d^left o c = sum_{g <= left} C(left, g) (d^g c) d^{left - g}`.
pub(crate) fn add_sandwich(out: &mut Plain, left: &MultiIndex, coeff: &MatrixPoly, right: &MultiIndex, scale: &Rational) {
    if coeff.is_zero() || scale.is_zero() {
        return;
    }
    for g in left.sub_indices() {
        let dc = coeff.derive_multi(&g);
        if dc.is_zero() {
            continue;
        }
        let c = scale * Rational::from_integer(left.binomial(&g));
        let rest = left.checked_sub(&g).expect("sub-index").add(right);
        plain_add(out, rest, dc.scale(&c));
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperatorNF {
    dim: usize,
    rank: usize,
    coeffs: BTreeMap<usize, SymTensor>,
}

impl OperatorNF {
    pub fn zero(dim: usize, rank: usize) -> Self {
        assert!(dim >= 1 && rank >= 1, "dimension and rank must be positive");
        OperatorNF { dim, rank, coeffs: BTreeMap::new() }
    }

    /// Multiplication by a matrix of polynomials.
    pub fn mult(dim: usize, m: MatrixPoly) -> Self {
        let mut op = Self::zero(dim, m.rank());
        op.add_component(MultiIndex::zero(dim), &m);
        op
    }

    /// Multiplication by `p` times the identity.
    pub fn mult_scalar(dim: usize, rank: usize, p: ScalarPoly) -> Self {
        Self::mult(dim, MatrixPoly::scalar(rank, p))
    }

    pub fn constant(dim: usize, rank: usize, c: Rational) -> Self {
        Self::mult_scalar(dim, rank, ScalarPoly::constant(c))
    }

    pub fn identity(dim: usize, rank: usize) -> Self {
        Self::constant(dim, rank, Rational::from_integer(1.into()))
    }

    /// The partial derivative `d_direction` acting componentwise.
    pub fn derivative(dim: usize, rank: usize, direction: usize) -> Self {
        Self::derivative_multi(rank, &MultiIndex::unit(dim, direction))
    }

    /// `d^alpha` acting componentwise.
    pub fn derivative_multi(rank: usize, alpha: &MultiIndex) -> Self {
        let mut plain = Plain::new();
        plain.insert(alpha.clone(), MatrixPoly::identity(rank));
        Self::from_plain(alpha.dim(), rank, plain)
    }

    /// Builds from plain coefficients of `d^alpha`.
    pub(crate) fn from_plain(dim: usize, rank: usize, plain: Plain) -> Self {
        let mut op = Self::zero(dim, rank);
        for (alpha, m) in plain {
            let w = Rational::from_integer(alpha.multinomial());
            op.add_component(alpha, &m.scale(&w.recip()));
        }
        op
    }

    /// Builds from `(alpha, c_alpha)` pairs meaning `sum c_alpha d^alpha`.
    pub fn from_terms(dim: usize, rank: usize, terms: impl IntoIterator<Item = (MultiIndex, MatrixPoly)>) -> Self {
        let mut plain = Plain::new();
        for (alpha, m) in terms {
            assert_eq!(alpha.dim(), dim, "multi-index dimension mismatch");
            assert_eq!(m.rank(), rank, "fiber rank mismatch");
            plain_add(&mut plain, alpha, m);
        }
        Self::from_plain(dim, rank, plain)
    }

    /// Builds from symmetric tensor components, one per sorted index string.
    pub fn from_tensors(dim: usize, rank: usize, tensors: impl IntoIterator<Item = SymTensor>) -> Self {
        let mut op = Self::zero(dim, rank);
        for t in tensors {
            assert_eq!((t.dim(), t.rank()), (dim, rank), "tensor shape mismatch");
            for (alpha, m) in t.iter() {
                op.add_component(alpha.clone(), m);
            }
        }
        op
    }

    /// Adds `m` to the tensor component at `alpha`.
    pub fn add_component(&mut self, alpha: MultiIndex, m: &MatrixPoly) {
        let k = alpha.order();
        let t = self.coeffs.entry(k).or_insert_with(|| SymTensor::zero(self.dim, self.rank, k));
        t.add_at(alpha, m);
        if t.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest stored derivative order; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn tensor(&self, order: usize) -> Option<&SymTensor> {
        self.coeffs.get(&order)
    }

    /// Coefficient tensors in ascending order.
    pub fn tensors(&self) -> impl DoubleEndedIterator<Item = &SymTensor> {
        self.coeffs.values()
    }

    /// The top-order coefficient tensor.
    pub fn leading_symbol(&self) -> Option<&SymTensor> {
        self.coeffs.values().next_back()
    }

    /// Tensor component at `alpha`, zero if absent.
    pub fn component(&self, alpha: &MultiIndex) -> MatrixPoly {
        self.coeffs
            .get(&alpha.order())
            .and_then(|t| t.get(alpha))
            .cloned()
            .unwrap_or_else(|| MatrixPoly::zero(self.rank))
    }

    /// Plain coefficients `c_alpha = multinomial(alpha) * S[alpha]`.
    pub(crate) fn plain(&self) -> Plain {
        let mut out = Plain::new();
        for t in self.coeffs.values() {
            for (alpha, m) in t.iter() {
                out.insert(alpha.clone(), m.scale(&Rational::from_integer(alpha.multinomial())));
            }
        }
        out
    }

    /// `(alpha, c_alpha)` pairs in ascending order.
    pub fn terms(&self) -> Vec<(MultiIndex, MatrixPoly)> {
        self.plain().into_iter().collect()
    }

    pub fn has_coordinates(&self) -> bool {
        self.coeffs
            .values()
            .flat_map(|t| t.iter())
            .any(|(_, m)| m.entries().iter().any(ScalarPoly::has_coordinates))
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for t in other.coeffs.values() {
            for (alpha, m) in t.iter() {
                out.add_component(alpha.clone(), m);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&Rational::from_integer((-1).into()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, t)| (*k, t.map(|m| m.scale(c))))
            .filter(|(_, t)| !t.is_zero())
            .collect();
        OperatorNF { coeffs, ..*self }
    }

    /// `self o other`, re-normalized with the Leibniz rule.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let right = other.plain();
        let one = Rational::from_integer(1.into());
        let mut out = Plain::new();
        for (alpha, a) in self.plain() {
            let mut moved = Plain::new();
            for (beta, b) in &right {
                add_sandwich(&mut moved, &alpha, b, beta, &one);
            }
            for (gamma, m) in moved {
                plain_add(&mut out, gamma, &a * &m);
            }
        }
        Ok(Self::from_plain(self.dim, self.rank, out))
    }

    /// Applies to a column of `rank` polynomials.
    pub fn apply(&self, column: &[ScalarPoly]) -> Result<Vec<ScalarPoly>> {
        if column.len() != self.rank {
            return Err(Error::ShapeMismatch { expected: self.rank, found: column.len() });
        }
        let mut out = alloc::vec![ScalarPoly::zero(); self.rank];
        for (alpha, c) in self.plain() {
            let df: Vec<ScalarPoly> = column.iter().map(|f| f.derive_multi(&alpha)).collect();
            for (o, v) in out.iter_mut().zip(c.apply(&df)) {
                *o += &v;
            }
        }
        Ok(out)
    }

    /// The formal adjoint for the standard fiber pairing:
    /// `sum (-1)^|alpha| d^alpha o c_alpha^T`.
    pub fn adjoint(&self) -> Self {
        let mut out = Plain::new();
        let zero = MultiIndex::zero(self.dim);
        for (alpha, c) in self.plain() {
            let sign = Rational::from_integer(if alpha.order() % 2 == 0 { 1 } else { -1 }.into());
            add_sandwich(&mut out, &alpha, &c.transpose(), &zero, &sign);
        }
        Self::from_plain(self.dim, self.rank, out)
    }

    /// `(L+, L-) = (1/2 (L + L*), 1/2 (L - L*))`.
    pub fn split(&self) -> (Self, Self) {
        let adj = self.adjoint();
        let plus = self.add(&adj).expect("same shape").scale(&half());
        let minus = self.sub(&adj).expect("same shape").scale(&half());
        (plus, minus)
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.adjoint() == *self
    }

    pub fn is_skew_adjoint(&self) -> bool {
        self.adjoint() == self.neg()
    }
}
