//! Canonical divergence forms of self-adjoint and skew-adjoint operators.
//!
//! Every self-adjoint (or skew-adjoint) operator is written uniquely as
//!
//! ```text
//! sum_i  d^i S_(i) d^i  +  sum_i  d^i (d_c A_(i) + A_(i) d_c) d^i
//! ```
//!
//! where `d^i` is a string of `i` contracted derivatives, the tensors are
//! totally symmetric, and the fiber matrices of `S_(i)` are symmetric
//! (resp. skew) while those of `A_(i)` are skew (resp. symmetric). The
//! tensors are found by peeling: the top symbol of the remainder fixes the
//! next tensor, whose block expansion is subtracted until nothing remains.

use alloc::collections::BTreeMap;
use alloc::format;

use crate::error::{Error, Result};
use crate::matrix::MatrixPoly;
use crate::multi_index::MultiIndex;
use crate::operator::{add_sandwich, OperatorNF, Plain};
use crate::poly::ScalarPoly;
use crate::tensor::SymTensor;
use crate::{half, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    SelfAdjoint,
    SkewAdjoint,
}

impl Class {
    /// `+1` for self-adjoint, `-1` for skew-adjoint.
    fn sign(self) -> i64 {
        match self {
            Class::SelfAdjoint => 1,
            Class::SkewAdjoint => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Class::SelfAdjoint => "self",
            Class::SkewAdjoint => "skew",
        }
    }
}

/// The tensors `S_(i)` (order `2i`) and `A_(i)` (order `2i+1`) of a
/// canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    class: Class,
    dim: usize,
    rank: usize,
    s_list: BTreeMap<usize, SymTensor>,
    a_list: BTreeMap<usize, SymTensor>,
}

impl CanonicalForm {
    pub fn empty(class: Class, dim: usize, rank: usize) -> Self {
        CanonicalForm { class, dim, rank, s_list: BTreeMap::new(), a_list: BTreeMap::new() }
    }

    pub fn class(&self) -> Class {
        self.class
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `i -> S_(i)`, ascending.
    pub fn s_list(&self) -> &BTreeMap<usize, SymTensor> {
        &self.s_list
    }

    /// `i -> A_(i)`, ascending.
    pub fn a_list(&self) -> &BTreeMap<usize, SymTensor> {
        &self.a_list
    }

    pub fn is_empty(&self) -> bool {
        self.s_list.is_empty() && self.a_list.is_empty()
    }

    /// Sets `S_(i)`; zero tensors are dropped. No symmetry check happens
    /// here, see [`CanonicalForm::validate`].
    pub fn set_s(&mut self, i: usize, t: SymTensor) {
        if t.is_zero() {
            self.s_list.remove(&i);
        } else {
            self.s_list.insert(i, t);
        }
    }

    pub fn set_a(&mut self, i: usize, t: SymTensor) {
        if t.is_zero() {
            self.a_list.remove(&i);
        } else {
            self.a_list.insert(i, t);
        }
    }

    /// Checks tensor orders, shapes and the fiber symmetries of the class.
    pub fn validate(&self) -> Result<()> {
        let (s_sym, a_sym) = match self.class {
            Class::SelfAdjoint => (true, false),
            Class::SkewAdjoint => (false, true),
        };
        let check = |label: &str, i: usize, t: &SymTensor, order: usize, symmetric: bool| -> Result<()> {
            if t.order() != order || t.dim() != self.dim || t.rank() != self.rank {
                return Err(Error::MalformedCanonical(format!("{label}({i}) has the wrong shape")));
            }
            let ok = if symmetric { t.all_entries(MatrixPoly::is_symmetric) } else { t.all_entries(MatrixPoly::is_skew) };
            if !ok {
                let want = if symmetric { "symmetric" } else { "skew" };
                return Err(Error::MalformedCanonical(format!("{label}({i}) fiber matrices are not {want}")));
            }
            Ok(())
        };
        for (&i, t) in &self.s_list {
            check("S", i, t, 2 * i, s_sym)?;
        }
        for (&i, t) in &self.a_list {
            check("A", i, t, 2 * i + 1, a_sym)?;
        }
        Ok(())
    }

    /// The operator denoted by this form, in normal form.
    pub fn expand(&self) -> Result<OperatorNF> {
        self.validate()?;
        let mut plain = Plain::new();
        for (&i, t) in &self.s_list {
            add_s_block(&mut plain, i, t);
        }
        for (&i, t) in &self.a_list {
            add_a_block(&mut plain, i, t);
        }
        Ok(OperatorNF::from_terms(self.dim, self.rank, plain))
    }
}

/// `sum d^alpha S d^gamma` over all strings of `i` contracted indices on each
/// side; strings with counts `alpha` occur `multinomial(alpha)` times.
fn add_s_block(out: &mut Plain, i: usize, s: &SymTensor) {
    for (mu, m) in s.iter() {
        for alpha in mu.sub_indices_of_order(i) {
            let gamma = mu.checked_sub(&alpha).expect("sub-index");
            let w = Rational::from_integer(alpha.multinomial() * gamma.multinomial());
            add_sandwich(out, &alpha, m, &gamma, &w);
        }
    }
}

/// `sum d^alpha (d_c A + A d_c) d^gamma`.
fn add_a_block(out: &mut Plain, i: usize, a: &SymTensor) {
    for (mu, m) in a.iter() {
        for c in 0..mu.dim() {
            let Some(rest) = mu.with_decrement(c) else { continue };
            for alpha in rest.sub_indices_of_order(i) {
                let gamma = rest.checked_sub(&alpha).expect("sub-index");
                let w = Rational::from_integer(alpha.multinomial() * gamma.multinomial());
                add_sandwich(out, &alpha.with_increment(c), m, &gamma, &w);
                add_sandwich(out, &alpha, m, &gamma.with_increment(c), &w);
            }
        }
    }
}

fn check_class(l: &OperatorNF, class: Class) -> Result<()> {
    match class {
        Class::SelfAdjoint if !l.is_self_adjoint() => Err(Error::NotSelfAdjoint),
        Class::SkewAdjoint if !l.is_skew_adjoint() => Err(Error::NotSkewAdjoint),
        _ => Ok(()),
    }
}

/// Peels the canonical tensors off an operator of the given class.
pub fn extract_canonical(l: &OperatorNF, class: Class) -> Result<CanonicalForm> {
    check_class(l, class)?;
    let mut form = CanonicalForm::empty(class, l.dim(), l.rank());
    let mut rem = l.clone();
    while let Some(k) = rem.order() {
        let top = rem.leading_symbol().expect("nonzero").clone();
        let parity = if k % 2 == 0 { 1 } else { -1 };
        let eps = Rational::from_integer((class.sign() * parity).into());
        if !top.all_entries(|m| *m == m.transpose().scale(&eps)) {
            return Err(Error::SymmetryViolation { order: k });
        }
        let mut block = Plain::new();
        if k % 2 == 0 {
            add_s_block(&mut block, k / 2, &top);
            form.set_s(k / 2, top);
        } else {
            let a = top.map(|m| m.scale(&half()));
            add_a_block(&mut block, k / 2, &a);
            form.set_a(k / 2, a);
        }
        let next = rem.sub(&OperatorNF::from_terms(l.dim(), l.rank(), block))?;
        if next.order().is_some_and(|n| n >= k) {
            return Err(Error::SymmetryViolation { order: k });
        }
        rem = next;
    }
    Ok(form)
}

/// Canonical forms of the self-adjoint and skew-adjoint parts.
pub fn canonical_pair(l: &OperatorNF) -> Result<(CanonicalForm, CanonicalForm)> {
    let (plus, minus) = l.split();
    Ok((extract_canonical(&plus, Class::SelfAdjoint)?, extract_canonical(&minus, Class::SkewAdjoint)?))
}

/// `P - P(1)` for a scalar operator `P`.
pub fn strip_constant_part(l: &OperatorNF) -> Result<OperatorNF> {
    if l.rank() != 1 {
        return Err(Error::RequiresScalar(l.rank()));
    }
    let p1 = l.apply(&[ScalarPoly::one()])?.remove(0);
    l.sub(&OperatorNF::mult_scalar(l.dim(), 1, p1))
}

/// Operator-valued symmetric 2-tensor `Q` with `L = sum_{a,b} d_a Q^{ab} d_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergenceFactor {
    dim: usize,
    rank: usize,
    /// Keyed by `(a, b)` with `a <= b`; zero entries omitted.
    q: BTreeMap<(usize, usize), OperatorNF>,
}

impl DivergenceFactor {
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `Q^{ab}`, symmetric in `(a, b)`.
    pub fn get(&self, a: usize, b: usize) -> OperatorNF {
        self.q
            .get(&(a.min(b), a.max(b)))
            .cloned()
            .unwrap_or_else(|| OperatorNF::zero(self.dim, self.rank))
    }

    /// Nonzero entries with `a <= b`.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &OperatorNF)> {
        self.q.iter()
    }

    /// `sum_{a,b} d_a o Q^{ab} o d_b` over all ordered pairs.
    pub fn expand(&self) -> OperatorNF {
        let mut out = OperatorNF::zero(self.dim, self.rank);
        for a in 0..self.dim {
            for b in 0..self.dim {
                let q = self.get(a, b);
                if q.is_zero() {
                    continue;
                }
                let da = OperatorNF::derivative(self.dim, self.rank, a);
                let db = OperatorNF::derivative(self.dim, self.rank, b);
                let term = da.compose(&q).and_then(|t| t.compose(&db)).expect("same shape");
                out = out.add(&term).expect("same shape");
            }
        }
        out
    }
}

/// Writes a self-adjoint scalar operator that kills constants as
/// `f -> d_a (Q^{ab} (d_b f))`.
pub fn factor_divergence(l: &OperatorNF) -> Result<DivergenceFactor> {
    if l.rank() != 1 {
        return Err(Error::RequiresScalar(l.rank()));
    }
    if !l.is_self_adjoint() {
        return Err(Error::NotSelfAdjoint);
    }
    if !l.apply(&[ScalarPoly::one()])?[0].is_zero() {
        return Err(Error::ConstantsNotAnnihilated);
    }
    if l.order().is_none_or(|k| k < 2) {
        return Err(Error::OrderTooLow);
    }
    let (dim, rank) = (l.dim(), l.rank());
    let form = extract_canonical(l, Class::SelfAdjoint)?;
    debug_assert!(form.s_list().get(&0).is_none());

    let mut q = BTreeMap::new();
    for a in 0..dim {
        for b in a..dim {
            let mut plain = Plain::new();
            let pair = MultiIndex::unit(dim, a).add(&MultiIndex::unit(dim, b));
            for (&i, s) in form.s_list() {
                if i == 0 {
                    continue;
                }
                // S^{a A C b} with the leading `a` and trailing `b` split off
                for (mu, m) in s.iter() {
                    let Some(inner) = mu.checked_sub(&pair) else { continue };
                    for alpha in inner.sub_indices_of_order(i - 1) {
                        let gamma = inner.checked_sub(&alpha).expect("sub-index");
                        let w = Rational::from_integer(alpha.multinomial() * gamma.multinomial());
                        add_sandwich(&mut plain, &alpha, m, &gamma, &w);
                    }
                }
            }
            let op = OperatorNF::from_terms(dim, rank, plain);
            if !op.is_zero() {
                q.insert((a, b), op);
            }
        }
    }
    Ok(DivergenceFactor { dim, rank, q })
}

/// Convenience: the `S_(i)` tensor made of a single component.
pub fn single_component(dim: usize, alpha: MultiIndex, m: MatrixPoly) -> SymTensor {
    let mut t = SymTensor::zero(dim, m.rank(), alpha.order());
    t.add_at(alpha, &m);
    t
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{JetVar, Symbol};
    use crate::rat;

    fn mi(c: &[u32]) -> MultiIndex {
        MultiIndex::from_counts(c.to_vec())
    }
    fn sc(p: ScalarPoly) -> MatrixPoly {
        MatrixPoly::scalar(1, p)
    }
    fn x0() -> ScalarPoly {
        ScalarPoly::coord(0)
    }
    fn u() -> ScalarPoly {
        ScalarPoly::jet(JetVar::base(&Symbol::scalar(0, "u", 0), &[], None, 1))
    }

    #[test]
    fn expand_examples() {
        let mut c = CanonicalForm::empty(Class::SelfAdjoint, 1, 1);
        c.set_s(1, single_component(1, mi(&[2]), MatrixPoly::identity(1)));
        assert_eq!(c.expand().unwrap(), OperatorNF::derivative_multi(1, &mi(&[2])));

        let mut c = CanonicalForm::empty(Class::SkewAdjoint, 1, 1);
        c.set_a(0, single_component(1, mi(&[1]), sc(x0().scale(&rat(1, 2)))));
        let expected = OperatorNF::from_terms(1, 1, [(mi(&[1]), sc(x0())), (mi(&[0]), sc(ScalarPoly::constant(rat(1, 2))))]);
        assert_eq!(c.expand().unwrap(), expected);
    }

    #[test]
    fn expand_rejects_bad_symmetry() {
        let mut c = CanonicalForm::empty(Class::SelfAdjoint, 1, 2);
        c.set_s(0, single_component(1, mi(&[0]), MatrixPoly::unit(2, 0, 1)));
        assert!(matches!(c.expand(), Err(Error::MalformedCanonical(_))));
        let mut c = CanonicalForm::empty(Class::SelfAdjoint, 1, 1);
        c.set_s(1, single_component(1, mi(&[1]), MatrixPoly::identity(1)));
        assert!(matches!(c.expand(), Err(Error::MalformedCanonical(_))));
    }

    #[test]
    fn extract_examples() {
        let d4 = OperatorNF::derivative_multi(1, &mi(&[4]));
        let c = extract_canonical(&d4, Class::SelfAdjoint).unwrap();
        assert_eq!(c.s_list().len(), 1);
        assert_eq!(c.s_list()[&2].get(&mi(&[4])), Some(&MatrixPoly::identity(1)));
        assert!(c.a_list().is_empty());

        let skew = OperatorNF::from_terms(1, 1, [(mi(&[1]), sc(x0())), (mi(&[0]), sc(ScalarPoly::constant(rat(1, 2))))]);
        let c = extract_canonical(&skew, Class::SkewAdjoint).unwrap();
        assert!(c.s_list().is_empty());
        assert_eq!(c.a_list()[&0].get(&mi(&[1])), Some(&sc(x0().scale(&rat(1, 2)))));

        assert_eq!(extract_canonical(&skew, Class::SelfAdjoint), Err(Error::NotSelfAdjoint));
        assert_eq!(extract_canonical(&d4, Class::SkewAdjoint), Err(Error::NotSkewAdjoint));
        assert!(extract_canonical(&OperatorNF::zero(1, 1), Class::SelfAdjoint).unwrap().is_empty());
    }

    #[test]
    fn pair_of_x_d() {
        let xd = OperatorNF::from_terms(1, 1, [(mi(&[1]), sc(x0()))]);
        let (s, a) = canonical_pair(&xd).unwrap();
        assert_eq!(s.s_list()[&0].get(&mi(&[0])), Some(&sc(ScalarPoly::constant(rat(-1, 2)))));
        assert!(s.a_list().is_empty());
        assert_eq!(a.a_list()[&0].get(&mi(&[1])), Some(&sc(x0().scale(&rat(1, 2)))));
        assert!(a.s_list().is_empty());
        let dd = OperatorNF::derivative_multi(1, &mi(&[2]));
        let (s, a) = canonical_pair(&dd).unwrap();
        assert_eq!(s.s_list()[&1].get(&mi(&[2])), Some(&MatrixPoly::identity(1)));
        assert!(a.is_empty());
    }

    #[test]
    fn strip_examples() {
        let d = OperatorNF::derivative(1, 1, 0);
        let v = ScalarPoly::jet(JetVar::base(&Symbol::scalar(1, "v", 0), &[], None, 1));
        let p = d
            .compose(&OperatorNF::mult_scalar(1, 1, u()))
            .and_then(|t| t.compose(&d))
            .and_then(|t| t.add(&OperatorNF::mult_scalar(1, 1, v.clone())))
            .unwrap();
        let expected = OperatorNF::from_terms(1, 1, [(mi(&[2]), sc(u())), (mi(&[1]), sc(u().derive(0)))]);
        assert_eq!(strip_constant_part(&p).unwrap(), expected);
        assert!(strip_constant_part(&OperatorNF::mult_scalar(1, 1, v)).unwrap().is_zero());
        assert_eq!(strip_constant_part(&OperatorNF::zero(1, 2)), Err(Error::RequiresScalar(2)));
    }

    #[test]
    fn factor_examples() {
        let l = OperatorNF::from_terms(1, 1, [(mi(&[2]), sc(u())), (mi(&[1]), sc(u().derive(0)))]);
        let f = factor_divergence(&l).unwrap();
        assert_eq!(f.get(0, 0), OperatorNF::mult_scalar(1, 1, u()));
        assert_eq!(f.expand(), l);

        let d4 = OperatorNF::derivative_multi(1, &mi(&[4]));
        let f = factor_divergence(&d4).unwrap();
        assert_eq!(f.get(0, 0), OperatorNF::derivative_multi(1, &mi(&[2])));

        let lap = OperatorNF::from_terms(2, 1, [(mi(&[2, 0]), MatrixPoly::identity(1)), (mi(&[0, 2]), MatrixPoly::identity(1))]);
        let f = factor_divergence(&lap).unwrap();
        assert_eq!(f.get(0, 0), OperatorNF::identity(2, 1));
        assert_eq!(f.get(1, 1), OperatorNF::identity(2, 1));
        assert!(f.get(0, 1).is_zero());
        assert_eq!(f.expand(), lap);
    }

    #[test]
    fn factor_errors() {
        let d2 = OperatorNF::derivative_multi(1, &mi(&[2]));
        let shifted = d2.add(&OperatorNF::identity(1, 1)).unwrap();
        assert_eq!(factor_divergence(&shifted), Err(Error::ConstantsNotAnnihilated));
        assert_eq!(factor_divergence(&OperatorNF::derivative(1, 1, 0)), Err(Error::NotSelfAdjoint));
        assert_eq!(factor_divergence(&OperatorNF::zero(1, 1)), Err(Error::OrderTooLow));
        assert_eq!(factor_divergence(&OperatorNF::zero(1, 2)), Err(Error::RequiresScalar(2)));
    }
}
