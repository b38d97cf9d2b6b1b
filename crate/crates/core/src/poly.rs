//! Exact-rational polynomials in coordinates and jet variables.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use crate::jet::{JetVar, Var};
use crate::Rational;

/// A power product of variables, stored sorted by variable with positive
/// exponents.
///
/// Monomials compare graded-lexicographically: total degree first, then
/// lexicographically on exponent vectors with earlier variables dominant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    factors: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial { degree: 1, factors: alloc::vec![(v, 1)] }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Var, u32)>) -> Self {
        factors.into_iter().fold(Monomial::one(), |m, (v, e)| {
            if e == 0 {
                m
            } else {
                m.mul(&Monomial { degree: e, factors: alloc::vec![(v, e)] })
            }
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ea) = &self.factors[i];
            let (b, eb) = &other.factors[j];
            match a.cmp(b) {
                Ordering::Less => {
                    factors.push((a.clone(), *ea));
                    i += 1;
                }
                Ordering::Greater => {
                    factors.push((b.clone(), *eb));
                    j += 1;
                }
                Ordering::Equal => {
                    factors.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        factors.extend_from_slice(&self.factors[i..]);
        factors.extend_from_slice(&other.factors[j..]);
        Monomial { degree: self.degree + other.degree, factors }
    }

    /// The monomial with one power of factor `idx` removed.
    fn lowered(&self, idx: usize) -> Monomial {
        let mut factors = self.factors.clone();
        if factors[idx].1 == 1 {
            factors.remove(idx);
        } else {
            factors[idx].1 -= 1;
        }
        Monomial { degree: self.degree - 1, factors }
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.factors.iter().map(|(v, _)| v)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            for ((a, ea), (b, eb)) in self.factors.iter().zip(&other.factors) {
                match a.cmp(b) {
                    // the earlier variable is present only on the left
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => {}
                        o => return o,
                    },
                }
            }
            self.factors.len().cmp(&other.factors.len())
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial with exact rational coefficients; zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ScalarPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl ScalarPoly {
    pub fn zero() -> Self {
        ScalarPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ScalarPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::term(Rational::one(), Monomial::var(v))
    }

    pub fn jet(j: JetVar) -> Self {
        Self::var(Var::Jet(j))
    }

    pub fn coord(a: usize) -> Self {
        Self::var(Var::Coord(a as u16))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value if this polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.terms.keys().flat_map(|m| m.vars())
    }

    pub fn has_coordinates(&self) -> bool {
        self.vars().any(|v| matches!(v, Var::Coord(_)))
    }

    pub fn add_term(&mut self, c: Rational, m: Monomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ScalarPoly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    /// Partial derivative in `direction`: shifts jets, `d_a x_b = delta_ab`.
    pub fn derive(&self, direction: usize) -> Self {
        let mut out = ScalarPoly::zero();
        for (m, c) in &self.terms {
            for (idx, (v, e)) in m.factors.iter().enumerate() {
                let rest = m.lowered(idx);
                let coeff = c * Rational::from_integer((*e).into());
                match v {
                    Var::Coord(b) => {
                        if *b as usize == direction {
                            out.add_term(coeff, rest);
                        }
                    }
                    Var::Jet(j) => {
                        let dm = Monomial::var(Var::Jet(j.derived(direction)));
                        out.add_term(coeff, rest.mul(&dm));
                    }
                }
            }
        }
        out
    }

    /// Iterated derivative `d^alpha`.
    pub fn derive_multi(&self, alpha: &crate::MultiIndex) -> Self {
        let mut p = self.clone();
        for (dir, &count) in alpha.counts().iter().enumerate() {
            for _ in 0..count {
                if p.is_zero() {
                    return p;
                }
                p = p.derive(dir);
            }
        }
        p
    }

    /// Evaluates into any commutative ring given images of the variables.
    pub fn eval<R, E>(&self, mut var_image: impl FnMut(&Var) -> core::result::Result<R, E>, embed: impl Fn(&Rational) -> R) -> core::result::Result<R, E>
    where
        R: Clone + for<'a> Add<&'a R, Output = R> + for<'a> Mul<&'a R, Output = R>,
    {
        let mut acc = embed(&Rational::zero());
        for (m, c) in &self.terms {
            let mut t = embed(c);
            for (v, e) in m.factors() {
                let img = var_image(v)?;
                for _ in 0..*e {
                    t = t * &img;
                }
            }
            acc = acc + &t;
        }
        Ok(acc)
    }
}

impl fmt::Display for ScalarPoly {
    /// Terms print in descending monomial order as `c*m`, with unit
    /// coefficients and the zero polynomial printed as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a ScalarPoly> for &ScalarPoly {
    type Output = ScalarPoly;
    fn add(self, rhs: &'a ScalarPoly) -> ScalarPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Add<&'a ScalarPoly> for ScalarPoly {
    type Output = ScalarPoly;
    fn add(mut self, rhs: &'a ScalarPoly) -> ScalarPoly {
        self += rhs;
        self
    }
}

impl Add for ScalarPoly {
    type Output = ScalarPoly;
    fn add(mut self, rhs: ScalarPoly) -> ScalarPoly {
        self += &rhs;
        self
    }
}

impl<'a> AddAssign<&'a ScalarPoly> for ScalarPoly {
    fn add_assign(&mut self, rhs: &'a ScalarPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(c.clone(), m.clone());
        }
    }
}

impl<'a> SubAssign<&'a ScalarPoly> for ScalarPoly {
    fn sub_assign(&mut self, rhs: &'a ScalarPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(-c, m.clone());
        }
    }
}

impl<'a> Sub<&'a ScalarPoly> for &ScalarPoly {
    type Output = ScalarPoly;
    fn sub(self, rhs: &'a ScalarPoly) -> ScalarPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for ScalarPoly {
    type Output = ScalarPoly;
    fn sub(mut self, rhs: ScalarPoly) -> ScalarPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &ScalarPoly {
    type Output = ScalarPoly;
    fn neg(self) -> ScalarPoly {
        ScalarPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for ScalarPoly {
    type Output = ScalarPoly;
    fn neg(self) -> ScalarPoly {
        -&self
    }
}

impl<'a> Mul<&'a ScalarPoly> for &ScalarPoly {
    type Output = ScalarPoly;
    fn mul(self, rhs: &'a ScalarPoly) -> ScalarPoly {
        let mut out = ScalarPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ca * cb, ma.mul(mb));
            }
        }
        out
    }
}

impl<'a> Mul<&'a ScalarPoly> for ScalarPoly {
    type Output = ScalarPoly;
    fn mul(self, rhs: &'a ScalarPoly) -> ScalarPoly {
        &self * rhs
    }
}

impl Mul for ScalarPoly {
    type Output = ScalarPoly;
    fn mul(self, rhs: ScalarPoly) -> ScalarPoly {
        &self * &rhs
    }
}

impl From<Rational> for ScalarPoly {
    fn from(c: Rational) -> Self {
        ScalarPoly::constant(c)
    }
}
