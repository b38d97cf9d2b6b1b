//! Exact trigonometric polynomials on the torus `(R / 2 pi Z)^n`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::multi_index::MultiIndex;
use crate::{half, Rational};

/// `sum_k a_k cos(k.x) + b_k sin(k.x)` with rational `a_k`, `b_k`.
///
/// Frequencies are stored with their first nonzero component positive, and
/// the zero frequency carries no sine part, so every function has exactly
/// one representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TrigPoly {
    dim: usize,
    terms: BTreeMap<Vec<i64>, (Rational, Rational)>,
}

fn is_canonical(k: &[i64]) -> bool {
    k.iter().find(|&&c| c != 0).is_none_or(|&c| c > 0)
}

impl TrigPoly {
    pub fn zero(dim: usize) -> Self {
        TrigPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        let mut p = Self::zero(dim);
        p.add_cos(&alloc::vec![0; dim], c);
        p
    }

    /// `c * cos(k.x)`.
    pub fn cos(c: Rational, k: &[i64]) -> Self {
        let mut p = Self::zero(k.len());
        p.add_cos(k, c);
        p
    }

    /// `c * sin(k.x)`.
    pub fn sin(c: Rational, k: &[i64]) -> Self {
        let mut p = Self::zero(k.len());
        p.add_sin(k, c);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(frequency, cos coefficient, sin coefficient)` in frequency order.
    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &Rational, &Rational)> {
        self.terms.iter().map(|(k, (a, b))| (k.as_slice(), a, b))
    }

    fn entry(&mut self, k: Vec<i64>, cos: Rational, sin: Rational) {
        let e = self.terms.entry(k).or_insert_with(|| (Rational::zero(), Rational::zero()));
        e.0 += cos;
        e.1 += sin;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, (a, b)| !(a.is_zero() && b.is_zero()));
    }

    pub fn add_cos(&mut self, k: &[i64], c: Rational) {
        assert_eq!(k.len(), self.dim, "frequency dimension mismatch");
        let k = if is_canonical(k) { k.to_vec() } else { k.iter().map(|c| -c).collect() };
        self.entry(k, c, Rational::zero());
        self.prune();
    }

    pub fn add_sin(&mut self, k: &[i64], c: Rational) {
        assert_eq!(k.len(), self.dim, "frequency dimension mismatch");
        if k.iter().all(|&c| c == 0) {
            return;
        }
        if is_canonical(k) {
            self.entry(k.to_vec(), Rational::zero(), c);
        } else {
            self.entry(k.iter().map(|c| -c).collect(), Rational::zero(), -c);
        }
        self.prune();
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = TrigPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, (a, b))| (k.clone(), (a * c, b * c))).collect(),
        };
        out.prune();
        out
    }

    pub fn derive(&self, direction: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, (a, b)) in &self.terms {
            let kj = Rational::from_integer(k[direction].into());
            if kj.is_zero() {
                continue;
            }
            // d(a cos + b sin) = k_j (b cos - a sin)
            out.entry(k.clone(), b * &kj, -(a * &kj));
        }
        out.prune();
        out
    }

    pub fn derive_multi(&self, alpha: &MultiIndex) -> Self {
        let mut p = self.clone();
        for (dir, &count) in alpha.counts().iter().enumerate() {
            for _ in 0..count {
                p = p.derive(dir);
            }
        }
        p
    }

    /// Mean value over the torus, i.e. the integral in units of `(2 pi)^n`.
    pub fn integral(&self) -> Rational {
        self.terms
            .get(&alloc::vec![0; self.dim])
            .map(|(a, _)| a.clone())
            .unwrap_or_else(Rational::zero)
    }
}

impl Add<&TrigPoly> for TrigPoly {
    type Output = TrigPoly;
    fn add(mut self, rhs: &TrigPoly) -> TrigPoly {
        assert_eq!(self.dim, rhs.dim, "torus dimension mismatch");
        for (k, (a, b)) in &rhs.terms {
            self.entry(k.clone(), a.clone(), b.clone());
        }
        self.prune();
        self
    }
}

impl Sub<&TrigPoly> for TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        self + &(-rhs)
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        TrigPoly { dim: self.dim, terms: self.terms.iter().map(|(k, (a, b))| (k.clone(), (-a, -b))).collect() }
    }
}

impl Mul<&TrigPoly> for &TrigPoly {
    type Output = TrigPoly;
    /// Product-to-sum with exact halves.
    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        assert_eq!(self.dim, rhs.dim, "torus dimension mismatch");
        let mut out = TrigPoly::zero(self.dim);
        let h = half();
        for (k1, (a1, b1)) in &self.terms {
            for (k2, (a2, b2)) in &rhs.terms {
                let plus: Vec<i64> = k1.iter().zip(k2).map(|(x, y)| x + y).collect();
                let minus: Vec<i64> = k1.iter().zip(k2).map(|(x, y)| x - y).collect();
                let aa = a1 * a2 * &h;
                let bb = b1 * b2 * &h;
                let ab = a1 * b2 * &h;
                let ba = b1 * a2 * &h;
                out.add_cos(&minus, &aa + &bb);
                out.add_cos(&plus, aa - bb);
                out.add_sin(&plus, &ab + &ba);
                out.add_sin(&minus, ba - ab);
            }
        }
        out
    }
}

impl Mul<&TrigPoly> for TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        &self * rhs
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        let mut put = |f: &mut fmt::Formatter<'_>, c: &Rational, func: &str, k: &[i64]| -> fmt::Result {
            if c.is_zero() {
                return Ok(());
            }
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if k.iter().all(|&v| v == 0) {
                return write!(f, "{}", c.abs());
            }
            write!(f, "{}*{func}(", c.abs())?;
            for (i, v) in k.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str(")")
        };
        for (k, (a, b)) in &self.terms {
            put(f, a, "cos", k)?;
            put(f, b, "sin", k)?;
        }
        Ok(())
    }
}
