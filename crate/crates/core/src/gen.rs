//! Seeded random generation of symbolic polynomials and operators, for
//! property tests and the verification commands.

use alloc::vec::Vec;

use rand::Rng;

use crate::jet::{JetVar, Symbol, Var};
use crate::matrix::MatrixPoly;
use crate::multi_index::MultiIndex;
use crate::operator::OperatorNF;
use crate::poly::{Monomial, ScalarPoly};
use crate::Rational;

#[derive(Clone, Debug)]
pub struct GenParams {
    pub max_order: usize,
    /// Allow coordinate symbols `x[a]` in coefficients.
    pub coordinates: bool,
    pub max_poly_terms: usize,
    pub max_monomial_degree: usize,
    pub max_jet_order: usize,
    /// Percent chance that a given coefficient component is nonzero.
    pub density: u32,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_order: 3,
            coordinates: false,
            max_poly_terms: 2,
            max_monomial_degree: 2,
            max_jet_order: 1,
            density: 40,
        }
    }
}

/// A small pool: scalar `u`, vector `T`, symmetric `S`, and a matrix-valued
/// `M` (skipped for rank 1 by the generators).
pub fn standard_symbols() -> Vec<Symbol> {
    alloc::vec![
        Symbol::scalar(0, "u", 0),
        Symbol::scalar(1, "T", 1),
        Symbol::new(2, "S", 2, true, false),
        Symbol::new(3, "M", 0, false, true),
    ]
}

pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    let n = rng.random_range(-max_num..=max_num);
    let d = rng.random_range(1..=max_den);
    Rational::new(n.into(), d.into())
}

fn nonzero_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    loop {
        let c = random_rational(rng, 5, 4);
        if c != Rational::from_integer(0.into()) {
            return c;
        }
    }
}

fn random_multi_index<R: Rng + ?Sized>(rng: &mut R, dim: usize, max_order: usize) -> MultiIndex {
    let order = rng.random_range(0..=max_order);
    let mut counts = alloc::vec![0u32; dim];
    for _ in 0..order {
        counts[rng.random_range(0..dim)] += 1;
    }
    MultiIndex::from_counts(counts)
}

fn random_var<R: Rng + ?Sized>(rng: &mut R, symbols: &[&Symbol], dim: usize, rank: usize, p: &GenParams) -> Var {
    if p.coordinates && (symbols.is_empty() || rng.random_range(0..4) == 0) {
        return Var::Coord(rng.random_range(0..dim) as u16);
    }
    let s = symbols[rng.random_range(0..symbols.len())];
    let slots: Vec<u16> = (0..s.arity()).map(|_| rng.random_range(0..dim) as u16).collect();
    let entry = s
        .is_matrix()
        .then(|| (rng.random_range(0..rank) as u16, rng.random_range(0..rank) as u16));
    Var::Jet(JetVar::new(s, &slots, entry, random_multi_index(rng, dim, p.max_jet_order)))
}

/// A random polynomial in jets of `symbols` (matrix symbols only if
/// `rank > 1`).
pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, symbols: &[Symbol], dim: usize, rank: usize, p: &GenParams) -> ScalarPoly {
    let pool: Vec<&Symbol> = symbols.iter().filter(|s| rank > 1 || !s.is_matrix()).collect();
    let mut out = ScalarPoly::zero();
    let n_terms = rng.random_range(1..=p.max_poly_terms.max(1));
    for _ in 0..n_terms {
        let degree = if pool.is_empty() && !p.coordinates { 0 } else { rng.random_range(0..=p.max_monomial_degree) };
        let m = Monomial::from_factors((0..degree).map(|_| (random_var(rng, &pool, dim, rank, p), 1)));
        out.add_term(nonzero_rational(rng), m);
    }
    out
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, symbols: &[Symbol], dim: usize, rank: usize, p: &GenParams) -> MatrixPoly {
    MatrixPoly::from_fn(rank, |_, _| {
        if rank == 1 || rng.random_range(0..2) == 0 {
            random_poly(rng, symbols, dim, rank, p)
        } else {
            ScalarPoly::zero()
        }
    })
}

/// A random operator of order at most `p.max_order`, with a nonzero
/// component at its (random) top order.
pub fn random_operator<R: Rng + ?Sized>(rng: &mut R, symbols: &[Symbol], dim: usize, rank: usize, p: &GenParams) -> OperatorNF {
    let top = rng.random_range(0..=p.max_order);
    let mut terms = Vec::new();
    for k in 0..=top {
        let indices = MultiIndex::all_of_order(dim, k);
        let forced = rng.random_range(0..indices.len());
        for (i, alpha) in indices.into_iter().enumerate() {
            if k == top && i == forced {
                let m = loop {
                    let m = random_matrix(rng, symbols, dim, rank, p);
                    if !m.is_zero() {
                        break m;
                    }
                };
                terms.push((alpha, m));
            } else if rng.random_range(0..100) < p.density {
                terms.push((alpha, random_matrix(rng, symbols, dim, rank, p)));
            }
        }
    }
    OperatorNF::from_terms(dim, rank, terms)
}
