//! Expansion of parsed expressions into operator normal form.

use std::collections::BTreeMap;

use formadj_core::{JetVar, MatrixPoly, MultiIndex, OperatorNF, ScalarPoly};
use num_traits::One;

use crate::lex::SyntaxError;
use crate::session::SessionDecl;
use crate::syntax::{term_letter_counts, Expr, Factor, Idx, Term};

type Env = BTreeMap<char, usize>;

/// Elaborates a parsed expression to normal form.
pub fn elaborate(expr: &Expr, decl: &SessionDecl) -> Result<OperatorNF, SyntaxError> {
    Elab { decl }.expr(expr, &mut Env::new())
}

/// Parses and elaborates a whole program.
pub fn parse_operator(src: &str) -> Result<(SessionDecl, OperatorNF), SyntaxError> {
    let (decl, expr) = crate::syntax::parse(src)?;
    let op = elaborate(&expr, &decl)?;
    Ok((decl, op))
}

struct Elab<'a> {
    decl: &'a SessionDecl,
}

impl Elab<'_> {
    fn expr(&self, e: &Expr, env: &mut Env) -> Result<OperatorNF, SyntaxError> {
        let mut acc = OperatorNF::zero(self.decl.dim, self.decl.rank);
        for t in &e.terms {
            let v = self.term(t, env)?;
            acc = acc.add(&v).expect("session shape");
        }
        Ok(acc)
    }

    fn term(&self, t: &Term, env: &mut Env) -> Result<OperatorNF, SyntaxError> {
        let summed: Vec<char> = term_letter_counts(t)?
            .into_iter()
            .filter(|(_, (n, _))| *n == 2)
            .map(|(c, _)| c)
            .collect();
        let saved: Vec<Option<usize>> = summed.iter().map(|c| env.get(c).copied()).collect();
        let mut acc = OperatorNF::zero(self.decl.dim, self.decl.rank);
        let total = self.decl.dim.pow(summed.len() as u32);
        for code in 0..total {
            let mut rest = code;
            for c in &summed {
                env.insert(*c, rest % self.decl.dim);
                rest /= self.decl.dim;
            }
            let mut prod = OperatorNF::identity(self.decl.dim, self.decl.rank);
            for f in &t.factors {
                let fo = self.factor(f, env)?;
                prod = prod.compose(&fo).expect("session shape");
            }
            acc = acc.add(&prod).expect("session shape");
        }
        for (c, old) in summed.iter().zip(saved) {
            match old {
                Some(v) => env.insert(*c, v),
                None => env.remove(c),
            };
        }
        let mut c = t.coeff.clone().unwrap_or_else(formadj_core::Rational::one);
        if t.negated {
            c = -c;
        }
        Ok(acc.scale(&c))
    }

    fn index(&self, i: &Idx, env: &Env) -> Result<usize, SyntaxError> {
        match i {
            Idx::Num(n) => Ok(*n),
            Idx::Letter(c, p) => env
                .get(c)
                .copied()
                .ok_or_else(|| SyntaxError::new(*p, format!("free index letter `{c}`"))),
        }
    }

    fn factor(&self, f: &Factor, env: &mut Env) -> Result<OperatorNF, SyntaxError> {
        let (dim, rank) = (self.decl.dim, self.decl.rank);
        Ok(match f {
            Factor::Deriv(i) => OperatorNF::derivative(dim, rank, self.index(i, env)?),
            Factor::Coord(i) => OperatorNF::mult_scalar(dim, rank, ScalarPoly::coord(self.index(i, env)?)),
            Factor::Unit(r, c) => OperatorNF::mult(dim, MatrixPoly::unit(rank, *r, *c)),
            Factor::Paren(e) => self.expr(e, env)?,
            Factor::Sym { symbol, slots, entry, deriv } => {
                let slots = slots
                    .iter()
                    .map(|i| self.index(i, env).map(|v| v as u16))
                    .collect::<Result<Vec<_>, _>>()?;
                let deriv = deriv.clone().map_or_else(|| MultiIndex::zero(dim), MultiIndex::from_counts);
                let jet = |e: Option<(u16, u16)>| ScalarPoly::jet(JetVar::new(symbol, &slots, e, deriv.clone()));
                let m = match (symbol.is_matrix(), entry) {
                    (true, None) => MatrixPoly::from_fn(rank, |r, c| jet(Some((r as u16, c as u16)))),
                    (true, Some((r, c))) => MatrixPoly::scalar(rank, jet(Some((*r as u16, *c as u16)))),
                    (false, _) => MatrixPoly::scalar(rank, jet(None)),
                };
                OperatorNF::mult(dim, m)
            }
        })
    }
}
