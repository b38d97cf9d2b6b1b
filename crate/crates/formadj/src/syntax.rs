//! Abstract syntax and parser for the operator expression language.
//!
//! ```text
//! program = {decl ";"} expr
//! decl    = "dim" int | "rank" int | "sym" name "(" int ")" ["symmetric"] ["matrix"]
//! expr    = ["+"|"-"] term {("+"|"-") term}
//! term    = [rational] {factor}            (at least one of the two)
//! factor  = "D[" idx "]" | "x[" idx "]" | "E[" int "," int "]"
//!         | "d(" comp "," "[" int {"," int} "]" ")" | comp | "(" expr ")"
//! comp    = name ["[" idx {"," idx} "]"] ["{" int "," int "}"]
//! idx     = letter | int
//! ```
//!
//! Juxtaposition is composition and each derivative acts on everything to
//! its right. An index letter occurring twice in a product is summed over
//! `0..dim`; a letter may not occur more than twice, and no letter may be
//! left free at the top level.

use std::collections::{BTreeMap, BTreeSet};

use formadj_core::{Rational, Symbol};
use num_bigint::BigInt;

use crate::lex::{Cursor, Pos, SyntaxError, Tok};
use crate::session::{SessionDecl, RESERVED};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Idx {
    Letter(char, Pos),
    Num(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Deriv(Idx),
    Coord(Idx),
    /// Constant elementary fiber matrix.
    Unit(usize, usize),
    Sym {
        symbol: Symbol,
        slots: Vec<Idx>,
        entry: Option<(usize, usize)>,
        deriv: Option<Vec<u32>>,
    },
    Paren(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub negated: bool,
    pub coeff: Option<Rational>,
    pub factors: Vec<Factor>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<Term>,
}

/// Parses a program into its session and expression.
pub fn parse(src: &str) -> Result<(SessionDecl, Expr), SyntaxError> {
    let mut cur = Cursor::new(src)?;
    let mut decl = SessionDecl::default();
    loop {
        if cur.at_ident("dim") && matches!(cur.peek_at(1), Tok::Int(_)) {
            cur.bump();
            let (n, p) = cur.expect_usize()?;
            if n == 0 {
                return Err(SyntaxError::new(p, "dimension must be at least 1"));
            }
            decl.dim = n;
        } else if cur.at_ident("rank") && matches!(cur.peek_at(1), Tok::Int(_)) {
            cur.bump();
            let (n, p) = cur.expect_usize()?;
            if n == 0 {
                return Err(SyntaxError::new(p, "fiber rank must be at least 1"));
            }
            decl.rank = n;
        } else if cur.at_ident("sym") && matches!(cur.peek_at(1), Tok::Ident(_)) {
            cur.bump();
            let (name, p) = cur.expect_ident()?;
            cur.expect_punct('(')?;
            let (arity, _) = cur.expect_usize()?;
            cur.expect_punct(')')?;
            let (mut symmetric, mut matrix) = (false, false);
            loop {
                if cur.at_ident("symmetric") {
                    cur.bump();
                    symmetric = true;
                } else if cur.at_ident("matrix") {
                    cur.bump();
                    matrix = true;
                } else {
                    break;
                }
            }
            if RESERVED.contains(&name.as_str()) {
                return Err(SyntaxError::new(p, format!("`{name}` is reserved")));
            }
            if decl.declare(&name, arity, symmetric, matrix).is_none() {
                return Err(SyntaxError::new(p, format!("symbol `{name}` declared twice")));
            }
        } else {
            break;
        }
        cur.expect_punct(';')?;
    }
    if cur.at_eof() {
        return Err(cur.unexpected("an operator expression"));
    }
    let expr = {
        let mut p = Parser { cur: &mut cur, decl: &decl };
        p.expr()?
    };
    if !cur.at_eof() {
        return Err(cur.unexpected("an operator or end of input"));
    }
    let free = free_letters(&expr)?;
    if let Some(c) = free.first() {
        let pos = first_occurrence(&expr, *c).unwrap_or_default();
        return Err(SyntaxError::new(pos, format!("free index letter `{c}`")));
    }
    Ok((decl, expr))
}

struct Parser<'a> {
    cur: &'a mut Cursor,
    decl: &'a SessionDecl,
}

impl Parser<'_> {
    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut terms = Vec::new();
        let mut negated = false;
        if self.cur.eat_punct('-') {
            negated = true;
        } else {
            self.cur.eat_punct('+');
        }
        loop {
            terms.push(self.term(negated)?);
            if self.cur.eat_punct('+') {
                negated = false;
            } else if self.cur.eat_punct('-') {
                negated = true;
            } else {
                break;
            }
        }
        Ok(Expr { terms })
    }

    fn starts_factor(&self) -> bool {
        matches!(self.cur.peek(), Tok::Ident(_) | Tok::Punct('('))
    }

    fn term(&mut self, negated: bool) -> Result<Term, SyntaxError> {
        let pos = self.cur.pos();
        let coeff = if matches!(self.cur.peek(), Tok::Int(_)) { Some(self.rational()?) } else { None };
        let mut factors = Vec::new();
        while self.starts_factor() {
            factors.push(self.factor()?);
        }
        if coeff.is_none() && factors.is_empty() {
            return Err(self.cur.unexpected("a term"));
        }
        Ok(Term { negated, coeff, factors, pos })
    }

    fn rational(&mut self) -> Result<Rational, SyntaxError> {
        let (n, _) = self.cur.expect_int()?;
        let n: BigInt = n.parse().expect("digits");
        if self.cur.eat_punct('/') {
            let (d, p) = self.cur.expect_int()?;
            let d: BigInt = d.parse().expect("digits");
            if d == BigInt::from(0) {
                return Err(SyntaxError::new(p, "zero denominator"));
            }
            Ok(Rational::new(n, d))
        } else {
            Ok(Rational::from_integer(n))
        }
    }

    fn idx(&mut self) -> Result<Idx, SyntaxError> {
        match self.cur.bump() {
            (Tok::Ident(s), p) if s.len() == 1 && s.chars().all(|c| c.is_ascii_lowercase()) => {
                Ok(Idx::Letter(s.chars().next().unwrap(), p))
            }
            (Tok::Int(s), p) => {
                let v: usize = s.parse().map_err(|_| SyntaxError::new(p, "index too large"))?;
                if v >= self.decl.dim {
                    return Err(SyntaxError::new(p, format!("index {v} out of range for dimension {}", self.decl.dim)));
                }
                Ok(Idx::Num(v))
            }
            (t, p) => Err(SyntaxError::new(p, format!("expected an index letter or digit, found {t}"))),
        }
    }

    fn bracket_idx(&mut self) -> Result<Idx, SyntaxError> {
        self.cur.expect_punct('[')?;
        let i = self.idx()?;
        self.cur.expect_punct(']')?;
        Ok(i)
    }

    fn fiber_pair(&mut self, open: char, close: char) -> Result<(usize, usize), SyntaxError> {
        self.cur.expect_punct(open)?;
        let (r, p) = self.cur.expect_usize()?;
        self.cur.expect_punct(',')?;
        let (c, q) = self.cur.expect_usize()?;
        self.cur.expect_punct(close)?;
        for (v, pos) in [(r, p), (c, q)] {
            if v >= self.decl.rank {
                return Err(SyntaxError::new(pos, format!("fiber index {v} out of range for rank {}", self.decl.rank)));
            }
        }
        Ok((r, c))
    }

    fn factor(&mut self) -> Result<Factor, SyntaxError> {
        if self.cur.eat_punct('(') {
            let e = self.expr()?;
            self.cur.expect_punct(')')?;
            return Ok(Factor::Paren(e));
        }
        let (name, pos) = self.cur.expect_ident()?;
        match name.as_str() {
            "D" => Ok(Factor::Deriv(self.bracket_idx()?)),
            "x" => Ok(Factor::Coord(self.bracket_idx()?)),
            "E" => {
                let (r, c) = self.fiber_pair('[', ']')?;
                Ok(Factor::Unit(r, c))
            }
            "d" => {
                self.cur.expect_punct('(')?;
                let (n, p) = self.cur.expect_ident()?;
                let mut f = self.component(&n, p)?;
                self.cur.expect_punct(',')?;
                self.cur.expect_punct('[')?;
                let mut counts = Vec::new();
                loop {
                    let (c, p) = self.cur.expect_int()?;
                    counts.push(c.parse::<u32>().map_err(|_| SyntaxError::new(p, "derivative count too large"))?);
                    if !self.cur.eat_punct(',') {
                        break;
                    }
                }
                let p = self.cur.expect_punct(']')?;
                self.cur.expect_punct(')')?;
                if counts.len() != self.decl.dim {
                    return Err(SyntaxError::new(p, format!("derivative counts need {} entries", self.decl.dim)));
                }
                if let Factor::Sym { deriv, .. } = &mut f {
                    *deriv = Some(counts);
                }
                Ok(f)
            }
            _ => self.component(&name, pos),
        }
    }

    fn component(&mut self, name: &str, pos: Pos) -> Result<Factor, SyntaxError> {
        let symbol = self
            .decl
            .lookup(name)
            .cloned()
            .ok_or_else(|| SyntaxError::new(pos, format!("unknown symbol `{name}`")))?;
        let mut slots = Vec::new();
        if self.cur.at_punct('[') {
            self.cur.bump();
            loop {
                slots.push(self.idx()?);
                if !self.cur.eat_punct(',') {
                    break;
                }
            }
            self.cur.expect_punct(']')?;
        }
        if slots.len() != symbol.arity() {
            return Err(SyntaxError::new(
                pos,
                format!("`{name}` takes {} indices, got {}", symbol.arity(), slots.len()),
            ));
        }
        let entry = if self.cur.at_punct('{') {
            if !symbol.is_matrix() {
                return Err(SyntaxError::new(self.cur.pos(), format!("`{name}` is not matrix valued")));
            }
            Some(self.fiber_pair('{', '}')?)
        } else {
            None
        };
        Ok(Factor::Sym { symbol, slots, entry, deriv: None })
    }
}

fn factor_letters(f: &Factor, out: &mut Vec<(char, Pos)>) {
    let mut push = |i: &Idx| {
        if let Idx::Letter(c, p) = i {
            out.push((*c, *p));
        }
    };
    match f {
        Factor::Deriv(i) | Factor::Coord(i) => push(i),
        Factor::Sym { slots, .. } => slots.iter().for_each(push),
        Factor::Unit(..) | Factor::Paren(_) => {}
    }
}

/// Letter occurrence counts in a product, including free letters of
/// parenthesized factors.
pub(crate) fn term_letter_counts(t: &Term) -> Result<BTreeMap<char, (usize, Pos)>, SyntaxError> {
    let mut counts: BTreeMap<char, (usize, Pos)> = BTreeMap::new();
    for f in &t.factors {
        let mut occ = Vec::new();
        factor_letters(f, &mut occ);
        if let Factor::Paren(e) = f {
            for c in free_letters(e)? {
                occ.push((c, first_occurrence(e, c).unwrap_or(t.pos)));
            }
        }
        for (c, p) in occ {
            let e = counts.entry(c).or_insert((0, p));
            e.0 += 1;
            if e.0 > 2 {
                return Err(SyntaxError::new(p, format!("index letter `{c}` used more than twice in one product")));
            }
        }
    }
    Ok(counts)
}

/// Letters occurring exactly once in each product of `e`.
pub(crate) fn free_letters(e: &Expr) -> Result<BTreeSet<char>, SyntaxError> {
    let mut result: Option<BTreeSet<char>> = None;
    for t in &e.terms {
        let free: BTreeSet<char> = term_letter_counts(t)?.into_iter().filter(|(_, (n, _))| *n == 1).map(|(c, _)| c).collect();
        match &result {
            None => result = Some(free),
            Some(r) if *r != free => {
                return Err(SyntaxError::new(t.pos, "summands have different free index letters"));
            }
            Some(_) => {}
        }
    }
    Ok(result.unwrap_or_default())
}

fn first_occurrence(e: &Expr, c: char) -> Option<Pos> {
    for t in &e.terms {
        for f in &t.factors {
            let mut occ = Vec::new();
            factor_letters(f, &mut occ);
            if let Some((_, p)) = occ.into_iter().find(|(l, _)| *l == c) {
                return Some(p);
            }
            if let Factor::Paren(inner) = f {
                if let Some(p) = first_occurrence(inner, c) {
                    return Some(p);
                }
            }
        }
    }
    None
}
