//! Canonical text serializations of operators, canonical forms, divergence
//! factors and oracle reports, and parsers for the first two.
//!
//! Operator document:
//!
//! ```text
//! operator dim=2 rank=1
//! order 2
//!   [1,1]: S[0,1]
//! order 0
//!   [0,0]: R - 1/2*d(T[0],[1,0])
//! ```
//!
//! Orders descend, multi-indices (derivative counts) ascend, each entry is
//! the symmetric-tensor component, and rank > 1 entries print as row-major
//! nested lists `[[a, b], [c, d]]`.

use std::fmt::Write;

use formadj_core::oracle::AdjointReport;
use formadj_core::{CanonicalForm, Class, DivergenceFactor, JetVar, MatrixPoly, Monomial, MultiIndex, OperatorNF, Rational, ScalarPoly, SymTensor, Var};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::lex::{Cursor, Pos, SyntaxError, Tok};
use crate::session::SessionDecl;

pub fn matrix_text(m: &MatrixPoly) -> String {
    if m.rank() == 1 {
        return m.get(0, 0).to_string();
    }
    let rows: Vec<String> = (0..m.rank())
        .map(|i| {
            let row: Vec<String> = (0..m.rank()).map(|j| m.get(i, j).to_string()).collect();
            format!("[{}]", row.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn tensor_lines(out: &mut String, t: &SymTensor, indent: &str) {
    for (alpha, m) in t.iter() {
        let _ = writeln!(out, "{indent}{alpha}: {}", matrix_text(m));
    }
}

fn operator_body(out: &mut String, op: &OperatorNF, indent: &str) {
    for t in op.tensors().rev() {
        let _ = writeln!(out, "{indent}order {}", t.order());
        tensor_lines(out, t, &format!("{indent}  "));
    }
}

pub fn operator_doc(op: &OperatorNF) -> String {
    let mut out = format!("operator dim={} rank={}\n", op.dim(), op.rank());
    operator_body(&mut out, op, "");
    out
}

pub fn canonical_doc(c: &CanonicalForm) -> String {
    let mut out = format!("canonical {} dim={} rank={}\n", c.class().name(), c.dim(), c.rank());
    for (i, t) in c.s_list() {
        let _ = writeln!(out, "S({i})");
        tensor_lines(&mut out, t, "  ");
    }
    for (i, t) in c.a_list() {
        let _ = writeln!(out, "A({i})");
        tensor_lines(&mut out, t, "  ");
    }
    out
}

pub fn divergence_doc(f: &DivergenceFactor) -> String {
    let mut out = format!("divergence dim={} rank={}\n", f.dim(), f.rank());
    for ((a, b), q) in f.entries() {
        let _ = writeln!(out, "Q({a},{b})");
        operator_body(&mut out, q, "  ");
    }
    out
}

/// `(2pi)^n`, the unit of every printed torus integral.
pub fn integral_units(dim: usize) -> String {
    format!("(2pi)^{dim}")
}

pub fn report_text(r: &AdjointReport) -> String {
    let mut out = String::new();
    let units = integral_units(r.dim);
    for t in &r.trials {
        let verdict = if t.passed() { "ok" } else { "FAIL" };
        let _ = writeln!(out, "seed={} trial={} delta={}*{units} {verdict}", r.seed, t.index, t.delta);
    }
    let passed = r.trials.iter().filter(|t| t.passed()).count();
    let verdict = if r.passed() { "pass" } else { "fail" };
    let _ = writeln!(out, "summary: {verdict} ({passed}/{} trials with delta = 0)", r.trials.len());
    out
}

fn monomial_expr(m: &Monomial) -> Vec<String> {
    let mut out = Vec::new();
    for (v, e) in m.factors() {
        for _ in 0..*e {
            out.push(v.to_string());
        }
    }
    out
}

/// The operator as an expression in the input language (concrete indices,
/// plain coefficients of `D` strings, fiber placement through `E[i,j]`).
pub fn expression_form(op: &OperatorNF) -> String {
    let mut terms: Vec<(bool, String)> = Vec::new();
    for (alpha, c) in op.terms().into_iter().rev() {
        let derivs: Vec<String> = alpha.indices().iter().map(|a| format!("D[{a}]")).collect();
        for i in 0..op.rank() {
            for j in 0..op.rank() {
                let p = c.get(i, j);
                for (m, k) in p.terms().rev() {
                    let mut factors = monomial_expr(m);
                    if op.rank() > 1 {
                        factors.push(format!("E[{i},{j}]"));
                    }
                    factors.extend(derivs.iter().cloned());
                    let abs = k.abs();
                    let mut s = String::new();
                    if !abs.is_one() || factors.is_empty() {
                        s.push_str(&abs.to_string());
                    }
                    for f in factors {
                        if !s.is_empty() {
                            s.push(' ');
                        }
                        s.push_str(&f);
                    }
                    terms.push((k.is_negative(), s));
                }
            }
        }
    }
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (n, (neg, s)) in terms.into_iter().enumerate() {
        match (n, neg) {
            (0, true) => out.push_str("- "),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&s);
    }
    out
}

/// Reads text in the canonical polynomial form.
pub fn parse_poly(src: &str, decl: &SessionDecl) -> Result<ScalarPoly, SyntaxError> {
    let mut cur = Cursor::new(src)?;
    let p = PolyParser { decl, line: 1 }.poly(&mut cur)?;
    if !cur.at_eof() {
        return Err(cur.unexpected("end of polynomial"));
    }
    Ok(p)
}

struct PolyParser<'a> {
    decl: &'a SessionDecl,
    line: usize,
}

impl PolyParser<'_> {
    fn err(&self, pos: Pos, msg: impl Into<String>) -> SyntaxError {
        SyntaxError::new(Pos { line: self.line, col: pos.col }, msg)
    }

    fn lift(&self, e: SyntaxError) -> SyntaxError {
        self.err(e.pos, e.msg)
    }

    fn poly(&self, cur: &mut Cursor) -> Result<ScalarPoly, SyntaxError> {
        let mut out = ScalarPoly::zero();
        let mut neg = cur.eat_punct('-');
        loop {
            let (c, m) = self.term(cur)?;
            out.add_term(if neg { -c } else { c }, m);
            if cur.eat_punct('+') {
                neg = false;
            } else if cur.eat_punct('-') {
                neg = true;
            } else {
                return Ok(out);
            }
        }
    }

    fn term(&self, cur: &mut Cursor) -> Result<(Rational, Monomial), SyntaxError> {
        let mut c = Rational::one();
        let mut m = Monomial::one();
        loop {
            if let Tok::Int(_) = cur.peek() {
                let (n, _) = cur.expect_int().map_err(|e| self.lift(e))?;
                let mut q = Rational::from_integer(n.parse::<BigInt>().expect("digits"));
                if cur.eat_punct('/') {
                    let (d, p) = cur.expect_int().map_err(|e| self.lift(e))?;
                    let d: BigInt = d.parse().expect("digits");
                    if d.is_zero() {
                        return Err(self.err(p, "zero denominator"));
                    }
                    q /= Rational::from_integer(d);
                }
                c *= q;
            } else {
                let v = self.var(cur)?;
                let e = if cur.eat_punct('^') {
                    let (e, p) = cur.expect_int().map_err(|e| self.lift(e))?;
                    e.parse::<u32>().map_err(|_| self.err(p, "exponent too large"))?
                } else {
                    1
                };
                m = m.mul(&Monomial::from_factors([(v, e)]));
            }
            if !cur.eat_punct('*') {
                return Ok((c, m));
            }
        }
    }

    fn ints(&self, cur: &mut Cursor, open: char, close: char) -> Result<Vec<usize>, SyntaxError> {
        cur.expect_punct(open).map_err(|e| self.lift(e))?;
        let mut v = Vec::new();
        if cur.eat_punct(close) {
            return Ok(v);
        }
        loop {
            v.push(cur.expect_usize().map_err(|e| self.lift(e))?.0);
            if !cur.eat_punct(',') {
                break;
            }
        }
        cur.expect_punct(close).map_err(|e| self.lift(e))?;
        Ok(v)
    }

    fn var(&self, cur: &mut Cursor) -> Result<Var, SyntaxError> {
        let (name, pos) = cur.expect_ident().map_err(|e| self.lift(e))?;
        let dim = self.decl.dim;
        match name.as_str() {
            "x" => {
                let v = self.ints(cur, '[', ']')?;
                if v.len() != 1 || v[0] >= dim {
                    return Err(self.err(pos, "bad coordinate index"));
                }
                Ok(Var::Coord(v[0] as u16))
            }
            "d" => {
                cur.expect_punct('(').map_err(|e| self.lift(e))?;
                let (n, p) = cur.expect_ident().map_err(|e| self.lift(e))?;
                let base = self.component(cur, &n, p)?;
                cur.expect_punct(',').map_err(|e| self.lift(e))?;
                let counts = self.ints(cur, '[', ']')?;
                cur.expect_punct(')').map_err(|e| self.lift(e))?;
                if counts.len() != dim {
                    return Err(self.err(p, format!("derivative counts need {dim} entries")));
                }
                let deriv = MultiIndex::from_counts(counts.into_iter().map(|c| c as u32).collect());
                Ok(Var::Jet(JetVar::new(base.symbol(), base.slots(), base.entry(), deriv)))
            }
            _ => Ok(Var::Jet(self.component(cur, &name, pos)?)),
        }
    }

    fn component(&self, cur: &mut Cursor, name: &str, pos: Pos) -> Result<JetVar, SyntaxError> {
        let s = self.decl.lookup(name).ok_or_else(|| self.err(pos, format!("unknown symbol `{name}`")))?;
        let slots = if cur.at_punct('[') { self.ints(cur, '[', ']')? } else { Vec::new() };
        if slots.len() != s.arity() || slots.iter().any(|&v| v >= self.decl.dim) {
            return Err(self.err(pos, format!("bad indices for `{name}`")));
        }
        let entry = if cur.at_punct('{') { Some(self.ints(cur, '{', '}')?) } else { None };
        let entry = match (entry, s.is_matrix()) {
            (None, false) => None,
            (Some(e), true) if e.len() == 2 && e.iter().all(|&v| v < self.decl.rank) => Some((e[0] as u16, e[1] as u16)),
            _ => return Err(self.err(pos, format!("bad fiber entry for `{name}`"))),
        };
        let slots: Vec<u16> = slots.into_iter().map(|v| v as u16).collect();
        Ok(JetVar::base(s, &slots, entry, self.decl.dim))
    }

    fn matrix(&self, cur: &mut Cursor) -> Result<MatrixPoly, SyntaxError> {
        let rank = self.decl.rank;
        if rank == 1 {
            return Ok(MatrixPoly::scalar(1, self.poly(cur)?));
        }
        let mut entries = Vec::with_capacity(rank * rank);
        cur.expect_punct('[').map_err(|e| self.lift(e))?;
        for i in 0..rank {
            if i > 0 {
                cur.expect_punct(',').map_err(|e| self.lift(e))?;
            }
            cur.expect_punct('[').map_err(|e| self.lift(e))?;
            for j in 0..rank {
                if j > 0 {
                    cur.expect_punct(',').map_err(|e| self.lift(e))?;
                }
                entries.push(self.poly(cur)?);
            }
            cur.expect_punct(']').map_err(|e| self.lift(e))?;
        }
        cur.expect_punct(']').map_err(|e| self.lift(e))?;
        Ok(MatrixPoly::from_entries(rank, entries))
    }
}

enum Line {
    Header { kind: String, class: Option<Class>, dim: usize, rank: usize },
    Section { name: String, args: Vec<usize> },
    Component(MultiIndex, MatrixPoly),
}

fn parse_line(src: &str, line: usize, decl: &SessionDecl) -> Result<Line, SyntaxError> {
    let pp = PolyParser { decl, line };
    let lift = |e: SyntaxError| pp.lift(e);
    let mut cur = Cursor::new(src).map_err(lift)?;
    let out = if cur.at_punct('[') {
        let counts = pp.ints(&mut cur, '[', ']')?;
        if counts.len() != decl.dim {
            return Err(pp.err(cur.pos(), format!("multi-index needs {} entries", decl.dim)));
        }
        cur.expect_punct(':').map_err(lift)?;
        let m = pp.matrix(&mut cur)?;
        Line::Component(MultiIndex::from_counts(counts.into_iter().map(|c| c as u32).collect()), m)
    } else {
        let (name, pos) = cur.expect_ident().map_err(lift)?;
        match name.as_str() {
            "operator" | "canonical" | "divergence" => {
                let class = if name == "canonical" {
                    let (c, p) = cur.expect_ident().map_err(lift)?;
                    Some(match c.as_str() {
                        "self" => Class::SelfAdjoint,
                        "skew" => Class::SkewAdjoint,
                        _ => return Err(pp.err(p, format!("unknown class `{c}`"))),
                    })
                } else {
                    None
                };
                let mut field = |key: &str| -> Result<usize, SyntaxError> {
                    cur.expect_keyword(key).map_err(lift)?;
                    cur.expect_punct('=').map_err(lift)?;
                    Ok(cur.expect_usize().map_err(lift)?.0)
                };
                let dim = field("dim")?;
                let rank = field("rank")?;
                if (dim, rank) != (decl.dim, decl.rank) {
                    return Err(pp.err(pos, "document shape differs from the session"));
                }
                Line::Header { kind: name, class, dim, rank }
            }
            "order" => Line::Section { name, args: vec![cur.expect_usize().map_err(lift)?.0] },
            "S" | "A" | "Q" => Line::Section { name, args: pp.ints(&mut cur, '(', ')')? },
            _ => return Err(pp.err(pos, format!("unexpected `{name}`"))),
        }
    };
    if !cur.at_eof() {
        return Err(lift(cur.unexpected("end of line")));
    }
    Ok(out)
}

fn lines(text: &str, decl: &SessionDecl) -> Result<Vec<(usize, Line)>, SyntaxError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        out.push((n + 1, parse_line(body, n + 1, decl)?));
    }
    Ok(out)
}

fn at(line: usize, msg: impl Into<String>) -> SyntaxError {
    SyntaxError::new(Pos { line, col: 1 }, msg)
}

/// Parses one or more operator documents.
pub fn parse_operator_docs(text: &str, decl: &SessionDecl) -> Result<Vec<OperatorNF>, SyntaxError> {
    let mut docs: Vec<OperatorNF> = Vec::new();
    let mut order: Option<usize> = None;
    for (n, l) in lines(text, decl)? {
        match l {
            Line::Header { kind, dim, rank, .. } if kind == "operator" => {
                docs.push(OperatorNF::zero(dim, rank));
                order = None;
            }
            Line::Section { name, args } if name == "order" && !docs.is_empty() => order = Some(args[0]),
            Line::Component(alpha, m) => {
                let (Some(op), Some(k)) = (docs.last_mut(), order) else {
                    return Err(at(n, "component outside an order section"));
                };
                if alpha.order() != k {
                    return Err(at(n, format!("component {alpha} is not of order {k}")));
                }
                op.add_component(alpha, &m);
            }
            _ => return Err(at(n, "unexpected line in operator document")),
        }
    }
    Ok(docs)
}

/// Parses one or more canonical-form documents.
pub fn parse_canonical_docs(text: &str, decl: &SessionDecl) -> Result<Vec<CanonicalForm>, SyntaxError> {
    let mut docs: Vec<CanonicalForm> = Vec::new();
    let mut current: Option<(bool, usize, SymTensor)> = None;
    let flush = |docs: &mut Vec<CanonicalForm>, cur: &mut Option<(bool, usize, SymTensor)>| {
        if let (Some(doc), Some((is_s, i, t))) = (docs.last_mut(), cur.take()) {
            if is_s {
                doc.set_s(i, t);
            } else {
                doc.set_a(i, t);
            }
        }
    };
    for (n, l) in lines(text, decl)? {
        match l {
            Line::Header { kind, class: Some(class), dim, rank } if kind == "canonical" => {
                flush(&mut docs, &mut current);
                docs.push(CanonicalForm::empty(class, dim, rank));
            }
            Line::Section { name, args } if (name == "S" || name == "A") && args.len() == 1 && !docs.is_empty() => {
                flush(&mut docs, &mut current);
                let is_s = name == "S";
                let order = if is_s { 2 * args[0] } else { 2 * args[0] + 1 };
                current = Some((is_s, args[0], SymTensor::zero(decl.dim, decl.rank, order)));
            }
            Line::Component(alpha, m) => {
                let Some((_, _, t)) = current.as_mut() else {
                    return Err(at(n, "component outside a tensor section"));
                };
                if alpha.order() != t.order() {
                    return Err(at(n, format!("component {alpha} is not of order {}", t.order())));
                }
                t.add_at(alpha, &m);
            }
            _ => return Err(at(n, "unexpected line in canonical document")),
        }
    }
    flush(&mut docs, &mut current);
    Ok(docs)
}

/// A rational printed the way the text formats print it.
pub fn rational_text(q: &Rational) -> String {
    if q.is_zero() {
        "0".into()
    } else {
        q.to_string()
    }
}
