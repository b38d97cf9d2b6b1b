//! Structured (JSON) mirrors of the text formats. Polynomials appear as
//! their canonical strings.

use formadj_core::oracle::AdjointReport;
use formadj_core::{CanonicalForm, DivergenceFactor, MatrixPoly, OperatorNF, SymTensor};
use serde_json::{json, Value};

use crate::text::integral_units;

fn matrix(m: &MatrixPoly) -> Value {
    (0..m.rank())
        .map(|i| (0..m.rank()).map(|j| Value::String(m.get(i, j).to_string())).collect::<Vec<_>>())
        .collect()
}

fn tensor(t: &SymTensor) -> Value {
    t.iter()
        .map(|(alpha, m)| json!({ "index": alpha.counts(), "matrix": matrix(m) }))
        .collect()
}

pub fn operator(op: &OperatorNF) -> Value {
    let orders: Vec<Value> = op
        .tensors()
        .rev()
        .map(|t| json!({ "order": t.order(), "components": tensor(t) }))
        .collect();
    json!({ "dim": op.dim(), "rank": op.rank(), "orders": orders })
}

pub fn canonical(c: &CanonicalForm) -> Value {
    let list = |l: &std::collections::BTreeMap<usize, SymTensor>| -> Vec<Value> {
        l.iter().map(|(i, t)| json!({ "i": i, "components": tensor(t) })).collect()
    };
    json!({
        "class": c.class().name(),
        "dim": c.dim(),
        "rank": c.rank(),
        "S": list(c.s_list()),
        "A": list(c.a_list()),
    })
}

pub fn divergence(f: &DivergenceFactor) -> Value {
    let q: Vec<Value> = f.entries().map(|((a, b), op)| json!({ "a": a, "b": b, "operator": operator(op) })).collect();
    json!({ "dim": f.dim(), "rank": f.rank(), "Q": q })
}

pub fn report(r: &AdjointReport) -> Value {
    let trials: Vec<Value> = r
        .trials
        .iter()
        .map(|t| {
            json!({
                "seed": r.seed,
                "trial": t.index,
                "delta": t.delta.to_string(),
                "verdict": if t.passed() { "ok" } else { "FAIL" },
            })
        })
        .collect();
    json!({
        "units": integral_units(r.dim),
        "trials": trials,
        "summary": if r.passed() { "pass" } else { "fail" },
    })
}
