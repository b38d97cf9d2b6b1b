//! Acceptance criteria. Each criterion runs at its stated size and time
//! budget; one PASS/FAIL line per criterion is written to stderr.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use formadj::cli::run_command;
use formadj::text::{expression_form, parse_canonical_docs};
use formadj::{parse_operator, SessionDecl};
use formadj_core::canon::{canonical_pair, extract_canonical, factor_divergence, strip_constant_part};
use formadj_core::gen::{random_operator, standard_symbols, GenParams};
use formadj_core::oracle::{check_adjoint_pair, OracleParams};
use formadj_core::{Class, JetVar, MatrixPoly, MultiIndex, OperatorNF, Rational, ScalarPoly, Symbol};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GENERIC: &str = "dim 2; sym S(2) symmetric; sym T(1); sym R(0); S[a,b] D[a] D[b] + T[b] D[b] + R";

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn mi(c: &[u32]) -> MultiIndex {
    MultiIndex::from_counts(c.to_vec())
}

fn scalar(p: ScalarPoly) -> MatrixPoly {
    MatrixPoly::scalar(1, p)
}

fn run(args: &[&str], stdin: &str) -> formadj::cli::Outcome {
    let mut argv = vec!["formadj"];
    argv.extend_from_slice(args);
    run_command(argv, &mut stdin.as_bytes())
}

fn standard_session(dim: usize, rank: usize) -> SessionDecl {
    let mut d = SessionDecl::new(dim, rank);
    for s in standard_symbols() {
        d.declare(s.name(), s.arity(), s.is_symmetric(), s.is_matrix()).unwrap();
    }
    d
}

/// Jets of the generic second-order operator in two dimensions.
struct Generic {
    s: Symbol,
    t: Symbol,
    r: Symbol,
}

impl Generic {
    fn new(decl: &SessionDecl) -> Self {
        Generic { s: decl.lookup("S").unwrap().clone(), t: decl.lookup("T").unwrap().clone(), r: decl.lookup("R").unwrap().clone() }
    }
    fn s(&self, a: u16, b: u16) -> ScalarPoly {
        ScalarPoly::jet(JetVar::base(&self.s, &[a, b], None, 2))
    }
    fn t(&self, b: u16) -> ScalarPoly {
        ScalarPoly::jet(JetVar::base(&self.t, &[b], None, 2))
    }
    fn r(&self) -> ScalarPoly {
        ScalarPoly::jet(JetVar::base(&self.r, &[], None, 2))
    }
    /// `sum_a d_a S^{ab}`.
    fn div_s(&self, b: u16) -> ScalarPoly {
        self.s(0, b).derive(0) + self.s(1, b).derive(1)
    }
    /// `1/2 (T^b - d_a S^{ab})`.
    fn t_tilde(&self, b: u16) -> ScalarPoly {
        (self.t(b) - self.div_s(b)).scale(&q(1, 2))
    }
    /// `R - d_b T~^b`.
    fn r_tilde(&self) -> ScalarPoly {
        self.r() - self.t_tilde(0).derive(0) - self.t_tilde(1).derive(1)
    }
}

fn criterion_1() {
    let out = run(&["canonical"], GENERIC);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let (decl, op) = parse_operator(GENERIC).unwrap();
    let g = Generic::new(&decl);
    let docs = parse_canonical_docs(&out.stdout, &decl).unwrap();
    let (api_s, api_a) = canonical_pair(&op).unwrap();
    assert_eq!(docs, vec![api_s.clone(), api_a.clone()]);

    let a0 = &api_a.a_list()[&0];
    assert_eq!(a0.get(&mi(&[1, 0])), Some(&scalar(g.t_tilde(0))));
    assert_eq!(a0.get(&mi(&[0, 1])), Some(&scalar(g.t_tilde(1))));
    assert_eq!(api_a.a_list().len(), 1);
    assert!(api_a.s_list().is_empty());

    assert_eq!(api_s.s_list()[&0].get(&mi(&[0, 0])), Some(&scalar(g.r_tilde())));
    let s1 = &api_s.s_list()[&1];
    assert_eq!(s1.get(&mi(&[2, 0])), Some(&scalar(g.s(0, 0))));
    assert_eq!(s1.get(&mi(&[1, 1])), Some(&scalar(g.s(0, 1))));
    assert_eq!(s1.get(&mi(&[0, 2])), Some(&scalar(g.s(1, 1))));
    assert!(api_s.a_list().is_empty());

    let total = api_s.expand().unwrap().add(&api_a.expand().unwrap()).unwrap();
    assert_eq!(total, op);
}

fn criterion_2() {
    let (decl, op) = parse_operator(GENERIC).unwrap();
    let g = Generic::new(&decl);
    let adj = op.adjoint();
    let display = GENERIC.replace("S[a,b] D[a] D[b] + T[b] D[b] + R", "D[a] D[b] S[a,b] - D[b] T[b] + R");
    assert_eq!(adj, parse_operator(&display).unwrap().1);

    // right-ordered: S d d + (2 d_a S^{ab} - T^b) d_b + (d_a d_b S^{ab} - d_b T^b + R)
    let dd_s = g.s(0, 0).derive(0).derive(0) + g.s(0, 1).derive(0).derive(1).scale(&q(2, 1)) + g.s(1, 1).derive(1).derive(1);
    let zero_order = dd_s - g.t(0).derive(0) - g.t(1).derive(1) + g.r();
    let expected = OperatorNF::from_terms(
        2,
        1,
        [
            (mi(&[2, 0]), scalar(g.s(0, 0))),
            (mi(&[1, 1]), scalar(g.s(0, 1).scale(&q(2, 1)))),
            (mi(&[0, 2]), scalar(g.s(1, 1))),
            (mi(&[1, 0]), scalar(g.div_s(0).scale(&q(2, 1)) - g.t(0))),
            (mi(&[0, 1]), scalar(g.div_s(1).scale(&q(2, 1)) - g.t(1))),
            (mi(&[0, 0]), scalar(zero_order)),
        ],
    );
    assert_eq!(adj, expected);
}

fn criterion_3() {
    let syms = standard_symbols();
    let mut checked = 0;
    for seed in 0..120u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(3_000 + seed);
        let dim = 1 + (seed % 2) as usize;
        let p = GenParams { max_order: 5, ..GenParams::default() };
        let b = random_operator(&mut rng, &syms, dim, 1, &p);
        let plus = b.add(&b.adjoint()).unwrap();
        let minus = b.sub(&b.adjoint()).unwrap();
        if let Some(k) = plus.order() {
            assert_eq!(k % 2, 0, "seed {seed}: self-adjoint of odd order");
            let c = extract_canonical(&plus, Class::SelfAdjoint).unwrap();
            assert!(c.a_list().is_empty());
            assert_eq!(c.s_list().keys().next_back(), Some(&(k / 2)));
        }
        if let Some(k) = minus.order() {
            assert_eq!(k % 2, 1, "seed {seed}: skew-adjoint of even order");
            let c = extract_canonical(&minus, Class::SkewAdjoint).unwrap();
            assert!(c.s_list().is_empty());
        }
        checked += 1;
    }
    assert!(checked >= 100);
}

fn criterion_4() {
    let syms = standard_symbols();
    for seed in 0..110u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(4_000 + seed);
        let dim = 1 + (seed % 2) as usize;
        let p = GenParams { max_order: 4, ..GenParams::default() };
        let b = random_operator(&mut rng, &syms, dim, 2, &p);
        for (l, class) in [(b.add(&b.adjoint()).unwrap(), Class::SelfAdjoint), (b.sub(&b.adjoint()).unwrap(), Class::SkewAdjoint)] {
            let c = extract_canonical(&l, class).unwrap();
            assert_eq!(c.expand().unwrap(), l, "seed {seed}: round trip");
            let (s_sym, a_sym) = if class == Class::SelfAdjoint { (true, false) } else { (false, true) };
            for (i, t) in c.s_list() {
                assert_eq!(t.order(), 2 * i);
                for (_, m) in t.iter() {
                    assert_eq!(m.is_symmetric(), s_sym || m.is_zero());
                    assert_eq!(m.is_skew(), !s_sym || m.is_zero());
                }
            }
            for (i, t) in c.a_list() {
                assert_eq!(t.order(), 2 * i + 1);
                for (_, m) in t.iter() {
                    assert_eq!(m.is_symmetric(), a_sym || m.is_zero());
                    assert_eq!(m.is_skew(), !a_sym || m.is_zero());
                }
            }
        }
    }
}

fn criterion_5() {
    let syms = standard_symbols();
    for seed in 0..110u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(5_000 + seed);
        let dim = 1 + (seed % 3) as usize;
        let rank = 1 + (seed / 3 % 2) as usize;
        let p = GenParams { max_order: 3, coordinates: true, ..GenParams::default() };
        let a = random_operator(&mut rng, &syms, dim, rank, &p);
        let b = random_operator(&mut rng, &syms, dim, rank, &p);
        assert_eq!(a.adjoint().adjoint(), a, "seed {seed}: involution");
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.adjoint(), b.adjoint().compose(&a.adjoint()).unwrap(), "seed {seed}: anti-homomorphism");
    }
}

fn criterion_6() {
    let syms = standard_symbols();
    for i in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(6_000 + i);
        let dim = 1 + (i % 2) as usize;
        let p = GenParams { max_order: 4, ..GenParams::default() };
        let op = random_operator(&mut rng, &syms, dim, 1, &p);
        let src = format!("{} {}", standard_session(dim, 1).to_source(), expression_form(&op));
        assert_eq!(parse_operator(&src).unwrap().1, op);
        let out = run(&["verify-adjoint", "--trials", "25", "--seed", &i.to_string(), "--max-freq", "3"], &src);
        assert_eq!(out.code, 0, "operator {i}: {}", out.stdout);
        let lines: Vec<&str> = out.stdout.lines().collect();
        assert_eq!(lines.len(), 26);
        assert!(lines[..25].iter().all(|l| l.contains(" delta=0*") && l.ends_with(" ok")));
    }

    // mutation: flip the sign of the first-order term of (u D)*
    let (_, ud) = parse_operator("dim 1; sym u(0); u D[0]").unwrap();
    let adj = ud.adjoint();
    let first = OperatorNF::from_terms(1, 1, [(mi(&[1]), adj.component(&mi(&[1])))]);
    let corrupted = adj.sub(&first).unwrap().sub(&first).unwrap();
    let report = check_adjoint_pair(&ud, &corrupted, 25, 1, &OracleParams::default()).unwrap();
    assert!(report.trials.iter().any(|t| !t.passed()), "mutation went undetected");
}

fn criterion_7() {
    let syms = standard_symbols();
    let mut done = 0;
    let mut seed = 0u64;
    while done < 20 {
        let mut rng = ChaCha8Rng::seed_from_u64(7_000 + seed);
        seed += 1;
        let dim = 1 + (seed % 2) as usize;
        let p = GenParams { max_order: 4, ..GenParams::default() };
        let b = random_operator(&mut rng, &syms, dim, 1, &p);
        let l = strip_constant_part(&b.add(&b.adjoint()).unwrap()).unwrap();
        let Some(k) = l.order().filter(|&k| k >= 2) else { continue };
        let f = factor_divergence(&l).unwrap();
        assert_eq!(f.expand(), l, "seed {seed}: re-expansion");
        let mut top = None;
        for a in 0..dim {
            for c in 0..dim {
                assert_eq!(f.get(a, c), f.get(c, a));
                top = top.max(f.get(a, c).order());
            }
        }
        assert_eq!(top, Some(k - 2), "seed {seed}: order of Q");
        done += 1;
    }
}

fn criterion_8() {
    let (_, xd) = parse_operator("dim 1; x[0] D[0]").unwrap();
    let (s, a) = canonical_pair(&xd).unwrap();
    let x = ScalarPoly::coord(0);
    assert_eq!(s.s_list().len(), 1);
    assert_eq!(s.s_list()[&0].get(&mi(&[0])), Some(&scalar(ScalarPoly::constant(q(-1, 2)))));
    assert!(s.a_list().is_empty());
    assert_eq!(a.a_list().len(), 1);
    assert_eq!(a.a_list()[&0].get(&mi(&[1])), Some(&scalar(x.scale(&q(1, 2)))));
    assert!(a.s_list().is_empty());
    assert_eq!(s.expand().unwrap().add(&a.expand().unwrap()).unwrap(), xd);
    assert_eq!(s.expand().unwrap(), OperatorNF::constant(1, 1, q(-1, 2)));
}

/// Id, description, body, time budget in seconds.
type Criterion = (&'static str, &'static str, fn(), u64);

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 8] = [
        ("AC1", "second-order canonical form gives T~ and R~ exactly", criterion_1, 1),
        ("AC2", "adjoint of the generic second-order operator", criterion_2, 1),
        ("AC3", "scalar parity over 120 random operators", criterion_3, 30),
        ("AC4", "rank-2 fiber symmetry and round trip over 110 operators", criterion_4, 60),
        ("AC5", "involution and anti-homomorphism over 110 pairs", criterion_5, 30),
        ("AC6", "torus oracle: 10 operators x 25 trials, plus mutation", criterion_6, 60),
        ("AC7", "divergence factorization over 20 operators", criterion_7, 30),
        ("AC8", "canonical pair of x D", criterion_8, 1),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for (id, what, f, budget) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f));
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(budget);
        let ok = result.is_ok() && in_time;
        let note = if result.is_ok() && !in_time { " (over time budget)" } else { "" };
        let _ = writeln!(
            err,
            "[{}] {id} {what}: {:.3}s / {budget}s{note}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if !ok {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
