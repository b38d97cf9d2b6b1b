//! Algebraic laws checked on seeded random instances.

use formadj_core::canon::{canonical_pair, extract_canonical, factor_divergence, strip_constant_part};
use formadj_core::gen::{random_operator, random_poly, standard_symbols, GenParams};
use formadj_core::oracle::{instantiate, random_trig, torus_integral, Assignment, OracleParams};
use formadj_core::{Class, MatrixPoly, MultiIndex, OperatorNF, Rational, ScalarPoly};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn params(max_order: usize, coordinates: bool) -> GenParams {
    GenParams { max_order, coordinates, ..GenParams::default() }
}

fn poly(seed: u64, dim: usize) -> ScalarPoly {
    let p = GenParams { coordinates: true, max_poly_terms: 3, ..GenParams::default() };
    random_poly(&mut rng(seed), &standard_symbols(), dim, 1, &p)
}

fn op(seed: u64, dim: usize, rank: usize, max_order: usize) -> OperatorNF {
    random_operator(&mut rng(seed), &standard_symbols(), dim, rank, &params(max_order, true))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (p, q, r) = (poly(a, 2), poly(b, 2), poly(c, 2));
        prop_assert_eq!((&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!((&p * &q) * &r, &p * &(&q * &r));
    }

    #[test]
    fn derive_is_a_derivation(a in any::<u64>(), b in any::<u64>(), dir in 0usize..2) {
        let (p, q) = (poly(a, 2), poly(b, 2));
        prop_assert_eq!((&p * &q).derive(dir), &(p.derive(dir) * &q) + &(&p * &q.derive(dir)));
        prop_assert_eq!(p.derive(0).derive(1), p.derive(1).derive(0));
    }

    #[test]
    fn sym_split_parts(seed in any::<u64>()) {
        let m = formadj_core::gen::random_matrix(&mut rng(seed), &standard_symbols(), 2, 2, &params(1, true));
        let (s, k) = m.sym_split();
        prop_assert!(s.is_symmetric());
        prop_assert!(k.is_skew());
        prop_assert_eq!(&s + &k, m);
    }

    #[test]
    fn adjoint_involution_and_linearity(seed in any::<u64>(), dim in 1usize..=3, rank in 1usize..=2) {
        let max_order = if dim == 3 { 4 } else { 6 };
        let l1 = op(seed, dim, rank, max_order);
        let l2 = op(seed ^ 0x9e37, dim, rank, max_order);
        prop_assert_eq!(l1.adjoint().adjoint(), l1.clone());
        let (a, b) = (Rational::new(3.into(), 7.into()), Rational::new((-2).into(), 5.into()));
        let comb = l1.scale(&a).add(&l2.scale(&b)).unwrap();
        prop_assert_eq!(comb.adjoint(), l1.adjoint().scale(&a).add(&l2.adjoint().scale(&b)).unwrap());
    }

    #[test]
    fn adjoint_reverses_composition(seed in any::<u64>(), dim in 1usize..=2, rank in 1usize..=2) {
        let a = op(seed, dim, rank, 3);
        let b = op(seed.wrapping_add(1), dim, rank, 3);
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(ab.adjoint(), b.adjoint().compose(&a.adjoint()).unwrap());
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>(), dim in 1usize..=2) {
        let (a, b, c) = (op(seed, dim, 1, 2), op(seed ^ 1, dim, 1, 2), op(seed ^ 2, dim, 1, 2));
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn split_reconstructs(seed in any::<u64>(), dim in 1usize..=2, rank in 1usize..=2) {
        let l = op(seed, dim, rank, 4);
        let (plus, minus) = l.split();
        prop_assert_eq!(plus.add(&minus).unwrap(), l);
        prop_assert!(plus.is_self_adjoint());
        prop_assert!(minus.is_skew_adjoint());
    }

    #[test]
    fn leading_symbol_law(seed in any::<u64>(), dim in 1usize..=2, rank in 1usize..=2) {
        let l = op(seed, dim, rank, 5);
        let k = l.order().unwrap();
        let sign = Rational::from_integer(if k.is_multiple_of(2) { 1 } else { -1 }.into());
        let top = l.leading_symbol().unwrap().map(|m| m.transpose().scale(&sign));
        prop_assert_eq!(l.adjoint().order(), Some(k));
        let adj = l.adjoint();
        prop_assert_eq!(adj.leading_symbol().unwrap(), &top);
    }

    #[test]
    fn scalar_parity(seed in any::<u64>(), dim in 1usize..=2) {
        let b = op(seed, dim, 1, 5);
        let s = b.add(&b.adjoint()).unwrap();
        let k = b.sub(&b.adjoint()).unwrap();
        if let Some(o) = s.order() { prop_assert_eq!(o % 2, 0); }
        if let Some(o) = k.order() { prop_assert_eq!(o % 2, 1); }
    }

    #[test]
    fn canonical_round_trip(seed in any::<u64>(), dim in 1usize..=3, rank in 1usize..=2) {
        let max_order = if dim == 3 { 4 } else { 6 };
        let b = op(seed, dim, rank, max_order);
        for (l, class) in [(b.add(&b.adjoint()).unwrap(), Class::SelfAdjoint), (b.sub(&b.adjoint()).unwrap(), Class::SkewAdjoint)] {
            let c = extract_canonical(&l, class).unwrap();
            prop_assert!(c.validate().is_ok());
            prop_assert_eq!(c.expand().unwrap(), l.clone());
            if rank == 1 {
                match class {
                    Class::SelfAdjoint => {
                        prop_assert!(c.a_list().is_empty());
                        if let Some(k) = l.order() { prop_assert_eq!(c.s_list().keys().next_back(), Some(&(k / 2))); }
                    }
                    Class::SkewAdjoint => prop_assert!(c.s_list().is_empty()),
                }
            }
        }
        let (p, m) = canonical_pair(&b).unwrap();
        prop_assert_eq!(p.expand().unwrap().add(&m.expand().unwrap()).unwrap(), b);
    }

    #[test]
    fn divergence_factor_re_expands(seed in any::<u64>(), dim in 1usize..=2) {
        let b = op(seed, dim, 1, 4);
        let l = strip_constant_part(&b.add(&b.adjoint()).unwrap()).unwrap();
        prop_assert!(l.is_self_adjoint());
        prop_assert!(l.apply(&[ScalarPoly::one()]).unwrap()[0].is_zero());
        if l.order().is_some_and(|k| k >= 2) {
            let f = factor_divergence(&l).unwrap();
            prop_assert_eq!(f.expand(), l.clone());
            let k = l.order().unwrap();
            for a in 0..dim {
                for c in 0..dim {
                    prop_assert_eq!(f.get(a, c), f.get(c, a));
                    prop_assert!(f.get(a, c).order().is_none_or(|o| o + 2 <= k));
                }
            }
        }
    }

    #[test]
    fn normal_form_is_unique(seed in any::<u64>()) {
        // (A + B) C and A C + B C, two routes to one operator
        let (a, b, c) = (op(seed, 2, 1, 2), op(seed ^ 5, 2, 1, 2), op(seed ^ 6, 2, 1, 2));
        let lhs = a.add(&b).unwrap().compose(&c).unwrap();
        let rhs = c.adjoint().compose(&b.adjoint()).unwrap().add(&c.adjoint().compose(&a.adjoint()).unwrap()).unwrap().adjoint();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_a_homomorphism(seed in any::<u64>()) {
        let p = params(2, false);
        let syms = standard_symbols();
        let a = random_operator(&mut rng(seed), &syms, 2, 1, &p);
        let b = random_operator(&mut rng(seed ^ 3), &syms, 2, 1, &p);
        let ab = a.compose(&b).unwrap();
        let op_params = OracleParams::default();
        let mut r = rng(seed ^ 11);
        let asg = Assignment::random_for(&[&a, &b, &ab], &op_params, &mut r).unwrap();
        let f = random_trig(&mut r, 2, &op_params);
        let (ac, bc, abc) = (instantiate(&a, &asg).unwrap(), instantiate(&b, &asg).unwrap(), instantiate(&ab, &asg).unwrap());
        prop_assert_eq!(abc.apply(std::slice::from_ref(&f)).unwrap(), ac.apply(&bc.apply(&[f]).unwrap()).unwrap());
    }

    #[test]
    fn substitution_commutes_with_derive(seed in any::<u64>(), dir in 0usize..2) {
        let p = random_poly(&mut rng(seed), &standard_symbols(), 2, 1, &GenParams { max_poly_terms: 3, ..GenParams::default() });
        let mut r = rng(seed ^ 7);
        let l = OperatorNF::mult(2, MatrixPoly::scalar(1, p.clone()));
        let dl = OperatorNF::mult(2, MatrixPoly::scalar(1, p.derive(dir)));
        let asg = Assignment::random_for(&[&l, &dl], &OracleParams::default(), &mut r).unwrap();
        prop_assert_eq!(asg.eval(&p.derive(dir)).unwrap(), asg.eval(&p).unwrap().derive(dir));
    }

    #[test]
    fn derivatives_integrate_to_zero(seed in any::<u64>(), dim in 1usize..=3) {
        let f = random_trig(&mut rng(seed), dim, &OracleParams::default());
        for d in 0..dim {
            prop_assert_eq!(torus_integral(&f.derive(d)), Rational::from_integer(0.into()));
        }
        let a = MultiIndex::unit(dim, 0);
        prop_assert_eq!(torus_integral(&f.derive_multi(&a)), Rational::from_integer(0.into()));
    }
}
