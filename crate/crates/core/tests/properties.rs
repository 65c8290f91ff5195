//! Randomized invariants across the modules.

use std::collections::BTreeMap;

use liepoly::cli::{parse_expression, Expr, Factor, Term};
use liepoly::field::{Field, PrimeField, Rationals, Ring};
use liepoly::freelie::{
    bracket_of, is_lie, lie_to_ad, standard_polynomial, AssocPolynomial, AssocWord, LiePolynomial, LieTerm, VarId,
};
use liepoly::grassmann::{g_multiply, grassmann_lie_obstruction, GrassmannElement, ObstructionVerdict};
use liepoly::mateval::{
    classify2, classify3, evaluate_poly, is_nilpotent, nilcrit_check, nilpotent_value_search, run_census,
    sample_matrix, CensusConfig, Domain, NilcritConfig, Poly, ValueClass,
};
use liepoly::matrix::Matrix;
use liepoly::symbolalg::{SymbolAlgebra, SymbolElement};
use liepoly::wordmaps::{evaluate_word, reduce_word, sl2_group, sl2_projection, GroupWord};
use liepoly::field::FieldSpec;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn lie_term(vars: u32) -> impl Strategy<Value = LieTerm> {
    let leaf = (1..=vars).prop_map(LieTerm::x);
    leaf.prop_recursive(3, 8, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| LieTerm::bracket(a, b)))
}

fn lie_poly(vars: u32) -> impl Strategy<Value = LiePolynomial> {
    prop::collection::vec((lie_term(vars), -3i64..=3), 1..4)
        .prop_map(|ts| LiePolynomial::from_terms(ts.into_iter().map(|(t, c)| (t, q(c)))))
}

/// Random bracketing of the given leaves in the given order.
fn bracketing(leaves: Vec<LieTerm>, splits: &[usize]) -> LieTerm {
    if leaves.len() == 1 {
        return leaves.into_iter().next().unwrap();
    }
    let cut = 1 + splits.first().copied().unwrap_or(0) % (leaves.len() - 1);
    let mut left = leaves;
    let right = left.split_off(cut);
    let rest = if splits.is_empty() { &[][..] } else { &splits[1..] };
    LieTerm::bracket(bracketing(left, rest), bracketing(right, rest))
}

/// Multilinear Lie polynomial in the given leaves: random bracketings of
/// random orderings.
fn multilinear_lie(leaves: Vec<VarId>) -> impl Strategy<Value = LiePolynomial> {
    let k = leaves.len();
    let one = (Just(leaves).prop_shuffle(), prop::collection::vec(0usize..8, k), -3i64..=3);
    prop::collection::vec(one, 1..4).prop_map(|ts| {
        LiePolynomial::from_terms(ts.into_iter().map(|(order, splits, c)| {
            (bracketing(order.into_iter().map(LieTerm::var).collect(), &splits), q(c))
        }))
    })
}

fn rational_sl2(rng: &mut ChaCha8Rng) -> Matrix<BigRational> {
    sample_matrix(&Rationals, Domain::Sl(2), rng)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn bracket_is_antisymmetric(f in lie_poly(3), g in lie_poly(3)) {
        let s = &bracket_of(&f, &g) + &bracket_of(&g, &f);
        prop_assert!(s.expand().is_zero());
    }

    #[test]
    fn jacobi_identity(f in lie_poly(3), g in lie_poly(3), h in lie_poly(3)) {
        let a = bracket_of(&f, &bracket_of(&g, &h));
        let b = bracket_of(&g, &bracket_of(&h, &f));
        let c = bracket_of(&h, &bracket_of(&f, &g));
        prop_assert!((&(&a + &b) + &c).expand().is_zero());
    }

    #[test]
    fn expansion_is_a_homomorphism(f in lie_poly(3), g in lie_poly(3)) {
        prop_assert_eq!(bracket_of(&f, &g).expand(), f.expand().commutator(&g.expand()));
        prop_assert_eq!((&f + &g).expand(), &f.expand() + &g.expand());
    }

    #[test]
    fn is_lie_finds_a_witness_for_lie_input(f in multilinear_lie((1..=4).map(VarId::x).collect())) {
        let p = f.expand();
        let w = is_lie(&p, 4).unwrap().expect("Lie input");
        prop_assert_eq!(w.expand(), p.clone());
        // Lie polynomials of degree ≥ 3 vanish on the Grassmann algebra.
        if !p.is_zero() {
            prop_assert_eq!(grassmann_lie_obstruction(&p, 4).unwrap(), ObstructionVerdict::Inconclusive);
        }
    }

    #[test]
    fn is_lie_rejects_perturbed_input(
        f in multilinear_lie((1..=4).map(VarId::x).collect()),
        order in Just((1..=4).map(VarId::x).collect::<Vec<_>>()).prop_shuffle(),
        c in prop_oneof![-3i64..=-1, 1i64..=3],
    ) {
        // The coefficients of a Lie element of degree ≥ 2 sum to zero, so
        // adding one word breaks membership.
        let mut p = f.expand();
        p = &p + &AssocPolynomial::from_terms([(AssocWord(order), q(c))]);
        prop_assert!(is_lie(&p, 4).unwrap().is_none());
        if let ObstructionVerdict::NotLie { .. } = grassmann_lie_obstruction(&p, 4).unwrap() {
            prop_assert!(is_lie(&p, 4).unwrap().is_none());
        }
    }

    #[test]
    fn ad_form_preserves_values(
        f in multilinear_lie(vec![VarId::x(1), VarId::x(2), VarId::Y]),
        seed in any::<u64>(),
    ) {
        let ad = lie_to_ad(&f, VarId::Y).unwrap();
        let g = ad.to_lie();
        prop_assert_eq!(g.expand(), f.expand());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = BTreeMap::new();
        for v in [VarId::x(1), VarId::x(2), VarId::Y] {
            a.insert(v, rational_sl2(&mut rng));
        }
        let r = Rationals;
        prop_assert_eq!(evaluate_poly(&r, &Poly::Lie(f), &a).unwrap(), evaluate_poly(&r, &Poly::Lie(g), &a).unwrap());
    }

    #[test]
    fn grassmann_multiplication_is_associative(
        terms in prop::collection::vec(prop::collection::vec((0u64..32, -4i64..=4), 1..5), 3),
    ) {
        let els: Vec<GrassmannElement> = terms
            .into_iter()
            .map(|ts| {
                ts.into_iter().fold(GrassmannElement::zero(5), |acc, (m, c)| {
                    acc.add(&GrassmannElement::monomial(5, m, q(c))).unwrap()
                })
            })
            .collect();
        let l = g_multiply(&g_multiply(&els[0], &els[1]).unwrap(), &els[2]).unwrap();
        let r = g_multiply(&els[0], &g_multiply(&els[1], &els[2]).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn symbol_multiplication_is_associative(
        n in 2u32..=3,
        terms in prop::collection::vec(prop::collection::vec((0u32..3, 0u32..3, 0u32..2, -3i64..=3), 1..4), 3),
    ) {
        let s = SymbolAlgebra::new(n).unwrap();
        let els: Vec<SymbolElement> = terms
            .into_iter()
            .map(|ts| {
                ts.into_iter().fold(s.zero(), |acc, (i, j, p, c)| {
                    let m = s.monomial(i % n, j % n, p, 0, s.scalars().from_i64(c));
                    s.add(&acc, &m).unwrap()
                })
            })
            .collect();
        let l = s.multiply(&s.multiply(&els[0], &els[1]).unwrap(), &els[2]).unwrap();
        let r = s.multiply(&els[0], &s.multiply(&els[1], &els[2]).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        // α and β are central.
        prop_assert!(s.bracket(&els[0], &s.alpha()).unwrap().is_zero());
        prop_assert!(s.bracket(&els[1], &s.beta()).unwrap().is_zero());
    }

    #[test]
    fn word_evaluation_is_conjugation_equivariant(
        raw in prop::collection::vec((1u32..=2, -3i64..=3), 0..6),
        picks in prop::collection::vec(0usize..120, 3),
    ) {
        let f = PrimeField::new(5).unwrap();
        let g = sl2_group(&f, false).unwrap();
        let w = reduce_word(&raw);
        let args: Vec<_> = (0..w.arity()).map(|i| g[picks[i]].clone()).collect();
        let c = &g[picks[2]];
        let ci = c.adjugate2(&f);
        let conj: Vec<_> = args.iter().map(|x| c.mul(&f, x).mul(&f, &ci)).collect();
        let lhs = evaluate_word(&f, &w, &conj).unwrap();
        let rhs = c.mul(&f, &evaluate_word(&f, &w, &args).unwrap()).mul(&f, &ci);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_and_unipotent_values(raw in prop::collection::vec((1u32..=3, -4i64..=4), 1..6)) {
        let f = PrimeField::new(7).unwrap();
        let w = reduce_word(&raw);
        let m = w.arity();
        let id = Matrix::identity(&f, 2);
        prop_assert_eq!(evaluate_word(&f, &w, &vec![id.clone(); m]).unwrap(), id.clone());
        for (g, k) in w.exponent_sums() {
            if k.rem_euclid(7) == 0 {
                continue;
            }
            let mut args = vec![id.clone(); m];
            args[g as usize - 1] = id.add(&f, &Matrix::unit(&f, 2, 0, 1));
            let mut expect = id.clone();
            expect.set(0, 1, f.from_i64(k));
            prop_assert_eq!(evaluate_word(&f, &w, &args).unwrap(), expect);
        }
    }

    #[test]
    fn parse_print_round_trip(e in expr_strategy()) {
        let printed = e.to_string();
        let back = parse_expression(&printed).unwrap();
        prop_assert_eq!(back, e, "printed as {}", printed);
    }

    #[test]
    fn census_is_deterministic(seed in any::<u64>()) {
        let p = Poly::Lie(LiePolynomial::from_term(LieTerm::bracket(LieTerm::x(1), LieTerm::x(2))));
        let cfg = CensusConfig::sampled(Domain::Sl(2), FieldSpec::Prime(7), 3000, seed);
        prop_assert_eq!(run_census(&p, &cfg).unwrap(), run_census(&p, &cfg).unwrap());
    }
}

fn coefficient() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(a, b)| BigRational::new(a.into(), b.into()))
}

fn factor_strategy() -> impl Strategy<Value = Factor> {
    let leaf = prop_oneof![
        (1u32..=5).prop_map(|i| Factor::Var(VarId::x(i))),
        Just(Factor::Var(VarId::Y)),
        (1usize..=4).prop_map(Factor::Standard),
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        let term = (coefficient(), prop::collection::vec(inner.clone(), 0..3))
            .prop_map(|(coeff, factors)| Term { coeff, factors });
        let expr = prop::collection::vec(term, 1..3).prop_map(|terms| Expr { terms }).boxed();
        prop_oneof![
            (expr.clone(), expr.clone()).prop_map(|(a, b)| Factor::Bracket(Box::new(a), Box::new(b))),
            expr.prop_map(|e| Factor::Paren(Box::new(e))),
            (inner, 0u32..4).prop_map(|(f, e)| Factor::Power(Box::new(f), e)),
        ]
    })
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    let term = (coefficient(), prop::collection::vec(factor_strategy(), 0..3))
        .prop_map(|(coeff, factors)| Term { coeff, factors });
    prop::collection::vec(term, 1..4).prop_map(|terms| Expr { terms })
}

#[test]
fn chain_evaluation_matches_repeated_brackets() {
    // All n = 2 chains of length ≤ 3 and all basis targets.
    let s = SymbolAlgebra::new(2).unwrap();
    let basis: Vec<(u32, u32)> = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).collect();
    let mut cases = 0;
    for len in 0..=3usize {
        for idx in 0..4usize.pow(len as u32) {
            let chain: Vec<(u32, u32)> = (0..len).map(|u| basis[(idx / 4usize.pow(u as u32)) % 4]).collect();
            for &t in &basis {
                let mut direct = s.basis(t.0, t.1);
                for &(i, j) in chain.iter().rev() {
                    direct = s.bracket(&s.basis(i, j), &direct).unwrap();
                }
                assert_eq!(s.ad_chain_eval(&chain, t), direct, "chain {chain:?} target {t:?}");
                cases += 1;
            }
        }
    }
    assert_eq!(cases, (1 + 4 + 16 + 64) * 4);
}

#[test]
fn classification_matches_defining_predicates() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [2u32, 3, 5, 7] {
        let f = PrimeField::new(p).unwrap();
        for t in 0..2500 {
            let n = if t % 2 == 0 { 2 } else { 3 };
            // Bias toward trace zero so every branch is exercised.
            let domain = if t % 3 == 0 { Domain::Gl(n) } else { Domain::Sl(n) };
            let mut m = sample_matrix(&f, domain, &mut rng);
            if t % 5 == 0 {
                // strictly upper triangular: nilpotent
                for i in 0..n {
                    for j in 0..=i {
                        m.set(i, j, 0);
                    }
                }
            }
            let c = if n == 2 { classify2(&f, &m).unwrap() } else { classify3(&f, &m).unwrap() };
            let zero = m.is_zero(&f);
            let tr0 = f.is_zero(&m.trace(&f));
            let nil = is_nilpotent(&f, &m);
            assert_eq!(c == ValueClass::Zero, zero);
            assert_eq!(c == ValueClass::NonzeroTrace, !tr0);
            assert_eq!(c == ValueClass::NilpotentNonzero, nil && !zero, "{m:?}");
            assert_eq!(c == ValueClass::ScalarNonzero, !zero && tr0 && m.is_scalar(&f));
            if c == ValueClass::TraceZeroNonNilpotent {
                assert!(tr0 && !nil && !m.is_scalar(&f));
            }
            if c == ValueClass::ThreeScalarNonzero {
                assert_eq!(n, 3);
                assert!(f.primitive_cube_root().is_some());
                // λ³ − c³: the cube of the matrix is scalar and nonzero.
                let cube = m.pow(&f, 3);
                assert!(cube.is_scalar(&f) && !cube.is_zero(&f));
            }
        }
    }
}

#[test]
fn values_are_unchanged_by_trace_projection() {
    let x = |i| LieTerm::x(i);
    let br = LieTerm::bracket;
    let corpus = vec![
        br(x(1), x(2)),
        br(br(x(1), x(2)), x(1)),
        br(br(x(1), x(2)), br(x(3), x(4))),
        br(x(1), br(x(2), br(x(3), x(4)))),
    ];
    let r = Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in corpus {
        let p = Poly::Lie(LiePolynomial::from_term(t));
        for _ in 0..200 {
            let mut a = BTreeMap::new();
            let mut b = BTreeMap::new();
            for v in p.variables() {
                let m = sample_matrix(&r, Domain::Gl(2), &mut rng);
                b.insert(v, sl2_projection(&r, &m).unwrap());
                a.insert(v, m);
            }
            assert_eq!(evaluate_poly(&r, &p, &a).unwrap(), evaluate_poly(&r, &p, &b).unwrap());
        }
    }
}

#[test]
fn standard_polynomials_alternate() {
    let r = Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in [3usize, 4] {
        let s = Poly::Assoc(standard_polynomial(k));
        for trial in 0..50 {
            let mut a = BTreeMap::new();
            let repeated = sample_matrix(&r, Domain::Gl(2), &mut rng);
            for i in 1..=k as u32 {
                let m = if i == 1 || i as usize == 2 + trial % (k - 1) {
                    repeated.clone()
                } else {
                    sample_matrix(&r, Domain::Gl(2), &mut rng)
                };
                a.insert(VarId::x(i), m);
            }
            assert!(evaluate_poly(&r, &s, &a).unwrap().is_zero(&r));
        }
    }
}

#[test]
fn nilpotent_values_imply_criterion_failure() {
    let x = |i| LieTerm::x(i);
    let br = LieTerm::bracket;
    let corpus = vec![
        LiePolynomial::x(1),
        LiePolynomial::from_term(br(x(1), x(2))),
        LiePolynomial::from_term(br(br(x(1), x(2)), x(1))),
        LiePolynomial::from_term(br(br(br(x(1), x(2)), x(1)), br(br(x(1), x(2)), x(2)))),
    ];
    for f in corpus {
        let p = Poly::Lie(f);
        let cfg = CensusConfig::sampled(Domain::Sl(2), FieldSpec::Rational, 2000, 3);
        let found = nilpotent_value_search(&p, &cfg).unwrap();
        let verdict = nilcrit_check(&p, &NilcritConfig::default()).unwrap();
        if found.is_some() {
            assert!(!verdict.passed(), "{p}");
        }
    }
}

#[test]
fn word_identity_is_in_every_image() {
    let f = PrimeField::new(3).unwrap();
    let id = Matrix::identity(&f, 2);
    for w in ["x1 x2 x1^-1 x2^-1", "x1^3", "x1^2 x2^-2", "x2 x1 x2^-1"] {
        let w: GroupWord = liepoly::cli::parse_word(w).unwrap();
        assert_eq!(evaluate_word(&f, &w, &vec![id.clone(); w.arity()]).unwrap(), id);
    }
}
