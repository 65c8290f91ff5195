//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use liepoly::field::FieldSpec;
use liepoly::freelie::{
    bracket_of, is_lie, multilinear_lie_rank, standard_polynomial, AssocPolynomial, LiePolynomial, LieTerm, VarId,
};
use liepoly::grassmann::{
    evaluate_on_grassmann, g_multiply, grassmann_lie_obstruction, GrassmannElement, ObstructionVerdict,
};
use liepoly::mateval::{
    nilcrit_check, nilpotent_value_search, run_census, CensusConfig, Domain, NilcritConfig, Poly, ValueClass,
};
use liepoly::symbolalg::{
    find_multilinear_lie_identities, identity_sweep, standard_ad_identity, verify_identity_candidate,
    SymbolAlgebra, SymbolElement, DEFAULT_TUPLE_BUDGET,
};
use liepoly::wordmaps::{reduce_word, word_census, GroupWord, WordCensusConfig};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn x(i: u32) -> LieTerm {
    LieTerm::x(i)
}

fn br(a: LieTerm, b: LieTerm) -> LieTerm {
    LieTerm::bracket(a, b)
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:.2?}, limit {limit:?}"))
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

fn lie_membership() -> Outcome {
    let start = Instant::now();
    let s2 = is_lie(&standard_polynomial(2), 2).map_err(|e| e.to_string())?;
    let w = s2.ok_or("no witness for s_2")?;
    ensure(w.expand() == standard_polynomial(2), "s_2 witness does not expand back")?;
    for k in 3..=5 {
        let r = is_lie(&standard_polynomial(k), k).map_err(|e| e.to_string())?;
        ensure(r.is_none(), format!("s_{k} reported Lie"))?;
    }
    for k in 3..=6 {
        let s = standard_polynomial(k);
        let v = grassmann_lie_obstruction(&s, k).map_err(|e| e.to_string())?;
        ensure(matches!(v, ObstructionVerdict::NotLie { .. }), format!("no obstruction for s_{k}"))?;
        let assignment: BTreeMap<_, _> =
            (1..=k).map(|i| (VarId::x(i as u32), GrassmannElement::generator(k, i))).collect();
        let value = evaluate_on_grassmann(&s, &assignment).map_err(|e| e.to_string())?;
        let full = (1u64 << k) - 1;
        let expected = GrassmannElement::monomial(k, full, q(factorial(k)));
        ensure(value == expected, format!("s_{k}(e_1..e_{k}) is not {}·e_1⋯e_{k}", factorial(k)))?;
    }
    within(start, Duration::from_secs(10))?;
    Ok("s_2 Lie; s_3..s_5 not Lie; s_k(e_1..e_k) = k!·e_1⋯e_k for k = 3..6".into())
}

fn multilinear_dimension() -> Outcome {
    let ranks: Vec<usize> = (2..=6).map(multilinear_lie_rank).collect();
    ensure(ranks == vec![1, 2, 6, 24, 120], format!("ranks {ranks:?}"))?;
    Ok(format!("ranks k=2..6 {ranks:?}; computed degree-4 rank {}", ranks[2]))
}

fn identity_search() -> Outcome {
    let start = Instant::now();
    let mut dims = Vec::new();
    for m in 2..=5 {
        let r = find_multilinear_lie_identities(2, m, DEFAULT_TUPLE_BUDGET).map_err(|e| e.to_string())?;
        dims.push(r.kernel_dimension);
        if m == 5 {
            ensure(r.kernel_contains(&standard_ad_identity(4)) == Some(true), "s_4(ad) not in kernel")?;
        }
    }
    ensure(dims[..3] == [0, 0, 0] && dims[3] >= 1, format!("kernel dimensions {dims:?}"))?;
    let sweep = identity_sweep(2, 6, DEFAULT_TUPLE_BUDGET).map_err(|e| e.to_string())?;
    ensure(sweep.minimal_degree_found == Some(5), format!("sweep found {:?}", sweep.minimal_degree_found))?;
    let v = verify_identity_candidate(&standard_ad_identity(4), 2, 1000, 7).map_err(|e| e.to_string())?;
    ensure(v.is_identity(), format!("s_4(ad) verification {v:?}"))?;
    within(start, Duration::from_secs(300))?;
    Ok(format!("kernel dims m=2..5 {dims:?}; minimal degree 5; s_4(ad x1..x4)(x5) verified"))
}

fn bakhturin() -> Poly {
    let (x1, x2, x3) = (AssocPolynomial::x(1), AssocPolynomial::x(2), AssocPolynomial::x(3));
    Poly::Assoc((&(&x1 * &x2) + &(&x2 * &x1)).commutator(&x3))
}

fn only(census: &liepoly::mateval::Census, allowed: &[ValueClass]) -> bool {
    census.classes().iter().all(|c| allowed.contains(c))
}

fn bakhturin_example() -> Outcome {
    let p = bakhturin();
    for f in [FieldSpec::Prime(3), FieldSpec::Prime(5)] {
        let c = run_census(&p, &CensusConfig::exhaustive(Domain::Sl(2), f)).map_err(|e| e.to_string())?;
        ensure(c.classes() == vec![ValueClass::Zero], format!("{f:?}: classes {:?}", c.classes()))?;
    }
    let c = run_census(&p, &CensusConfig::sampled(Domain::Sl(2), FieldSpec::Rational, 10_000, 1))
        .map_err(|e| e.to_string())?;
    ensure(c.classes() == vec![ValueClass::Zero] && c.count(ValueClass::Zero) == 10_000, "nonzero rational value")?;
    let Poly::Assoc(a) = &p else { unreachable!() };
    ensure(is_lie(a, 3).map_err(|e| e.to_string())?.is_none(), "reported Lie")?;
    Ok("zero on sl_2(GF(3)), sl_2(GF(5)) and 10^4 rational triples; not Lie".into())
}

fn char_two_image() -> Outcome {
    let start = Instant::now();
    let p = Poly::Lie(LiePolynomial::from_term(br(br(x(1), x(2)), br(x(3), x(4)))));
    let c = run_census(&p, &CensusConfig::exhaustive(Domain::Gl(2), FieldSpec::Prime(2))).map_err(|e| e.to_string())?;
    let total: u64 = c.counts.values().sum();
    ensure(total == 65_536, format!("{total} tuples"))?;
    ensure(only(&c, &[ValueClass::Zero, ValueClass::ScalarNonzero]), format!("classes {:?}", c.classes()))?;
    within(start, Duration::from_secs(5))?;
    Ok(format!("65536 tuples, classes {:?}", c.classes().iter().map(|c| c.name()).collect::<Vec<_>>()))
}

fn commutator_image() -> Outcome {
    let p = Poly::Lie(LiePolynomial::from_term(br(x(1), x(2))));
    let c = run_census(&p, &CensusConfig::exhaustive(Domain::Sl(2), FieldSpec::Prime(3))).map_err(|e| e.to_string())?;
    let want = vec![ValueClass::Zero, ValueClass::NilpotentNonzero, ValueClass::TraceZeroNonNilpotent];
    let mut got = c.classes();
    got.sort();
    let mut want_sorted = want.clone();
    want_sorted.sort();
    ensure(got == want_sorted, format!("classes {got:?}"))?;
    Ok("Zero, NilpotentNonzero, TraceZeroNonNilpotent only".into())
}

fn no_nilpotent_example() -> Outcome {
    let u = br(x(1), x(2));
    let p = Poly::Lie(LiePolynomial::from_term(br(br(u.clone(), x(1)), br(u, x(2)))));
    for cfg in [
        CensusConfig::exhaustive(Domain::Sl(2), FieldSpec::Prime(3)),
        CensusConfig::exhaustive(Domain::Sl(2), FieldSpec::Prime(5)),
        CensusConfig::sampled(Domain::Sl(2), FieldSpec::Rational, 10_000, 2),
    ] {
        let w = nilpotent_value_search(&p, &cfg).map_err(|e| e.to_string())?;
        ensure(w.is_none(), format!("nilpotent value over {:?}: {w:?}", cfg.field))?;
    }
    let cfg = NilcritConfig { curves: 10, seed: 2024, ..NilcritConfig::default() };
    let passed = nilcrit_check(&p, &cfg).map_err(|e| e.to_string())?;
    let r = &passed;
    ensure(r.passed() && r.curves_checked >= 10, format!("criterion: {:?}", r.verdict))?;
    for bad in [LiePolynomial::from_term(br(x(1), x(2))), LiePolynomial::x(1)] {
        let r = nilcrit_check(&Poly::Lie(bad.clone()), &cfg).map_err(|e| e.to_string())?;
        ensure(!r.passed(), format!("criterion passed for {bad}"))?;
    }
    Ok(format!("no nilpotent values; criterion passes on {} curves; fails for [x1,x2] and x1", passed.curves_checked))
}

fn standard_four_on_sl2() -> Outcome {
    let start = Instant::now();
    let p = Poly::Assoc(standard_polynomial(4));
    let c = run_census(&p, &CensusConfig::exhaustive(Domain::Sl(2), FieldSpec::Prime(3))).map_err(|e| e.to_string())?;
    ensure(c.count(ValueClass::Zero) == 531_441 && c.classes() == vec![ValueClass::Zero], "nonzero value")?;
    within(start, Duration::from_secs(30))?;
    Ok("531441 evaluations, all Zero".into())
}

fn word(s: &str) -> GroupWord {
    liepoly::cli::parse_word(s).expect("word")
}

fn word_maps() -> Outcome {
    let mut checked = 0;
    let mut run = |w: &GroupWord, p: u32, projective: bool| -> Result<liepoly::wordmaps::WordCensus, String> {
        let c = word_census(w, &WordCensusConfig::exhaustive(FieldSpec::Prime(p), projective))
            .map_err(|e| e.to_string())?;
        ensure(c.flag("I"), format!("I missing from image of {w} over p={p}"))?;
        ensure(c.class_consistent, format!("class inconsistency for {w} over p={p}"))?;
        checked += 1;
        Ok(c)
    };
    let sq = run(&word("x1^2"), 5, false)?;
    ensure(!sq.flag("-I+e12"), "-I+e12 in image of x^2 on SL_2(F_5)")?;
    for p in [3u32, 5] {
        let c = run(&reduce_word(&[(1, i64::from(p))]), p, true)?;
        ensure(!c.flag("I+e12"), format!("I+e12 in image of x^{p} on PSL_2(F_{p})"))?;
    }
    for w in ["x1*x2*x1^-1*x2^-1", "x1^3", "x1^2*x2^2", "x1*x2^-1"] {
        for (p, projective) in [(3, false), (5, false), (5, true)] {
            run(&word(w), p, projective)?;
        }
    }
    Ok(format!("{checked} exhaustive word censuses"))
}

fn random_lie_term(rng: &mut ChaCha8Rng, depth: u32) -> LieTerm {
    if depth == 0 || rng.gen_bool(0.3) {
        x(rng.gen_range(1..=3))
    } else {
        br(random_lie_term(rng, depth - 1), random_lie_term(rng, depth - 1))
    }
}

fn random_lie(rng: &mut ChaCha8Rng) -> LiePolynomial {
    let n = rng.gen_range(1..=3);
    LiePolynomial::from_terms((0..n).map(|_| (random_lie_term(rng, 3), q(rng.gen_range(-3..=3)))))
}

fn random_grassmann(rng: &mut ChaCha8Rng) -> GrassmannElement {
    let mut e = GrassmannElement::zero(6);
    for _ in 0..rng.gen_range(1..=4) {
        let m = GrassmannElement::monomial(6, rng.gen_range(0..64), q(rng.gen_range(-4..=4)));
        e = e.add(&m).unwrap();
    }
    e
}

fn random_symbol(rng: &mut ChaCha8Rng, s: &SymbolAlgebra) -> SymbolElement {
    let n = s.degree();
    let mut e = s.zero();
    for _ in 0..rng.gen_range(1..=3) {
        let c = s.scalars().from_rational(BigRational::new(
            BigInt::from(rng.gen_range(-4..=4)),
            BigInt::from(rng.gen_range(1..=3)),
        ));
        let m = s.monomial(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..2), rng.gen_range(0..2), c);
        e = s.add(&e, &m).unwrap();
    }
    e
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let mut checks = 0u64;
    for _ in 0..200 {
        let (f, g, h) = (random_lie(&mut rng), random_lie(&mut rng), random_lie(&mut rng));
        ensure((&bracket_of(&f, &g) + &bracket_of(&g, &f)).expand().is_zero(), format!("antisymmetry {f} {g}"))?;
        let jac = &(&bracket_of(&f, &bracket_of(&g, &h)) + &bracket_of(&g, &bracket_of(&h, &f)))
            + &bracket_of(&h, &bracket_of(&f, &g));
        ensure(jac.expand().is_zero(), format!("Jacobi {f} {g} {h}"))?;
        ensure(bracket_of(&f, &g).expand() == f.expand().commutator(&g.expand()), format!("homomorphism {f} {g}"))?;
        checks += 3;
    }
    for _ in 0..200 {
        let (a, b, c) = (random_grassmann(&mut rng), random_grassmann(&mut rng), random_grassmann(&mut rng));
        let l = g_multiply(&g_multiply(&a, &b).unwrap(), &c).unwrap();
        let r = g_multiply(&a, &g_multiply(&b, &c).unwrap()).unwrap();
        ensure(l == r, "Grassmann associativity")?;
        checks += 1;
    }
    for n in [2u32, 3] {
        let s = SymbolAlgebra::new(n).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let (a, b, c) = (random_symbol(&mut rng, &s), random_symbol(&mut rng, &s), random_symbol(&mut rng, &s));
            let l = s.multiply(&s.multiply(&a, &b).unwrap(), &c).unwrap();
            let r = s.multiply(&a, &s.multiply(&b, &c).unwrap()).unwrap();
            ensure(l == r, format!("symbol associativity n={n}"))?;
            checks += 1;
        }
    }
    let s = SymbolAlgebra::new(2).map_err(|e| e.to_string())?;
    let basis: Vec<(u32, u32)> = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).collect();
    for len in 0..=3u32 {
        for idx in 0..4usize.pow(len) {
            let chain: Vec<(u32, u32)> = (0..len).map(|u| basis[(idx / 4usize.pow(u)) % 4]).collect();
            for &t in &basis {
                let mut direct = s.basis(t.0, t.1);
                for &(i, j) in chain.iter().rev() {
                    direct = s.bracket(&s.basis(i, j), &direct).unwrap();
                }
                ensure(s.ad_chain_eval(&chain, t) == direct, format!("chain {chain:?} on {t:?}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} seeded checks, zero failures"))
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("lie membership", lie_membership),
        ("multilinear Lie dimension", multilinear_dimension),
        ("identity search n=2", identity_search),
        ("Bakhturin example", bakhturin_example),
        ("char-2 image", char_two_image),
        ("image of [x,y]", commutator_image),
        ("no-nilpotent example", no_nilpotent_example),
        ("s_4 vanishes on sl_2", standard_four_on_sl2),
        ("word maps", word_maps),
        ("property suites", property_suites),
    ];
    let mut failures = Vec::new();
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({t:.2?})", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why} ({t:.2?})", i + 1);
                failures.push(i + 1);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
