//! Word maps on `SL_2` and `PSL_2` over finite fields.
//!
//! A word in the free group on `x1..xm` induces `G^m → G`. The census here
//! computes the image exhaustively (or from seeded samples), splits it by
//! conjugacy class and records membership of `±I` and `±I + e12`.
//! Finite-field results are exploratory evidence only.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, FieldError, FieldSpec};
use crate::mateval::census::Mode;
use crate::matrix::{all_matrices, Matrix};
use crate::with_field;

pub const DEFAULT_WORD_BUDGET: u64 = 20_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("word has arity {expected} but {found} arguments were given")]
    ArityMismatch { expected: usize, found: usize },
    #[error("{needed} tuples exceed the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("word maps need a finite field")]
    InfiniteField,
    #[error("projection to trace zero needs {0} to be invertible")]
    DimensionNotInvertible(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Freely reduced word: `(generator, exponent)` pairs with nonzero
/// exponents and no two adjacent entries on the same generator.
/// Generators are 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct GroupWord {
    letters: Vec<(u32, i64)>,
}

pub fn reduce_word(raw: &[(u32, i64)]) -> GroupWord {
    let mut out: Vec<(u32, i64)> = Vec::with_capacity(raw.len());
    for &(g, e) in raw {
        if e == 0 {
            continue;
        }
        match out.last_mut() {
            Some((h, f)) if *h == g => {
                *f += e;
                if *f == 0 {
                    out.pop();
                }
            }
            _ => out.push((g, e)),
        }
    }
    GroupWord { letters: out }
}

impl GroupWord {
    pub fn letters(&self) -> &[(u32, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index used.
    pub fn arity(&self) -> usize {
        self.letters.iter().map(|&(g, _)| g as usize).max().unwrap_or(0)
    }

    /// Total exponent of each generator `1..=arity`.
    pub fn exponent_sums(&self) -> BTreeMap<u32, i64> {
        let mut s: BTreeMap<u32, i64> = (1..=self.arity() as u32).map(|g| (g, 0)).collect();
        for &(g, e) in &self.letters {
            *s.entry(g).or_insert(0) += e;
        }
        s
    }

    pub fn is_exponent_zero(&self) -> bool {
        self.exponent_sums().values().all(|&e| e == 0)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (k, &(g, e)) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "x{g}")?;
            } else {
                write!(f, "x{g}^{e}")?;
            }
        }
        Ok(())
    }
}

fn power<F: Field>(f: &F, m: &Matrix<F::Elem>, e: i64) -> Matrix<F::Elem> {
    let base = if e < 0 { m.adjugate2(f) } else { m.clone() };
    let mut e = e.unsigned_abs();
    let mut acc = Matrix::identity(f, 2);
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(f, &b);
        }
        b = b.mul(f, &b);
        e >>= 1;
    }
    acc
}

/// Value of `w` at `args` (arguments must have determinant 1; inverses are
/// adjugates). Extra arguments beyond the arity are rejected.
pub fn evaluate_word<F: Field>(f: &F, w: &GroupWord, args: &[Matrix<F::Elem>]) -> Result<Matrix<F::Elem>, WordError> {
    if args.len() != w.arity() {
        return Err(WordError::ArityMismatch {
            expected: w.arity(),
            found: args.len(),
        });
    }
    Ok(w.letters
        .iter()
        .fold(Matrix::identity(f, 2), |acc, &(g, e)| acc.mul(f, &power(f, &args[g as usize - 1], e))))
}

/// Canonical representative of `±m`: the smaller of `m` and `−m` in
/// lexicographic entry order.
pub fn projective_canonical<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let n = m.neg(f);
    if n < *m {
        n
    } else {
        m.clone()
    }
}

/// An `SL_2` element, compared modulo `±I` when `projective` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectiveMatrix<E> {
    pub matrix: Matrix<E>,
    pub projective: bool,
}

impl<E: Clone + PartialEq + Ord> ProjectiveMatrix<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, m: Matrix<E>, projective: bool) -> Self {
        let matrix = if projective { projective_canonical(f, &m) } else { m };
        ProjectiveMatrix { matrix, projective }
    }
}

/// `SL_2(F)`, sorted; canonical `PSL_2` representatives when `projective`.
pub fn sl2_group<F: Field>(f: &F, projective: bool) -> Option<Vec<Matrix<F::Elem>>> {
    let one = f.one();
    let mut g: Vec<_> = all_matrices(f, 2)?
        .into_iter()
        .filter(|m| m.det(f) == one)
        .map(|m| if projective { projective_canonical(f, &m) } else { m })
        .collect();
    g.sort();
    g.dedup();
    Some(g)
}

/// Trace `±2` and not `±I`.
pub fn is_unipotent<F: Field>(f: &F, m: &Matrix<F::Elem>) -> bool {
    let two = f.from_i64(2);
    let t = m.trace(f);
    (t == two || t == f.neg(&two)) && !m.is_scalar(f)
}

/// `x − (tr x / n)·I`.
pub fn sl2_projection<F: Field>(f: &F, x: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>, WordError> {
    let n = x.dim();
    let inv = f.inv(&f.from_i64(n as i64)).ok_or(WordError::DimensionNotInvertible(n))?;
    let c = f.mul(&x.trace(f), &inv);
    Ok(x.sub(f, &Matrix::scalar(f, n, c)))
}

/// `x / √det x`, when the square root exists in `f` and `det x ≠ 0`.
pub fn normalize_to_sl2<F: Field>(f: &F, x: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let d = x.det(f);
    let r = f.sqrt(&d)?;
    let ri = f.inv(&r)?;
    Some(x.scale(f, &ri))
}

/// Conjugacy class id of each element of `group` (indices into `group`),
/// computed as orbits under conjugation by elementary unipotent generators.
pub fn conjugacy_classes<F: Field>(f: &F, group: &[Matrix<F::Elem>], projective: bool) -> Vec<usize> {
    let index: HashMap<&Matrix<F::Elem>, usize> = group.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let els = f.elements().expect("finite field");
    // Additive generators of the field: 1 and, for GF(p²), the element (0,1)
    // which is the second listed basis element after the prime field.
    let p = f.characteristic() as usize;
    let mut ts = vec![f.one()];
    if els.len() > p {
        ts.push(els[1].clone());
    }
    let mut gens = Vec::new();
    for t in &ts {
        for (i, j) in [(0, 1), (1, 0)] {
            let mut u = Matrix::identity(f, 2);
            u.set(i, j, t.clone());
            gens.push((u.clone(), u.adjugate2(f)));
        }
    }
    let canon = |m: Matrix<F::Elem>| if projective { projective_canonical(f, &m) } else { m };
    let mut class = vec![usize::MAX; group.len()];
    let mut next = 0;
    for start in 0..group.len() {
        if class[start] != usize::MAX {
            continue;
        }
        class[start] = next;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for (g, gi) in &gens {
                let c = canon(g.mul(f, &group[i]).mul(f, gi));
                let j = index[&c];
                if class[j] == usize::MAX {
                    class[j] = next;
                    stack.push(j);
                }
            }
        }
        next += 1;
    }
    class
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordCensusConfig {
    pub field: FieldSpec,
    pub projective: bool,
    pub mode: Mode,
    pub trials: u64,
    pub seed: u64,
    pub budget: u64,
}

impl WordCensusConfig {
    pub fn exhaustive(field: FieldSpec, projective: bool) -> Self {
        WordCensusConfig {
            field,
            projective,
            mode: Mode::Exhaustive,
            trials: 0,
            seed: 0,
            budget: DEFAULT_WORD_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassRow {
    pub representative: String,
    pub trace: String,
    pub size: usize,
    pub unipotent: bool,
    pub hit: bool,
    /// Members of the class found in the image.
    pub hits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub trace: String,
    pub hit: bool,
    pub all_hit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordCensus {
    pub word: String,
    pub field: FieldSpec,
    pub projective: bool,
    pub mode: Mode,
    pub seed: u64,
    pub group_order: usize,
    pub tuples: u64,
    pub image_size: usize,
    pub classes: Vec<ClassRow>,
    pub traces: Vec<TraceRow>,
    /// Membership of `I`, `-I`, `I+e12`, `-I+e12`.
    pub flags: BTreeMap<String, bool>,
    /// Every class is entirely inside or entirely outside the image.
    pub class_consistent: bool,
    pub note: String,
}

impl WordCensus {
    pub fn flag(&self, name: &str) -> bool {
        self.flags.get(name).copied().unwrap_or(false)
    }
}

fn word_census_in<F: Field>(f: &F, w: &GroupWord, cfg: &WordCensusConfig) -> Result<WordCensus, WordError> {
    let group = sl2_group(f, cfg.projective).ok_or(WordError::InfiniteField)?;
    let index: HashMap<&Matrix<F::Elem>, usize> = group.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let m = w.arity();
    let g = group.len() as u64;
    let canon = |x: Matrix<F::Elem>| if cfg.projective { projective_canonical(f, &x) } else { x };
    let value_index = |args: &[Matrix<F::Elem>]| -> usize {
        let v = canon(evaluate_word(f, w, args).expect("arity checked"));
        index[&v]
    };

    const BLOCK: u64 = 4096;
    let (tuples, hit) = match cfg.mode {
        Mode::Exhaustive => {
            let needed = u128::from(g).pow(m as u32);
            if needed > u128::from(cfg.budget) {
                return Err(WordError::BudgetExceeded {
                    needed,
                    budget: cfg.budget,
                });
            }
            let total = needed as u64;
            let hit = (0..total.div_ceil(BLOCK))
                .into_par_iter()
                .map(|b| {
                    let mut seen = vec![false; group.len()];
                    for idx in b * BLOCK..((b + 1) * BLOCK).min(total) {
                        let args: Vec<_> = crate::mateval::census::tuple_indices(idx, g, m)
                            .into_iter()
                            .map(|i| group[i].clone())
                            .collect();
                        seen[value_index(&args)] = true;
                    }
                    seen
                })
                .reduce(|| vec![false; group.len()], or_merge);
            (total, hit)
        }
        Mode::Sampled => {
            let total = cfg.trials;
            let hit = (0..total.div_ceil(BLOCK))
                .into_par_iter()
                .map(|b| {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    rng.set_stream(b);
                    let mut seen = vec![false; group.len()];
                    for _ in b * BLOCK..((b + 1) * BLOCK).min(total) {
                        let args: Vec<_> = (0..m).map(|_| group[rng.gen_range(0..group.len())].clone()).collect();
                        seen[value_index(&args)] = true;
                    }
                    seen
                })
                .reduce(|| vec![false; group.len()], or_merge);
            (total, hit)
        }
    };

    let class = conjugacy_classes(f, &group, cfg.projective);
    let nclasses = class.iter().max().map_or(0, |c| c + 1);
    let mut rows: Vec<Option<ClassRow>> = vec![None; nclasses];
    for (i, &c) in class.iter().enumerate() {
        let row = rows[c].get_or_insert_with(|| ClassRow {
            representative: group[i].format(f),
            trace: f.format(&group[i].trace(f)),
            size: 0,
            unipotent: is_unipotent(f, &group[i]),
            hit: false,
            hits: 0,
        });
        row.size += 1;
        if hit[i] {
            row.hits += 1;
            row.hit = true;
        }
    }
    let classes: Vec<ClassRow> = rows.into_iter().flatten().collect();
    let class_consistent = classes.iter().all(|r| r.hits == 0 || r.hits == r.size);

    let mut traces: BTreeMap<F::Elem, (bool, bool)> = BTreeMap::new();
    for (i, x) in group.iter().enumerate() {
        let e = traces.entry(x.trace(f)).or_insert((false, true));
        e.0 |= hit[i];
        e.1 &= hit[i];
    }
    let traces = traces
        .into_iter()
        .map(|(t, (h, a))| TraceRow {
            trace: f.format(&t),
            hit: h,
            all_hit: a,
        })
        .collect();

    let id = Matrix::identity(f, 2);
    let e12 = Matrix::unit(f, 2, 0, 1);
    let special = [
        ("I", id.clone()),
        ("-I", id.neg(f)),
        ("I+e12", id.add(f, &e12)),
        ("-I+e12", id.neg(f).add(f, &e12)),
    ];
    let flags = special
        .into_iter()
        .map(|(name, x)| (name.to_string(), hit[index[&canon(x)]]))
        .collect();

    Ok(WordCensus {
        word: w.to_string(),
        field: cfg.field,
        projective: cfg.projective,
        mode: cfg.mode,
        seed: cfg.seed,
        group_order: group.len(),
        tuples,
        image_size: hit.iter().filter(|&&h| h).count(),
        classes,
        traces,
        flags,
        class_consistent,
        note: "finite field: evidence only".to_string(),
    })
}

fn or_merge(mut a: Vec<bool>, b: Vec<bool>) -> Vec<bool> {
    for (x, y) in a.iter_mut().zip(b) {
        *x |= y;
    }
    a
}

pub fn word_census(w: &GroupWord, cfg: &WordCensusConfig) -> Result<WordCensus, WordError> {
    if !cfg.field.is_finite() {
        return Err(WordError::InfiniteField);
    }
    with_field!(cfg.field, |f| word_census_in(&f, w, cfg))?
}
