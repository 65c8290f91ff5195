//! Free Lie algebra and free associative algebra over ℚ.
//!
//! Lie polynomials are kept as raw bracket trees: no Hall or Lyndon normal
//! form is imposed, and two Lie polynomials are compared through their
//! expansion into the free associative algebra, which is a faithful target
//! in characteristic 0.

mod ad;
mod basis;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use ad::{ad_to_lie, lie_to_ad, AdChain, AdPolynomial};
pub use basis::{
    is_lie, multilinear_lie_basis, multilinear_lie_rank, multilinear_words, standard_polynomial,
};
pub(crate) use basis::permutation_sign;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeLieError {
    #[error("polynomial is not multilinear in x1..x{k}: offending word {word}")]
    NotMultilinear { word: String, k: usize },
    #[error("variable {var} occurs {count} times in Lie monomial {term}; exactly one occurrence is required")]
    BadDegreeInY {
        var: VarId,
        term: String,
        count: usize,
    },
    #[error("ad-chain entry {0} is not a single Lie monomial")]
    NotMonomial(String),
}

/// A free generator: `x1, x2, …` or the distinguished variable `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    X(u32),
    Y,
}

impl VarId {
    /// The variable `x_index`. Indices start at 1.
    pub fn x(index: u32) -> Self {
        assert!(index >= 1, "variable indices are positive");
        VarId::X(index)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::X(i) => write!(f, "x{i}"),
            VarId::Y => write!(f, "y"),
        }
    }
}

/// A Lie monomial: a variable or a bracket of two Lie monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LieTerm {
    Leaf(VarId),
    /// The cached `usize` is the number of leaves.
    Bracket(Box<LieTerm>, Box<LieTerm>, usize),
}

impl LieTerm {
    pub fn var(v: VarId) -> Self {
        LieTerm::Leaf(v)
    }

    pub fn x(i: u32) -> Self {
        LieTerm::Leaf(VarId::x(i))
    }

    pub fn bracket(left: LieTerm, right: LieTerm) -> Self {
        let d = left.degree() + right.degree();
        LieTerm::Bracket(Box::new(left), Box::new(right), d)
    }

    /// Right-normed bracket `[a1,[a2,…,[a_{t-1},a_t]…]]`.
    pub fn right_normed(parts: impl IntoIterator<Item = LieTerm>) -> Option<Self> {
        let parts: Vec<LieTerm> = parts.into_iter().collect();
        let mut it = parts.into_iter().rev();
        let last = it.next()?;
        Some(it.fold(last, |acc, a| LieTerm::bracket(a, acc)))
    }

    pub fn degree(&self) -> usize {
        match self {
            LieTerm::Leaf(_) => 1,
            LieTerm::Bracket(_, _, d) => *d,
        }
    }

    /// Number of leaves equal to `v`.
    pub fn count(&self, v: VarId) -> usize {
        match self {
            LieTerm::Leaf(u) => usize::from(*u == v),
            LieTerm::Bracket(l, r, _) => l.count(v) + r.count(v),
        }
    }

    pub fn leaves(&self) -> Vec<VarId> {
        let mut out = Vec::with_capacity(self.degree());
        self.push_leaves(&mut out);
        out
    }

    fn push_leaves(&self, out: &mut Vec<VarId>) {
        match self {
            LieTerm::Leaf(v) => out.push(*v),
            LieTerm::Bracket(l, r, _) => {
                l.push_leaves(out);
                r.push_leaves(out);
            }
        }
    }

    /// `fg − gf` expansion of a single bracket tree.
    pub fn expand(&self) -> AssocPolynomial {
        match self {
            LieTerm::Leaf(v) => AssocPolynomial::var(*v),
            LieTerm::Bracket(l, r, _) => {
                let (a, b) = (l.expand(), r.expand());
                &(&a * &b) - &(&b * &a)
            }
        }
    }
}

impl fmt::Display for LieTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieTerm::Leaf(v) => write!(f, "{v}"),
            LieTerm::Bracket(l, r, _) => write!(f, "[{l},{r}]"),
        }
    }
}

/// A finite ℚ-linear combination of Lie monomials. No zero coefficients are
/// stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiePolynomial {
    terms: BTreeMap<LieTerm, BigRational>,
}

impl LiePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_term(t: LieTerm) -> Self {
        Self::from_terms([(t, BigRational::one())])
    }

    pub fn var(v: VarId) -> Self {
        Self::from_term(LieTerm::Leaf(v))
    }

    pub fn x(i: u32) -> Self {
        Self::var(VarId::x(i))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (LieTerm, BigRational)>) -> Self {
        let mut p = Self::zero();
        for (t, c) in terms {
            p.add_term(t, c);
        }
        p
    }

    pub fn add_term(&mut self, t: LieTerm, c: BigRational) {
        add_into(&mut self.terms, t, c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LieTerm, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single term with coefficient 1, if this polynomial is one.
    pub fn as_monomial(&self) -> Option<&LieTerm> {
        match self.terms.iter().next() {
            Some((t, c)) if self.terms.len() == 1 && c.is_one() => Some(t),
            _ => None,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(t, a)| (t.clone(), a * c)))
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(LieTerm::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(LieTerm::degree);
        match degs.next() {
            Some(d) => degs.all(|e| e == d),
            None => true,
        }
    }

    /// Variables occurring in the polynomial, sorted.
    pub fn variables(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self.terms.keys().flat_map(LieTerm::leaves).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn expand(&self) -> AssocPolynomial {
        let mut out = AssocPolynomial::zero();
        for (t, c) in &self.terms {
            out = &out + &t.expand().scale(c);
        }
        out
    }
}

/// Bilinear extension of the bracket. Terms are stored as-is, so
/// `bracket_of(x1, x1)` keeps the tree `[x1,x1]`; it expands to 0.
pub fn bracket_of(f: &LiePolynomial, g: &LiePolynomial) -> LiePolynomial {
    let mut out = LiePolynomial::zero();
    for (s, a) in &f.terms {
        for (t, b) in &g.terms {
            out.add_term(LieTerm::bracket(s.clone(), t.clone()), a * b);
        }
    }
    out
}

impl Add for &LiePolynomial {
    type Output = LiePolynomial;
    fn add(self, rhs: &LiePolynomial) -> LiePolynomial {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LiePolynomial {
    type Output = LiePolynomial;
    fn sub(self, rhs: &LiePolynomial) -> LiePolynomial {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.add_term(t.clone(), -c);
        }
        out
    }
}

impl Neg for &LiePolynomial {
    type Output = LiePolynomial;
    fn neg(self) -> LiePolynomial {
        self.scale(&-BigRational::one())
    }
}

impl fmt::Display for LiePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, self.terms.iter(), LieTerm::to_string)
    }
}

/// A word in the free monoid; the empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AssocWord(pub Vec<VarId>);

impl AssocWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[VarId] {
        &self.0
    }
}

impl fmt::Display for AssocWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A finite ℚ-linear combination of words. No zero coefficients are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AssocPolynomial {
    terms: BTreeMap<AssocWord, BigRational>,
}

impl AssocPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_terms([(AssocWord::default(), c)])
    }

    pub fn var(v: VarId) -> Self {
        Self::from_terms([(AssocWord(vec![v]), BigRational::one())])
    }

    pub fn x(i: u32) -> Self {
        Self::var(VarId::x(i))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (AssocWord, BigRational)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: AssocWord, c: BigRational) {
        add_into(&mut self.terms, w, c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AssocWord, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &AssocWord) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, a)| (w.clone(), a * c)))
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(AssocWord::len).max()
    }

    pub fn variables(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self.terms.keys().flat_map(|w| w.0.iter().copied()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Checks that every word contains each of `x1..xk` exactly once and
    /// nothing else.
    pub fn check_multilinear(&self, k: usize) -> Result<(), FreeLieError> {
        for w in self.terms.keys() {
            if !is_multilinear_word(w, k) {
                return Err(FreeLieError::NotMultilinear {
                    word: w.to_string(),
                    k,
                });
            }
        }
        Ok(())
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }
}

pub(crate) fn is_multilinear_word(w: &AssocWord, k: usize) -> bool {
    if w.len() != k {
        return false;
    }
    let mut seen = vec![false; k];
    w.0.iter().all(|v| match v {
        VarId::X(i) if (1..=k as u32).contains(i) && !seen[*i as usize - 1] => {
            seen[*i as usize - 1] = true;
            true
        }
        _ => false,
    })
}

impl Add for &AssocPolynomial {
    type Output = AssocPolynomial;
    fn add(self, rhs: &AssocPolynomial) -> AssocPolynomial {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &AssocPolynomial {
    type Output = AssocPolynomial;
    fn sub(self, rhs: &AssocPolynomial) -> AssocPolynomial {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &AssocPolynomial {
    type Output = AssocPolynomial;
    fn neg(self) -> AssocPolynomial {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &AssocPolynomial {
    type Output = AssocPolynomial;
    fn mul(self, rhs: &AssocPolynomial) -> AssocPolynomial {
        let mut out = AssocPolynomial::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                let mut w = Vec::with_capacity(u.len() + v.len());
                w.extend_from_slice(&u.0);
                w.extend_from_slice(&v.0);
                out.add_term(AssocWord(w), a * b);
            }
        }
        out
    }
}

impl fmt::Display for AssocPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, self.terms.iter(), |w| {
            if w.is_empty() {
                String::new()
            } else {
                w.to_string()
            }
        })
    }
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, BigRational>, k: K, c: BigRational) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Writes `c1*m1 + c2*m2 - …`. `mono` renders the unit monomial as an
/// empty string, in which case the bare coefficient is printed.
fn write_combination<'a, K: 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a K, &'a BigRational)>,
    mono: impl Fn(&K) -> String,
) -> fmt::Result {
    let mut first = true;
    for (m, c) in terms {
        let neg = c < &BigRational::zero();
        let abs = if neg { -c } else { c.clone() };
        match (first, neg) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        first = false;
        let m = mono(m);
        if m.is_empty() {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            write!(f, "{m}")?;
        } else {
            write!(f, "{abs}*{m}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}
