//! The Grassmann (exterior) algebra on `N` anticommuting generators over ℚ.
//!
//! Basis monomials `e_S` are indexed by subsets `S ⊆ {1..N}` stored as
//! bitmasks (bit `i-1` for `e_i`). `e_S · e_T` is zero when `S ∩ T ≠ ∅` and
//! otherwise `(−1)^{#{(s,t) ∈ S×T : s > t}} e_{S∪T}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::ControlFlow;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::freelie::{AssocPolynomial, FreeLieError, VarId};

/// Generator counts are capped so that masks fit and enumeration stays
/// bounded.
pub const MAX_GENERATORS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrassmannError {
    #[error("generator count mismatch: {0} vs {1}")]
    GeneratorCountMismatch(usize, usize),
    #[error("variable {0} has no assigned value")]
    UnassignedVariable(VarId),
    #[error(transparent)]
    NotMultilinear(#[from] FreeLieError),
    #[error("{generators} generators cannot separate {degree} letters")]
    TooFewGenerators { generators: usize, degree: usize },
    #[error("at most {MAX_GENERATORS} generators are supported, got {0}")]
    TooManyGenerators(usize),
    #[error("the obstruction needs degree >= 3, got {0}")]
    DegreeTooSmall(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannElement {
    generators: usize,
    terms: BTreeMap<u64, BigRational>,
}

impl GrassmannElement {
    pub fn zero(generators: usize) -> Self {
        GrassmannElement {
            generators,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(generators: usize, c: BigRational) -> Self {
        Self::monomial(generators, 0, c)
    }

    pub fn one(generators: usize) -> Self {
        Self::scalar(generators, BigRational::one())
    }

    /// `c · e_S` for the subset encoded by `mask`.
    pub fn monomial(generators: usize, mask: u64, c: BigRational) -> Self {
        assert!(
            generators >= 64 || mask >> generators == 0,
            "mask uses generators beyond e_{generators}"
        );
        let mut e = Self::zero(generators);
        e.add_term(mask, c);
        e
    }

    /// The generator `e_i`, `1 ≤ i ≤ N`.
    pub fn generator(generators: usize, i: usize) -> Self {
        assert!((1..=generators).contains(&i), "generator index out of range");
        Self::monomial(generators, 1 << (i - 1), BigRational::one())
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coefficient(&self, mask: u64) -> BigRational {
        self.terms.get(&mask).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, mask: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(mask).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, GrassmannError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GrassmannError> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.generators);
        for (m, a) in &self.terms {
            out.add_term(*m, a * c);
        }
        out
    }

    fn check_same(&self, other: &Self) -> Result<(), GrassmannError> {
        if self.generators != other.generators {
            return Err(GrassmannError::GeneratorCountMismatch(self.generators, other.generators));
        }
        Ok(())
    }
}

/// Sign of `e_S · e_T` for disjoint `S`, `T`.
pub fn merge_sign(s: u64, t: u64) -> i64 {
    let mut inversions = 0u32;
    let mut rest = t;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if bit >= 63 { 0 } else { s >> (bit + 1) };
        inversions += above.count_ones();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Exterior product.
pub fn g_multiply(u: &GrassmannElement, v: &GrassmannElement) -> Result<GrassmannElement, GrassmannError> {
    u.check_same(v)?;
    let mut out = GrassmannElement::zero(u.generators);
    for (s, a) in &u.terms {
        for (t, b) in &v.terms {
            if s & t != 0 {
                continue;
            }
            let c = a * b;
            let c = if merge_sign(*s, *t) < 0 { -c } else { c };
            out.add_term(s | t, c);
        }
    }
    Ok(out)
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *m == 0 {
                write!(f, "{c}")?;
            } else {
                if !c.is_one() {
                    write!(f, "{c}*")?;
                }
                write!(f, "{}", mask_label(*m))?;
            }
        }
        Ok(())
    }
}

/// `e[1,3]`-style label of a basis monomial; `1` for the empty set.
pub fn mask_label(mask: u64) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let idx: Vec<String> = (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| (b + 1).to_string())
        .collect();
    format!("e[{}]", idx.join(","))
}

/// Evaluates `p` word by word with the given generator-count.
pub fn evaluate_on_grassmann(
    p: &AssocPolynomial,
    assignment: &BTreeMap<VarId, GrassmannElement>,
) -> Result<GrassmannElement, GrassmannError> {
    let generators = assignment.values().next().map_or(0, |e| e.generators);
    if let Some(e) = assignment.values().find(|e| e.generators != generators) {
        return Err(GrassmannError::GeneratorCountMismatch(generators, e.generators));
    }
    let mut out = GrassmannElement::zero(generators);
    for (w, c) in p.terms() {
        let mut acc = GrassmannElement::scalar(generators, c.clone());
        for v in w.letters() {
            let val = assignment
                .get(v)
                .ok_or(GrassmannError::UnassignedVariable(*v))?;
            acc = g_multiply(&acc, val)?;
            if acc.is_zero() {
                break;
            }
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}

/// Outcome of [`vanishes_on_grassmann`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannVanishing {
    pub vanishes: bool,
    /// First non-vanishing tuple of basis monomials (bitmasks), in the
    /// enumeration order described at [`vanishes_on_grassmann`].
    pub witness: Option<Vec<u64>>,
    /// Value of the polynomial at the witness.
    pub value: Option<GrassmannElement>,
    /// Basis tuples visited.
    pub tuples_checked: u64,
    /// Tuples evaluated by full exterior multiplication.
    pub tuples_evaluated: u64,
}

/// Checks whether a multilinear `p` in `x1..xk` vanishes on `G_N`.
///
/// By multilinearity it suffices to substitute basis monomials, and only
/// pairwise disjoint ones can give a nonzero value. Tuples are visited by
/// increasing total degree (≤ N), then lexicographically by their masks.
/// For disjoint monomials the value of every word is `±e_{S_1}⋯e_{S_k}`
/// with a sign depending only on the degree parities, so one tuple per
/// parity pattern is multiplied out and the rest reuse that verdict.
pub fn vanishes_on_grassmann(p: &AssocPolynomial, generators: usize) -> Result<GrassmannVanishing, GrassmannError> {
    let k = p.degree().unwrap_or(0);
    if p.is_zero() {
        return Ok(GrassmannVanishing {
            vanishes: true,
            witness: None,
            value: None,
            tuples_checked: 0,
            tuples_evaluated: 0,
        });
    }
    p.check_multilinear(k)?;
    if generators < k {
        return Err(GrassmannError::TooFewGenerators { generators, degree: k });
    }
    if generators > MAX_GENERATORS {
        return Err(GrassmannError::TooManyGenerators(generators));
    }

    let mut memo: HashMap<u64, bool> = HashMap::new();
    let mut checked = 0u64;
    let mut evaluated = 0u64;
    let mut found: Option<(Vec<u64>, GrassmannElement)> = None;
    let mut tuple = vec![0u64; k];

    let mut visit = |tuple: &[u64]| -> Result<ControlFlow<()>, GrassmannError> {
        checked += 1;
        let parity = tuple
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, m)| acc | (u64::from(m.count_ones() % 2) << i));
        if let Some(&zero) = memo.get(&parity) {
            return Ok(if zero { ControlFlow::Continue(()) } else { ControlFlow::Break(()) });
        }
        evaluated += 1;
        let assignment: BTreeMap<VarId, GrassmannElement> = tuple
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                (
                    VarId::x(i as u32 + 1),
                    GrassmannElement::monomial(generators, m, BigRational::one()),
                )
            })
            .collect();
        let value = evaluate_on_grassmann(p, &assignment)?;
        let zero = value.is_zero();
        memo.insert(parity, zero);
        if zero {
            Ok(ControlFlow::Continue(()))
        } else {
            found = Some((tuple.to_vec(), value));
            Ok(ControlFlow::Break(()))
        }
    };

    let full = if generators == 64 { u64::MAX } else { (1u64 << generators) - 1 };
    for total in 0..=generators {
        if enumerate_disjoint(0, 0, total as u32, full, &mut tuple, &mut visit)?.is_break() {
            break;
        }
    }
    let vanishes = found.is_none();
    let (witness, value) = match found {
        Some((w, v)) => (Some(w), Some(v)),
        None => (None, None),
    };
    Ok(GrassmannVanishing {
        vanishes,
        witness,
        value,
        tuples_checked: checked,
        tuples_evaluated: evaluated,
    })
}

/// Enumerates tuples of pairwise disjoint masks with the given total
/// popcount, lexicographically.
fn enumerate_disjoint<F>(
    i: usize,
    used: u64,
    remaining: u32,
    full: u64,
    tuple: &mut [u64],
    visit: &mut F,
) -> Result<ControlFlow<()>, GrassmannError>
where
    F: FnMut(&[u64]) -> Result<ControlFlow<()>, GrassmannError>,
{
    if i == tuple.len() {
        return if remaining == 0 { visit(tuple) } else { Ok(ControlFlow::Continue(())) };
    }
    let last = i + 1 == tuple.len();
    let free = full & !used;
    let mut m = 0u64;
    loop {
        // `m` runs over the submasks of `free` in increasing order.
        let bits = m.count_ones();
        if (last && bits == remaining) || (!last && bits <= remaining) {
            tuple[i] = m;
            if enumerate_disjoint(i + 1, used | m, remaining - bits, full, tuple, visit)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        if m == free {
            break;
        }
        m = ((m | !free).wrapping_add(1)) & free;
    }
    Ok(ControlFlow::Continue(()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObstructionVerdict {
    /// `p` does not vanish on the Grassmann algebra, so it is not a Lie
    /// polynomial (characteristic 0).
    NotLie { witness: Vec<u64>, value: GrassmannElement },
    /// `p` vanishes on `G_k`; nothing can be concluded.
    Inconclusive,
}

/// Every homogeneous Lie polynomial of degree ≥ 3 is an identity of the
/// Grassmann algebra, so a non-vanishing substitution proves `p` is not Lie.
/// Uses `N = k` generators.
pub fn grassmann_lie_obstruction(p: &AssocPolynomial, k: usize) -> Result<ObstructionVerdict, GrassmannError> {
    if k < 3 {
        return Err(GrassmannError::DegreeTooSmall(k));
    }
    p.check_multilinear(k)?;
    let r = vanishes_on_grassmann(p, k)?;
    Ok(match (r.witness, r.value) {
        (Some(witness), Some(value)) => ObstructionVerdict::NotLie { witness, value },
        _ => ObstructionVerdict::Inconclusive,
    })
}
