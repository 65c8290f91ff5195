//! The generic symbol algebra `(α, β)` of degree `n` over ℚ(ρ):
//! generated by `a`, `b` with `a^n = α`, `b^n = β`, `ab = ρ ba`, where α, β
//! are commuting indeterminates and ρ is a primitive n-th root of unity.
//!
//! Elements are grids over the basis `a^i b^j`, `0 ≤ i, j < n`, with
//! coefficients in ℚ(ρ)[α, β]. The module also hosts the linear-system
//! search for multilinear Lie identities of `sl_n`: substitute basis
//! monomials into every element of the multilinear Lie basis and compute
//! the kernel of the resulting exact system.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::{CyclotomicField, CyclotomicScalar};
use crate::field::IntegerRing;
use crate::freelie::{multilinear_lie_basis, LiePolynomial, LieTerm, VarId};
use crate::linalg::{self, Echelon};
use crate::mateval::{random_trace_zero, CompiledPoly, Poly};

/// Default cap on the number of substitution tuples `(n²)^m`.
pub const DEFAULT_TUPLE_BUDGET: u64 = 2_000_000;
/// Random `sl_n` substitutions used when verifying a candidate identity.
pub const DEFAULT_VERIFY_TRIALS: usize = 1000;
/// Integer entries of random `sl_n(ℚ)` test matrices lie in `[-H, H]`.
pub const VERIFY_ENTRY_HEIGHT: i64 = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolError {
    #[error("symbol algebras of degree {0} and {1} cannot be combined")]
    DegreeMismatch(u32, u32),
    #[error("degree n must be at least 2, got {0}")]
    BadDegree(u32),
    #[error("identity degree m must be at least 2, got {0}")]
    BadIdentityDegree(usize),
    #[error("(n^2)^m = {tuples} substitution tuples exceeds the budget of {budget}")]
    CapacityExceeded { tuples: u128, budget: u64 },
    #[error("{0} is not multilinear in x1..x{1}")]
    NotMultilinear(String, usize),
    #[error("symbolic check says {symbolic} but sampled check says {sampled} for {poly}")]
    VerdictDisagreement {
        poly: String,
        symbolic: bool,
        sampled: bool,
    },
}

/// Coefficient of one basis element: a polynomial in α, β over ℚ(ρ),
/// keyed by the exponent pair `(p, q)` of `α^p β^q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolCoefficient {
    terms: BTreeMap<(u32, u32), CyclotomicScalar>,
}

impl SymbolCoefficient {
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &CyclotomicScalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, k: &CyclotomicField, key: (u32, u32), c: CyclotomicScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(slot) => {
                *slot = k.add(slot, &c);
                if slot.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolElement {
    n: u32,
    /// Row-major over `(i, j)`: cell `i*n + j` holds the coefficient of `a^i b^j`.
    cells: Vec<SymbolCoefficient>,
}

impl SymbolElement {
    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn coefficient(&self, i: u32, j: u32) -> &SymbolCoefficient {
        &self.cells[(i * self.n + j) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(SymbolCoefficient::is_zero)
    }

    /// Nonzero entries as `(i, j, p, q, scalar)` for `scalar·α^p β^q a^i b^j`.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, u32, u32, &CyclotomicScalar)> {
        let n = self.n;
        self.cells.iter().enumerate().flat_map(move |(idx, cell)| {
            let (i, j) = (idx as u32 / n, idx as u32 % n);
            cell.terms.iter().map(move |(&(p, q), c)| (i, j, p, q, c))
        })
    }
}

impl fmt::Display for SymbolElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, j, p, q, c) in self.entries() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (name, e) in [("alpha", p), ("beta", q), ("a", i), ("b", j)] {
                match e {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{e}")?,
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Arithmetic context for the symbol algebra of degree `n`.
#[derive(Clone, Debug)]
pub struct SymbolAlgebra {
    n: u32,
    field: CyclotomicField,
}

impl SymbolAlgebra {
    pub fn new(n: u32) -> Result<Self, SymbolError> {
        if n < 2 {
            return Err(SymbolError::BadDegree(n));
        }
        Ok(SymbolAlgebra {
            n,
            field: CyclotomicField::new(n),
        })
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn scalars(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn zero(&self) -> SymbolElement {
        SymbolElement {
            n: self.n,
            cells: vec![SymbolCoefficient::default(); (self.n * self.n) as usize],
        }
    }

    /// `c · α^p β^q a^i b^j`, with `i, j` reduced into `[0, n)` through
    /// `a^n = α`, `b^n = β`.
    pub fn monomial(&self, i: u32, j: u32, p: u32, q: u32, c: CyclotomicScalar) -> SymbolElement {
        let mut e = self.zero();
        let (i, p) = (i % self.n, p + i / self.n);
        let (j, q) = (j % self.n, q + j / self.n);
        e.cells[(i * self.n + j) as usize].add_term(&self.field, (p, q), c);
        e
    }

    /// The basis element `a^i b^j`.
    pub fn basis(&self, i: u32, j: u32) -> SymbolElement {
        self.monomial(i, j, 0, 0, self.field.one())
    }

    pub fn a(&self) -> SymbolElement {
        self.basis(1, 0)
    }

    pub fn b(&self) -> SymbolElement {
        self.basis(0, 1)
    }

    /// The central element `α·1`.
    pub fn alpha(&self) -> SymbolElement {
        self.monomial(0, 0, 1, 0, self.field.one())
    }

    pub fn beta(&self) -> SymbolElement {
        self.monomial(0, 0, 0, 1, self.field.one())
    }

    fn check(&self, u: &SymbolElement) -> Result<(), SymbolError> {
        if u.n != self.n {
            return Err(SymbolError::DegreeMismatch(self.n, u.n));
        }
        Ok(())
    }

    pub fn add(&self, u: &SymbolElement, v: &SymbolElement) -> Result<SymbolElement, SymbolError> {
        self.check(u)?;
        self.check(v)?;
        let mut out = u.clone();
        for (i, j, p, q, c) in v.entries() {
            out.cells[(i * self.n + j) as usize].add_term(&self.field, (p, q), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, u: &SymbolElement, c: &CyclotomicScalar) -> SymbolElement {
        let mut out = self.zero();
        for (i, j, p, q, d) in u.entries() {
            out.cells[(i * self.n + j) as usize].add_term(&self.field, (p, q), self.field.mul(c, d));
        }
        out
    }

    pub fn sub(&self, u: &SymbolElement, v: &SymbolElement) -> Result<SymbolElement, SymbolError> {
        self.add(u, &self.scale(v, &self.field.from_i64(-1)))
    }

    /// Product via `a^i b^j · a^k b^ℓ = ρ^{jk} a^{i+k} b^{j+ℓ}`, with exponent
    /// overflow moved into α, β.
    pub fn multiply(&self, u: &SymbolElement, v: &SymbolElement) -> Result<SymbolElement, SymbolError> {
        self.check(u)?;
        self.check(v)?;
        let mut out = self.zero();
        for (i, j, p, q, c) in u.entries() {
            for (k, l, r, s, d) in v.entries() {
                let coeff = self
                    .field
                    .mul(&self.field.mul(c, d), &self.field.rho_pow(i64::from(j * k)));
                let (ii, jj) = (i + k, j + l);
                let cell = ((ii % self.n) * self.n + jj % self.n) as usize;
                let key = (p + r + ii / self.n, q + s + jj / self.n);
                out.cells[cell].add_term(&self.field, key, coeff);
            }
        }
        Ok(out)
    }

    pub fn bracket(&self, u: &SymbolElement, v: &SymbolElement) -> Result<SymbolElement, SymbolError> {
        self.sub(&self.multiply(u, v)?, &self.multiply(v, u)?)
    }

    /// `ad_{(i_1,j_1)}⋯ad_{(i_t,j_t)}(a^k b^ℓ)`, applying the last chain entry
    /// first, by iterating
    /// `[a^i b^j, a^K b^L] = (ρ^{jK} − ρ^{iL}) a^{i+K} b^{j+L}`.
    pub fn ad_chain_eval(&self, chain: &[(u32, u32)], target: (u32, u32)) -> SymbolElement {
        let (c, k, l) = self.ad_chain_monomial(chain, target);
        self.monomial(k, l, 0, 0, c)
    }

    /// Scalar and unreduced exponents of the iterated bracket.
    fn ad_chain_monomial(&self, chain: &[(u32, u32)], target: (u32, u32)) -> (CyclotomicScalar, u32, u32) {
        let f = &self.field;
        let (mut k, mut l) = target;
        let mut c = f.one();
        for &(i, j) in chain.iter().rev() {
            let factor = f.sub(&f.rho_pow(i64::from(j * k)), &f.rho_pow(i64::from(i * l)));
            c = f.mul(&c, &factor);
            if c.is_zero() {
                return (c, 0, 0);
            }
            k += i;
            l += j;
        }
        (c, k, l)
    }

    /// Evaluates a Lie polynomial by generic multiplication, with `x_i`
    /// mapped to `values[i-1]`.
    pub fn evaluate_lie(&self, f: &LiePolynomial, values: &[SymbolElement]) -> Result<SymbolElement, SymbolError> {
        let mut acc = self.zero();
        for (t, c) in f.terms() {
            let v = self.evaluate_term(t, values)?;
            acc = self.add(&acc, &self.scale(&v, &self.field.from_rational(c.clone())))?;
        }
        Ok(acc)
    }

    fn evaluate_term(&self, t: &LieTerm, values: &[SymbolElement]) -> Result<SymbolElement, SymbolError> {
        match t {
            LieTerm::Leaf(VarId::X(i)) => Ok(values[*i as usize - 1].clone()),
            LieTerm::Leaf(VarId::Y) => Ok(values[values.len() - 1].clone()),
            LieTerm::Bracket(l, r, _) => {
                let (a, b) = (self.evaluate_term(l, values)?, self.evaluate_term(r, values)?);
                self.bracket(&a, &b)
            }
        }
    }

    /// Iterator over all `(n²)^m` tuples of basis exponent pairs.
    fn basis_tuple(&self, m: usize, mut index: u64) -> Vec<(u32, u32)> {
        let n2 = u64::from(self.n * self.n);
        let mut out = vec![(0, 0); m];
        for slot in out.iter_mut().rev() {
            let b = (index % n2) as u32;
            index /= n2;
            *slot = (b / self.n, b % self.n);
        }
        out
    }
}

/// Result of one identity search at fixed `(n, m)`.
#[derive(Clone, Debug, Serialize)]
pub struct IdentitySearchReport {
    pub n: u32,
    pub degree: usize,
    /// `(n²)^m` substitution tuples.
    pub tuples: u64,
    /// Scalar equations generated before deduplication.
    pub raw_equations: u64,
    /// Distinct nonzero equations after normalization.
    pub distinct_equations: usize,
    /// `(m−1)!` unknowns, one per multilinear Lie basis element.
    pub unknowns: usize,
    pub rank: usize,
    pub kernel_dimension: usize,
    /// Kernel basis, normalized so the first nonzero coordinate is 1.
    #[serde(serialize_with = "serialize_display_vec")]
    pub kernel: Vec<LiePolynomial>,
}

impl IdentitySearchReport {
    /// Whether `f`, a combination of multilinear Lie basis elements of this
    /// degree, lies in the span of the kernel. `None` if `f` uses other
    /// Lie monomials.
    pub fn kernel_contains(&self, f: &LiePolynomial) -> Option<bool> {
        let basis = multilinear_lie_basis(self.degree);
        let coords = |p: &LiePolynomial| -> Option<Vec<BigRational>> {
            let mut v = vec![BigRational::zero(); basis.len()];
            for (t, c) in p.terms() {
                let i = basis.iter().position(|b| b == t)?;
                v[i] = c.clone();
            }
            Some(v)
        };
        let target = coords(f)?;
        let mut rows: Vec<Vec<BigRational>> = self.kernel.iter().map(|k| coords(k).expect("kernel uses the basis")).collect();
        let before = linalg::rank(rows.clone(), basis.len());
        rows.push(target);
        Some(linalg::rank(rows, basis.len()) == before)
    }
}

fn serialize_display_vec<S: serde::Serializer, T: fmt::Display>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// A sweep over increasing degrees.
#[derive(Clone, Debug, Serialize)]
pub struct IdentitySweep {
    pub n: u32,
    pub max_degree: usize,
    pub reports: Vec<IdentitySearchReport>,
    /// The first degree with a nontrivial kernel, if any within the cap.
    pub minimal_degree_found: Option<usize>,
}

/// Builds and solves the linear system whose kernel is the space of
/// multilinear Lie identities of degree `m` of the symbol algebra of degree
/// `n` (equivalently of `M_n` and `sl_n`).
///
/// Unknowns are the coefficients on `multilinear_lie_basis(m)`. Every tuple
/// of basis monomials `a^k b^ℓ` substituted for `x_1..x_m` contributes one
/// equation per output basis element, per monomial `α^p β^q` and per
/// cyclotomic coordinate. Equations are normalized to primitive integer
/// rows, deduplicated and sorted before elimination, so the result does not
/// depend on the number of worker threads.
pub fn find_multilinear_lie_identities(n: u32, m: usize, budget: u64) -> Result<IdentitySearchReport, SymbolError> {
    if m < 2 {
        return Err(SymbolError::BadIdentityDegree(m));
    }
    let alg = SymbolAlgebra::new(n)?;
    let tuples = u128::from(n * n).pow(m as u32);
    if tuples > u128::from(budget) {
        return Err(SymbolError::CapacityExceeded { tuples, budget });
    }
    let tuples = tuples as u64;
    let basis = multilinear_lie_basis(m);
    // Chains of variable positions: basis element σ is
    // ad_{x_{σ(1)}}⋯ad_{x_{σ(m−1)}}(x_m).
    let chains: Vec<Vec<usize>> = basis
        .iter()
        .map(|t| {
            let leaves = t.leaves();
            leaves[..leaves.len() - 1]
                .iter()
                .map(|v| match v {
                    VarId::X(i) => *i as usize - 1,
                    VarId::Y => unreachable!("basis uses x variables only"),
                })
                .collect()
        })
        .collect();
    let unknowns = basis.len();
    let phi = alg.field.degree();

    const CHUNK: u64 = 4096;
    let chunks = tuples.div_ceil(CHUNK);
    let per_chunk: Vec<(u64, BTreeSet<Vec<BigInt>>)> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut rows = BTreeSet::new();
            let mut raw = 0u64;
            let mut chain_args = Vec::with_capacity(m);
            for t in ci * CHUNK..((ci + 1) * CHUNK).min(tuples) {
                let tuple = alg.basis_tuple(m, t);
                // key: (cell i, cell j, α power, β power) → column scalars
                let mut eqs: BTreeMap<(u32, u32, u32, u32), Vec<CyclotomicScalar>> = BTreeMap::new();
                for (col, chain) in chains.iter().enumerate() {
                    chain_args.clear();
                    chain_args.extend(chain.iter().map(|&v| tuple[v]));
                    let (c, k, l) = alg.ad_chain_monomial(&chain_args, tuple[m - 1]);
                    if c.is_zero() {
                        continue;
                    }
                    let key = (k % n, l % n, k / n, l / n);
                    let row = eqs
                        .entry(key)
                        .or_insert_with(|| vec![alg.field.zero(); unknowns]);
                    row[col] = alg.field.add(&row[col], &c);
                }
                raw += (n * n) as u64 * phi as u64;
                for row in eqs.into_values() {
                    for coord in 0..phi {
                        let r: Vec<BigRational> = row.iter().map(|c| c.coefficients()[coord].clone()).collect();
                        let ints = linalg::primitive_part(linalg::clear_denominators(&r));
                        if ints.iter().any(|x| !x.is_zero()) {
                            rows.insert(ints);
                        }
                    }
                }
            }
            (raw, rows)
        })
        .collect();

    let mut raw_equations = 0;
    let mut all: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for (raw, rows) in per_chunk {
        raw_equations += raw;
        all.extend(rows);
    }
    let distinct_equations = all.len();
    let ech = Echelon::from_integer_rows(all.into_iter().collect(), unknowns);
    let kernel: Vec<LiePolynomial> = ech
        .nullspace()
        .into_iter()
        .map(|v| {
            let lead = v.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(BigRational::one);
            LiePolynomial::from_terms(basis.iter().cloned().zip(v.into_iter().map(|c| c / &lead)))
        })
        .collect();
    Ok(IdentitySearchReport {
        n,
        degree: m,
        tuples,
        raw_equations,
        distinct_equations,
        unknowns,
        rank: ech.rank(),
        kernel_dimension: kernel.len(),
        kernel,
    })
}

/// Runs the search for `m = 2, 3, …, max_degree`, stopping at the first
/// nontrivial kernel.
pub fn identity_sweep(n: u32, max_degree: usize, budget: u64) -> Result<IdentitySweep, SymbolError> {
    let mut reports = Vec::new();
    let mut found = None;
    for m in 2..=max_degree {
        let r = find_multilinear_lie_identities(n, m, budget)?;
        let hit = r.kernel_dimension > 0;
        reports.push(r);
        if hit {
            found = Some(m);
            break;
        }
    }
    Ok(IdentitySweep {
        n,
        max_degree,
        reports,
        minimal_degree_found: found,
    })
}

/// Outcome of [`verify_identity_candidate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityVerification {
    /// Vanishes on every tuple of basis monomials of the symbol algebra.
    pub symbolic: bool,
    /// Vanishes on every random `sl_n(ℚ)` substitution tried.
    pub sampled: bool,
    pub trials: usize,
}

impl IdentityVerification {
    pub fn is_identity(&self) -> bool {
        self.symbolic && self.sampled
    }
}

/// Checks a multilinear Lie polynomial of degree `m` against the symbol
/// algebra (all basis tuples, evaluated by plain multiplication) and
/// against `trials` random integer substitutions into `sl_n(ℚ)`. The two
/// checks must agree.
pub fn verify_identity_candidate(
    f: &LiePolynomial,
    n: u32,
    trials: usize,
    seed: u64,
) -> Result<IdentityVerification, SymbolError> {
    let alg = SymbolAlgebra::new(n)?;
    let m = f.degree().unwrap_or(0);
    for (t, _) in f.terms() {
        let mut leaves = t.leaves();
        leaves.sort();
        let expected: Vec<VarId> = (1..=m as u32).map(VarId::x).collect();
        if leaves != expected {
            return Err(SymbolError::NotMultilinear(f.to_string(), m));
        }
    }
    if f.is_zero() {
        return Ok(IdentityVerification {
            symbolic: true,
            sampled: true,
            trials: 0,
        });
    }

    let tuples = u64::from(n * n).pow(m as u32);
    let symbolic = (0..tuples).into_par_iter().all(|t| {
        let values: Vec<SymbolElement> = alg
            .basis_tuple(m, t)
            .into_iter()
            .map(|(i, j)| alg.basis(i, j))
            .collect();
        alg.evaluate_lie(f, &values).map(|v| v.is_zero()).unwrap_or(false)
    });

    let ring = IntegerRing;
    let denominators = f
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| num_integer::Integer::lcm(&acc, c.denom()));
    let poly = Poly::Lie(f.scale(&BigRational::from_integer(denominators)));
    let compiled = CompiledPoly::compile(&ring, &poly).expect("integer coefficients after scaling");
    let dim = n as usize;
    let sampled = (0..trials).into_par_iter().all(|i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let args: Vec<_> = (0..compiled.arity())
            .map(|_| random_trace_zero(&ring, dim, &mut rng, VERIFY_ENTRY_HEIGHT))
            .collect();
        compiled.evaluate(&ring, dim, &args).is_zero(&ring)
    });

    if symbolic != sampled {
        return Err(SymbolError::VerdictDisagreement {
            poly: f.to_string(),
            symbolic,
            sampled,
        });
    }
    Ok(IdentityVerification {
        symbolic,
        sampled,
        trials,
    })
}

/// `s_k(ad_{x_1}, …, ad_{x_k})(x_{k+1})` as a Lie polynomial.
pub fn standard_ad_identity(k: usize) -> LiePolynomial {
    use itertools::Itertools;
    let target = LieTerm::x(k as u32 + 1);
    LiePolynomial::from_terms((1..=k).permutations(k).map(|p| {
        let sign = crate::freelie::permutation_sign(&p);
        let t = LieTerm::right_normed(
            p.iter()
                .map(|&i| LieTerm::x(i as u32))
                .chain(std::iter::once(target.clone())),
        )
        .expect("nonempty");
        (t, BigRational::from_integer(sign.into()))
    }))
}

/// One candidate reading of a closed formula for iterated ad-chains and
/// whether it reproduces [`SymbolAlgebra::ad_chain_eval`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedFormReading {
    pub name: &'static str,
    pub formula: &'static str,
    pub matches: bool,
    pub cases: u64,
}

/// Compares several readings of a closed formula for
/// `ad_{(i_t,j_t)}⋯ad_{(i_1,j_1)}(a^k b^ℓ)` against the iteration, over all
/// chains of length `≤ max_len` and all targets. Here `I_u`, `J_u` are the
/// running sums of the first `u` chain entries (`(i_1,j_1)` acts first) and
/// the monomial part is always `a^{I_t+k} b^{J_t+ℓ}`.
pub fn closed_form_readings(alg: &SymbolAlgebra, max_len: usize) -> Vec<ClosedFormReading> {
    type Scalar = fn(&CyclotomicField, &[(u32, u32)], u32, u32) -> CyclotomicScalar;
    fn steps(chain: &[(u32, u32)]) -> Vec<(u32, u32, u32, u32)> {
        // (i_u, j_u, I_{u-1}, J_{u-1}) in application order
        let mut out = Vec::new();
        let (mut si, mut sj) = (0, 0);
        for &(i, j) in chain {
            out.push((i, j, si, sj));
            si += i;
            sj += j;
        }
        out
    }
    let readings: [(&'static str, &'static str, Scalar); 4] = [
        ("binomial-product", "prod_u (rho^{j_u(I_{u-1}+k)} - rho^{i_u(J_{u-1}+l)})", |f, c, k, l| {
            steps(c).into_iter().fold(f.one(), |acc, (i, j, si, sj)| {
                let t = f.sub(&f.rho_pow(i64::from(j * (si + k))), &f.rho_pow(i64::from(i * (sj + l))));
                f.mul(&acc, &t)
            })
        }),
        ("binomial-product-as-printed", "prod_u (rho^{j_u(J_{u-1}+k)} - rho^{i_u(I_{u-1}+l)})", |f, c, k, l| {
            steps(c).into_iter().fold(f.one(), |acc, (i, j, si, sj)| {
                let t = f.sub(&f.rho_pow(i64::from(j * (sj + k))), &f.rho_pow(i64::from(i * (si + l))));
                f.mul(&acc, &t)
            })
        }),
        ("single-power-sum", "rho^{sum_u (j_u(I_{u-1}+k) - i_u(J_{u-1}+l))}", |f, c, k, l| {
            let e: i64 = steps(c)
                .into_iter()
                .map(|(i, j, si, sj)| i64::from(j * (si + k)) - i64::from(i * (sj + l)))
                .sum();
            f.rho_pow(e)
        }),
        ("single-power-product", "rho^{prod_u (j_u(I_{u-1}+k) - i_u(J_{u-1}+l))}", |f, c, k, l| {
            let n = i64::from(f.order());
            let e = steps(c).into_iter().fold(1i64, |acc, (i, j, si, sj)| {
                (acc * (i64::from(j * (si + k)) - i64::from(i * (sj + l)))).rem_euclid(n)
            });
            f.rho_pow(e)
        }),
    ];
    let n = alg.n;
    readings
        .iter()
        .map(|&(name, formula, scalar)| {
            let mut cases = 0;
            let mut matches = true;
            for len in 0..=max_len {
                for idx in 0..u64::from(n * n).pow(len as u32) {
                    // basis_tuple lists the outermost operator first; the
                    // readings want application order.
                    let outer_first = alg.basis_tuple(len, idx);
                    let applied: Vec<(u32, u32)> = outer_first.iter().rev().copied().collect();
                    for k in 0..n {
                        for l in 0..n {
                            cases += 1;
                            let direct = alg.ad_chain_eval(&outer_first, (k, l));
                            let (si, sj) = applied.iter().fold((0, 0), |(a, b), &(i, j)| (a + i, b + j));
                            let c = scalar(&alg.field, &applied, k, l);
                            let closed = if c.is_zero() {
                                alg.zero()
                            } else {
                                alg.monomial(si + k, sj + l, 0, 0, c)
                            };
                            matches &= closed == direct;
                        }
                    }
                }
            }
            ClosedFormReading {
                name,
                formula,
                matches,
                cases,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations_for_n_two() {
        let s = SymbolAlgebra::new(2).unwrap();
        let ba = s.multiply(&s.b(), &s.a()).unwrap();
        let ab = s.multiply(&s.a(), &s.b()).unwrap();
        assert_eq!(ba, s.scale(&ab, &s.scalars().from_i64(-1)));
        assert_eq!(s.multiply(&s.a(), &s.a()).unwrap(), s.alpha());
        assert_eq!(s.multiply(&s.b(), &s.b()).unwrap(), s.beta());
    }

    #[test]
    fn n_three_product_by_hand() {
        // (ab)(ab²) = ρ^{1·1} a² b³ = ρ β a²
        let s = SymbolAlgebra::new(3).unwrap();
        let lhs = s.multiply(&s.basis(1, 1), &s.basis(1, 2)).unwrap();
        let rhs = s.monomial(2, 0, 0, 1, s.scalars().rho());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_examples() {
        let s = SymbolAlgebra::new(2).unwrap();
        // [ab, a] = (ρ − 1) a²b = −2αb
        let v = s.bracket(&s.basis(1, 1), &s.a()).unwrap();
        assert_eq!(v, s.monomial(0, 1, 1, 0, s.scalars().from_i64(-2)));
        assert!(s.bracket(&s.basis(1, 1), &s.basis(1, 1)).unwrap().is_zero());
        let c = s.ad_chain_eval(&[(1, 1)], (1, 0));
        assert_eq!(c, v);
    }

    #[test]
    fn chain_matches_products_n_two() {
        let s = SymbolAlgebra::new(2).unwrap();
        let direct = s
            .bracket(&s.a(), &s.bracket(&s.b(), &s.a()).unwrap())
            .unwrap();
        assert_eq!(s.ad_chain_eval(&[(1, 0), (0, 1)], (1, 0)), direct);
    }

    #[test]
    fn mismatched_degrees() {
        let s2 = SymbolAlgebra::new(2).unwrap();
        let s3 = SymbolAlgebra::new(3).unwrap();
        assert_eq!(
            s2.multiply(&s2.a(), &s3.a()),
            Err(SymbolError::DegreeMismatch(2, 3))
        );
        assert!(SymbolAlgebra::new(1).is_err());
    }

    #[test]
    fn low_degree_search_n_two() {
        let r = find_multilinear_lie_identities(2, 2, DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!(r.kernel_dimension, 0);
        assert_eq!(r.unknowns, 1);
        let r = find_multilinear_lie_identities(2, 3, DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!(r.kernel_dimension, 0);
        assert_eq!(r.unknowns, 2);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            find_multilinear_lie_identities(3, 5, 1000),
            Err(SymbolError::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn non_identity_is_rejected() {
        let f = LiePolynomial::from_term(LieTerm::bracket(LieTerm::x(1), LieTerm::x(2)));
        let v = verify_identity_candidate(&f, 2, 50, 1).unwrap();
        assert!(!v.is_identity());
        assert!(!v.symbolic && !v.sampled);
    }

    #[test]
    fn closed_form_readings_n_two() {
        let s = SymbolAlgebra::new(2).unwrap();
        let r = closed_form_readings(&s, 2);
        assert_eq!(r[0].cases, (1 + 4 + 16) * 4);
        assert!(r[0].matches);
        assert!(!r[2].matches);
    }
}
