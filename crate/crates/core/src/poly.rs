//! Commutative polynomial rings over ℚ: univariate polynomials with gcd, and
//! sparse multivariate polynomials. Both implement [`Ring`] so that
//! matrices with polynomial entries reuse the generic matrix code.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::{FieldError, Ring};

/// Dense univariate polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UPoly(Vec<BigRational>);

impl UPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.0.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        Self::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        UPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::default();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.0.iter().map(|a| a * c).collect())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dl = d.lead().expect("division by the zero polynomial").clone();
        let dd = d.0.len() - 1;
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (UPoly::default(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &dl;
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.0.iter().enumerate() {
                rem[i + j] -= &c * b;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c)
    }
}

impl std::fmt::Display for UPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        Ok(())
    }
}

/// ℚ[t] as a [`Ring`] context.
#[derive(Clone, Copy, Debug, Default)]
pub struct UnivariateRing;

impl Ring for UnivariateRing {
    type Elem = UPoly;

    fn zero(&self) -> UPoly {
        UPoly::default()
    }
    fn one(&self) -> UPoly {
        UPoly::constant(BigRational::one())
    }
    fn add(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a.add(b)
    }
    fn sub(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a.sub(b)
    }
    fn mul(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a.mul(b)
    }
    fn neg(&self, a: &UPoly) -> UPoly {
        a.neg()
    }
    fn is_zero(&self, a: &UPoly) -> bool {
        a.is_zero()
    }
    fn from_rational(&self, q: &BigRational) -> Result<UPoly, FieldError> {
        Ok(UPoly::constant(q.clone()))
    }
    fn format(&self, a: &UPoly) -> String {
        a.to_string()
    }
}

/// Sparse multivariate polynomial over ℚ. Exponent vectors have the length
/// of the owning ring's variable count.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MPoly {
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MPoly {
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Substitutes a univariate polynomial for every variable.
    pub fn substitute(&self, values: &[UPoly]) -> UPoly {
        let mut powers: Vec<Vec<UPoly>> = values.iter().map(|v| vec![UPoly::constant(BigRational::one()), v.clone()]).collect();
        let mut out = UPoly::default();
        for (e, c) in &self.terms {
            let mut term = UPoly::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().expect("nonempty").mul(&values[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize]);
            }
            out = out.add(&term);
        }
        out
    }
}

/// ℚ[ξ_1, …, ξ_k] as a [`Ring`] context.
#[derive(Clone, Copy, Debug)]
pub struct MultivariateRing {
    nvars: usize,
}

impl MultivariateRing {
    pub fn new(nvars: usize) -> Self {
        MultivariateRing { nvars }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// The variable `ξ_i` (0-based).
    pub fn var(&self, i: usize) -> MPoly {
        assert!(i < self.nvars);
        let mut e = vec![0; self.nvars];
        e[i] = 1;
        let mut p = MPoly::default();
        p.add_term(e, BigRational::one());
        p
    }

    pub fn constant(&self, c: BigRational) -> MPoly {
        let mut p = MPoly::default();
        p.add_term(vec![0; self.nvars], c);
        p
    }
}

impl Ring for MultivariateRing {
    type Elem = MPoly;

    fn zero(&self) -> MPoly {
        MPoly::default()
    }
    fn one(&self) -> MPoly {
        self.constant(BigRational::one())
    }
    fn add(&self, a: &MPoly, b: &MPoly) -> MPoly {
        let mut out = a.clone();
        for (e, c) in &b.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
    fn sub(&self, a: &MPoly, b: &MPoly) -> MPoly {
        let mut out = a.clone();
        for (e, c) in &b.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
    fn mul(&self, a: &MPoly, b: &MPoly) -> MPoly {
        let mut acc: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (e, c) in &a.terms {
            for (f, d) in &b.terms {
                let g: Vec<u32> = e.iter().zip(f).map(|(x, y)| x + y).collect();
                *acc.entry(g).or_insert_with(BigRational::zero) += c * d;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MPoly { terms: acc }
    }
    fn neg(&self, a: &MPoly) -> MPoly {
        MPoly {
            terms: a.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
    fn is_zero(&self, a: &MPoly) -> bool {
        a.is_zero()
    }
    fn from_rational(&self, q: &BigRational) -> Result<MPoly, FieldError> {
        Ok(self.constant(q.clone()))
    }
    fn format(&self, a: &MPoly) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = a
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, k)| **k > 0)
                    .map(|(i, k)| if *k == 1 { format!("xi{i}") } else { format!("xi{i}^{k}") })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}
