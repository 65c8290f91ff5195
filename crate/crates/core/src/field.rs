//! Exact scalar rings and fields used for matrix evaluation: ℚ, GF(p) and
//! GF(p²), plus the [`Ring`] interface shared with the polynomial rings.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest prime accepted for GF(p).
pub const MAX_PRIME: u32 = 65_521;
/// Largest prime accepted for GF(p²).
pub const MAX_SQUARE_PRIME: u32 = 997;

/// Rational samples use numerators in `[-H, H]` and denominators in `[1, D]`.
pub const SAMPLE_NUMERATOR_HEIGHT: i64 = 9;
pub const SAMPLE_DENOMINATOR_HEIGHT: i64 = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("prime {0} exceeds the supported bound")]
    PrimeTooLarge(u32),
    #[error("{value} has a denominator divisible by the characteristic {p}")]
    DenominatorNotInvertible { value: String, p: u32 },
    #[error("cannot parse field spec {0:?}; expected q, gf<p> or gf<p>^2")]
    Parse(String),
}

/// A commutative ring with exact, hashable elements.
pub trait Ring: Clone + Send + Sync + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem, FieldError>;
    fn format(&self, a: &Self::Elem) -> String;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_rational(&BigRational::from_integer(v.into()))
            .expect("integers are always representable")
    }
}

/// A field with the extra queries needed by censuses and classifiers.
pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn characteristic(&self) -> u64;
    /// All elements, for finite fields.
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;
    /// A primitive cube root of unity, if the field has one.
    fn primitive_cube_root(&self) -> Option<Self::Elem>;
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn spec(&self) -> FieldSpec;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|i| self.mul(a, &i))
    }
}

/// Which exact field to work over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rational,
    Prime(u32),
    PrimeSquare(u32),
}

impl FieldSpec {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) | FieldSpec::PrimeSquare(p) => u64::from(*p),
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, FieldSpec::Rational)
    }

    /// Number of elements, for finite fields.
    pub fn size(&self) -> Option<u64> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::Prime(p) => Some(u64::from(*p)),
            FieldSpec::PrimeSquare(p) => Some(u64::from(*p) * u64::from(*p)),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "gf{p}"),
            FieldSpec::PrimeSquare(p) => write!(f, "gf{p}^2"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, FieldError> {
        let t = s.trim().to_ascii_lowercase();
        if matches!(t.as_str(), "q" | "qq" | "rational" | "rationals") {
            return Ok(FieldSpec::Rational);
        }
        let bad = || FieldError::Parse(s.to_string());
        let rest = t.strip_prefix("gf").ok_or_else(bad)?;
        let (num, square) = match rest.strip_suffix("^2") {
            Some(n) => (n, true),
            None => (rest, false),
        };
        let p: u32 = num.parse().map_err(|_| bad())?;
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(if square {
            FieldSpec::PrimeSquare(p)
        } else {
            FieldSpec::Prime(p)
        })
    }
}

/// Runs `$body` with `$f` bound to the concrete field named by a
/// [`FieldSpec`]; evaluates to a `Result<_, FieldError>`-wrapped body value.
#[macro_export]
macro_rules! with_field {
    ($spec:expr, |$f:ident| $body:expr) => {{
        match $spec {
            $crate::field::FieldSpec::Rational => {
                let $f = $crate::field::Rationals;
                Ok($body)
            }
            $crate::field::FieldSpec::Prime(p) => match $crate::field::PrimeField::new(p) {
                Ok($f) => Ok($body),
                Err(e) => Err(e),
            },
            $crate::field::FieldSpec::PrimeSquare(p) => match $crate::field::PrimeSquareField::new(p) {
                Ok($f) => Ok($body),
                Err(e) => Err(e),
            },
        }
    }};
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// ℚ with arbitrary-precision rationals.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational, FieldError> {
        Ok(q.clone())
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }
    fn sample(&self, rng: &mut dyn RngCore) -> BigRational {
        let n = rng.gen_range(-SAMPLE_NUMERATOR_HEIGHT..=SAMPLE_NUMERATOR_HEIGHT);
        let d = rng.gen_range(1..=SAMPLE_DENOMINATOR_HEIGHT);
        BigRational::new(n.into(), d.into())
    }
    fn primitive_cube_root(&self) -> Option<BigRational> {
        None
    }
    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_negative() {
            return None;
        }
        let n = a.numer().sqrt();
        let d = a.denom().sqrt();
        (&n * &n == *a.numer() && &d * &d == *a.denom()).then(|| BigRational::new(n, d))
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }
}

/// ℤ as a ring; rationals with a nontrivial denominator are rejected.
/// Used for fast exact evaluation at integer matrices.
#[derive(Clone, Copy, Debug, Default)]
pub struct IntegerRing;

impl Ring for IntegerRing {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigInt, FieldError> {
        if q.is_integer() {
            Ok(q.to_integer())
        } else {
            Err(FieldError::DenominatorNotInvertible {
                value: q.to_string(),
                p: 0,
            })
        }
    }
    fn format(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

fn reduce_rational(q: &BigRational, p: u32) -> Result<u64, FieldError> {
    let pb = BigInt::from(p);
    let num = q.numer().mod_floor(&pb).to_u64().expect("fits");
    let den = q.denom().mod_floor(&pb).to_u64().expect("fits");
    if den == 0 {
        return Err(FieldError::DenominatorNotInvertible {
            value: q.to_string(),
            p,
        });
    }
    Ok(num * pow_mod(den, u64::from(p) - 2, u64::from(p)) % u64::from(p))
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// The prime field GF(p), elements `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(FieldError::PrimeTooLarge(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn pow(&self, a: u32, e: u64) -> u32 {
        pow_mod(u64::from(a), e, u64::from(self.p)) as u32
    }
}

impl Ring for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.p
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((u64::from(*a) * u64::from(*b)) % u64::from(self.p)) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn from_rational(&self, q: &BigRational) -> Result<u32, FieldError> {
        reduce_rational(q, self.p).map(|v| v as u32)
    }
    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(i64::from(self.p)) as u32
    }
    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u32) -> Option<u32> {
        (*a != 0).then(|| self.pow(*a, u64::from(self.p) - 2))
    }
    fn characteristic(&self) -> u64 {
        u64::from(self.p)
    }
    fn elements(&self) -> Option<Vec<u32>> {
        Some((0..self.p).collect())
    }
    fn sample(&self, rng: &mut dyn RngCore) -> u32 {
        rng.gen_range(0..self.p)
    }
    fn primitive_cube_root(&self) -> Option<u32> {
        if self.p % 3 != 1 {
            return None;
        }
        (2..self.p).find(|&g| self.pow(g, 3) == 1)
    }
    fn sqrt(&self, a: &u32) -> Option<u32> {
        sqrt_by_tonelli(self, a, u64::from(self.p))
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
}

/// GF(p²) = GF(p)[s] / (s² − c1·s − c0) for an irreducible quadratic.
/// Elements are pairs `(a, b)` meaning `a + b·s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeSquareField {
    base: PrimeField,
    c0: u32,
    c1: u32,
}

impl PrimeSquareField {
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p > MAX_SQUARE_PRIME {
            return Err(FieldError::PrimeTooLarge(p));
        }
        let base = PrimeField::new(p)?;
        // First (c1, c0) in lexicographic order with s² − c1 s − c0 irreducible.
        for c1 in 0..p {
            for c0 in 1..p {
                let has_root = (0..p).any(|x| {
                    let lhs = base.mul(&x, &x);
                    let rhs = base.add(&base.mul(&c1, &x), &c0);
                    lhs == rhs
                });
                if !has_root {
                    return Ok(PrimeSquareField { base, c0, c1 });
                }
            }
        }
        unreachable!("an irreducible quadratic exists over every prime field")
    }

    pub fn prime(&self) -> u32 {
        self.base.p
    }

    /// The image of a prime-field element.
    pub fn embed(&self, a: u32) -> (u32, u32) {
        (a, 0)
    }

    fn order(&self) -> u64 {
        u64::from(self.base.p) * u64::from(self.base.p)
    }

    fn pow(&self, a: &(u32, u32), mut e: u64) -> (u32, u32) {
        let mut r = self.one();
        let mut b = *a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }
}

impl Ring for PrimeSquareField {
    type Elem = (u32, u32);

    fn zero(&self) -> (u32, u32) {
        (0, 0)
    }
    fn one(&self) -> (u32, u32) {
        (self.base.one(), 0)
    }
    fn add(&self, a: &(u32, u32), b: &(u32, u32)) -> (u32, u32) {
        (self.base.add(&a.0, &b.0), self.base.add(&a.1, &b.1))
    }
    fn sub(&self, a: &(u32, u32), b: &(u32, u32)) -> (u32, u32) {
        (self.base.sub(&a.0, &b.0), self.base.sub(&a.1, &b.1))
    }
    fn mul(&self, a: &(u32, u32), b: &(u32, u32)) -> (u32, u32) {
        let f = &self.base;
        let ac = f.mul(&a.0, &b.0);
        let bd = f.mul(&a.1, &b.1);
        let cross = f.add(&f.mul(&a.0, &b.1), &f.mul(&a.1, &b.0));
        (
            f.add(&ac, &f.mul(&bd, &self.c0)),
            f.add(&cross, &f.mul(&bd, &self.c1)),
        )
    }
    fn neg(&self, a: &(u32, u32)) -> (u32, u32) {
        (self.base.neg(&a.0), self.base.neg(&a.1))
    }
    fn is_zero(&self, a: &(u32, u32)) -> bool {
        *a == (0, 0)
    }
    fn from_rational(&self, q: &BigRational) -> Result<(u32, u32), FieldError> {
        Ok((self.base.from_rational(q)?, 0))
    }
    fn from_i64(&self, v: i64) -> (u32, u32) {
        (self.base.from_i64(v), 0)
    }
    fn format(&self, a: &(u32, u32)) -> String {
        match a {
            (x, 0) => x.to_string(),
            (0, 1) => "s".to_string(),
            (0, y) => format!("{y}s"),
            (x, 1) => format!("{x}+s"),
            (x, y) => format!("{x}+{y}s"),
        }
    }
}

impl Field for PrimeSquareField {
    fn inv(&self, a: &(u32, u32)) -> Option<(u32, u32)> {
        (!self.is_zero(a)).then(|| self.pow(a, self.order() - 2))
    }
    fn characteristic(&self) -> u64 {
        u64::from(self.base.p)
    }
    fn elements(&self) -> Option<Vec<(u32, u32)>> {
        let p = self.base.p;
        Some((0..p).flat_map(|a| (0..p).map(move |b| (a, b))).collect())
    }
    fn sample(&self, rng: &mut dyn RngCore) -> (u32, u32) {
        (rng.gen_range(0..self.base.p), rng.gen_range(0..self.base.p))
    }
    fn primitive_cube_root(&self) -> Option<(u32, u32)> {
        if self.order() % 3 != 1 {
            return None;
        }
        self.elements()?
            .into_iter()
            .find(|g| *g != self.one() && self.pow(g, 3) == self.one())
    }
    fn sqrt(&self, a: &(u32, u32)) -> Option<(u32, u32)> {
        sqrt_by_tonelli(self, a, self.order())
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeSquare(self.base.p)
    }
}

/// Square root in a finite field of order `q` by Tonelli–Shanks (or the
/// Frobenius inverse in characteristic 2).
fn sqrt_by_tonelli<F: Field>(f: &F, a: &F::Elem, q: u64) -> Option<F::Elem> {
    let pow = |b: &F::Elem, mut e: u64| {
        let mut r = f.one();
        let mut b = b.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = f.mul(&r, &b);
            }
            b = f.mul(&b, &b);
            e >>= 1;
        }
        r
    };
    if f.is_zero(a) {
        return Some(f.zero());
    }
    if q % 2 == 0 {
        return Some(pow(a, q / 2));
    }
    if pow(a, (q - 1) / 2) != f.one() {
        return None;
    }
    let mut s = 0u32;
    let mut odd = q - 1;
    while odd % 2 == 0 {
        odd /= 2;
        s += 1;
    }
    let minus_one = f.neg(&f.one());
    let z = f
        .elements()?
        .into_iter()
        .find(|z| pow(z, (q - 1) / 2) == minus_one)?;
    let mut m = s;
    let mut c = pow(&z, odd);
    let mut t = pow(a, odd);
    let mut r = pow(a, odd.div_ceil(2));
    while t != f.one() {
        let mut i = 0u32;
        let mut tt = t.clone();
        while tt != f.one() {
            tt = f.mul(&tt, &tt);
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..m - i - 1 {
            b = f.mul(&b, &b);
        }
        m = i;
        c = f.mul(&b, &b);
        t = f.mul(&t, &c);
        r = f.mul(&r, &b);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parse_and_print_specs() {
        assert_eq!("q".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert_eq!("gf5".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(5));
        assert_eq!("GF7^2".parse::<FieldSpec>().unwrap(), FieldSpec::PrimeSquare(7));
        assert_eq!("gf4".parse::<FieldSpec>(), Err(FieldError::NotPrime(4)));
        assert!("z5".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::PrimeSquare(3).to_string(), "gf3^2");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.from_rational(&BigRational::new(1.into(), 2.into())).unwrap(), 4);
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.primitive_cube_root(), Some(2));
        assert!(PrimeField::new(5).unwrap().primitive_cube_root().is_none());
        assert!(f.from_rational(&BigRational::new(1.into(), 7.into())).is_err());
    }

    #[test]
    fn square_field_is_a_field() {
        for p in [2u32, 3, 5, 7] {
            let f = PrimeSquareField::new(p).unwrap();
            let els = f.elements().unwrap();
            assert_eq!(els.len() as u32, p * p);
            for a in els.iter().filter(|a| !f.is_zero(a)) {
                let i = f.inv(a).unwrap();
                assert_eq!(f.mul(a, &i), f.one(), "p={p} a={a:?}");
            }
        }
    }

    #[test]
    fn square_roots_exist_in_square_fields() {
        for p in [3u32, 5, 7] {
            let f = PrimeSquareField::new(p).unwrap();
            // Every element of GF(p) is a square in GF(p²).
            for a in 0..p {
                let r = f.sqrt(&(a, 0)).expect("square root");
                assert_eq!(f.mul(&r, &r), (a, 0));
            }
        }
        let f = PrimeField::new(13).unwrap();
        for a in 0..13u32 {
            if let Some(r) = f.sqrt(&a) {
                assert_eq!(f.mul(&r, &r), a);
            }
        }
        assert!(f.sqrt(&2).is_none());
    }

    #[test]
    fn cube_roots_in_square_fields() {
        let f = PrimeSquareField::new(5).unwrap();
        let w = f.primitive_cube_root().unwrap();
        assert_ne!(w, f.one());
        assert_eq!(f.mul(&w, &f.mul(&w, &w)), f.one());
    }

    #[test]
    fn rational_sampling_is_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let v = Rationals.sample(&mut rng);
            assert!(v.numer().abs() <= BigInt::from(SAMPLE_NUMERATOR_HEIGHT));
        }
        assert_eq!(
            Rationals.sqrt(&BigRational::new(9.into(), 4.into())),
            Some(BigRational::new(3.into(), 2.into()))
        );
    }
}
