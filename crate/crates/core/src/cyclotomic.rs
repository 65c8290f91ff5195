//! The cyclotomic field ℚ(ρ), ρ a primitive n-th root of unity.
//!
//! Elements are stored as coefficient vectors on `1, ρ, …, ρ^{φ(n)−1}` and
//! reduced modulo the n-th cyclotomic polynomial Φ_n.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer polynomial in ascending coefficient order.
type IntPoly = Vec<BigInt>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclotomicScalar {
    coeffs: Vec<BigRational>,
}

#[derive(Clone, Debug)]
pub struct CyclotomicField {
    n: u32,
    /// Φ_n, monic, ascending.
    modulus: IntPoly,
    /// ρ^e for e in 0..n.
    powers: Vec<CyclotomicScalar>,
}

/// Φ_n with integer coefficients.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n − 1
    let mut p: IntPoly = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n % d == 0) {
        p = exact_div(&p, &cyclotomic_polynomial(d));
    }
    p
}

/// Exact division of integer polynomials by a monic divisor.
fn exact_div(num: &IntPoly, den: &IntPoly) -> IntPoly {
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let mut rem = num.clone();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quot
}

fn totient(n: u32) -> usize {
    (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count()
}

impl CyclotomicField {
    pub fn new(n: u32) -> Self {
        assert!(n >= 1, "root of unity order must be positive");
        let modulus = cyclotomic_polynomial(n);
        debug_assert_eq!(modulus.len() - 1, totient(n));
        let mut field = CyclotomicField {
            n,
            modulus,
            powers: Vec::new(),
        };
        let mut cur = field.one();
        let rho = field.rho();
        let mut powers = Vec::with_capacity(n as usize);
        for _ in 0..n {
            powers.push(cur.clone());
            cur = field.mul(&cur, &rho);
        }
        field.powers = powers;
        field
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    /// φ(n), the dimension over ℚ.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn zero(&self) -> CyclotomicScalar {
        CyclotomicScalar {
            coeffs: vec![BigRational::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> CyclotomicScalar {
        self.from_rational(BigRational::one())
    }

    pub fn from_rational(&self, q: BigRational) -> CyclotomicScalar {
        let mut z = self.zero();
        z.coeffs[0] = q;
        z
    }

    pub fn from_i64(&self, v: i64) -> CyclotomicScalar {
        self.from_rational(BigRational::from_integer(v.into()))
    }

    /// ρ itself (for n ≤ 2, reduced into ℚ).
    pub fn rho(&self) -> CyclotomicScalar {
        let mut raw = vec![BigRational::zero(); 2];
        raw[1] = BigRational::one();
        self.reduce(raw)
    }

    /// ρ^e for any integer e.
    pub fn rho_pow(&self, e: i64) -> CyclotomicScalar {
        let idx = e.rem_euclid(i64::from(self.n)) as usize;
        if self.powers.is_empty() {
            // Only reached while building the table.
            let mut cur = self.one();
            for _ in 0..idx {
                cur = self.mul(&cur, &self.rho());
            }
            return cur;
        }
        self.powers[idx].clone()
    }

    fn reduce(&self, mut raw: Vec<BigRational>) -> CyclotomicScalar {
        let d = self.degree();
        while raw.len() > d {
            let top = raw.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let shift = raw.len() - d;
            for (j, m) in self.modulus.iter().take(d).enumerate() {
                raw[shift + j] -= &top * BigRational::from_integer(m.clone());
            }
        }
        raw.resize(d, BigRational::zero());
        CyclotomicScalar { coeffs: raw }
    }

    pub fn add(&self, a: &CyclotomicScalar, b: &CyclotomicScalar) -> CyclotomicScalar {
        CyclotomicScalar {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, a: &CyclotomicScalar, b: &CyclotomicScalar) -> CyclotomicScalar {
        CyclotomicScalar {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn neg(&self, a: &CyclotomicScalar) -> CyclotomicScalar {
        CyclotomicScalar {
            coeffs: a.coeffs.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, a: &CyclotomicScalar, b: &CyclotomicScalar) -> CyclotomicScalar {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut raw = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        self.reduce(raw)
    }

    pub fn scale(&self, a: &CyclotomicScalar, q: &BigRational) -> CyclotomicScalar {
        CyclotomicScalar {
            coeffs: a.coeffs.iter().map(|x| x * q).collect(),
        }
    }
}

impl CyclotomicScalar {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coordinates on `1, ρ, …, ρ^{φ(n)−1}`.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }
}

impl fmt::Display for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match i {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if i == 1 {
                        write!(f, "rho")?;
                    } else {
                        write!(f, "rho^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(3), ints(&[1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn rho_has_order_n() {
        for n in 2..=8 {
            let k = CyclotomicField::new(n);
            let mut p = k.one();
            for e in 1..=n {
                p = k.mul(&p, &k.rho());
                assert_eq!(p == k.one(), e == n, "n={n} e={e}");
            }
        }
    }

    #[test]
    fn n_two_is_rationals_with_minus_one() {
        let k = CyclotomicField::new(2);
        assert_eq!(k.degree(), 1);
        assert_eq!(k.rho(), k.from_i64(-1));
        assert_eq!(k.rho_pow(-3), k.from_i64(-1));
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let k = CyclotomicField::new(3);
        let s = k.add(&k.add(&k.one(), &k.rho()), &k.rho_pow(2));
        assert!(s.is_zero());
        assert_eq!(k.rho_pow(2).to_string(), "-1 - rho");
    }
}
