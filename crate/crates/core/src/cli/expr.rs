//! Expression and word syntax.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := [rational] factor ('*'? factor)*
//! factor := var | 's' int | '[' expr ',' expr ']' | '(' expr ')' | factor '^' nat
//! var    := 'x' int | 'y'
//! ```
//!
//! A leading sign and an optional `p/q` literal fold into the term's
//! coefficient. Words use `x1..x9` with optional integer exponents,
//! juxtaposed or joined by `*`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::freelie::{bracket_of, standard_polynomial, AssocPolynomial, LiePolynomial, VarId};
use crate::mateval::Poly;
use crate::wordmaps::{reduce_word, GroupWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: BigRational,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Var(VarId),
    /// `s<k>`, the standard polynomial on `x1..xk`.
    Standard(usize),
    Bracket(Box<Expr>, Box<Expr>),
    Paren(Box<Expr>),
    Power(Box<Factor>, u32),
}

impl Expr {
    /// Only variables, brackets and scalar combinations.
    pub fn is_pure_lie(&self) -> bool {
        !self.terms.is_empty()
            && self.terms.iter().all(|t| {
                t.factors.len() == 1
                    && match &t.factors[0] {
                        Factor::Var(_) => true,
                        Factor::Bracket(a, b) => a.is_pure_lie() && b.is_pure_lie(),
                        Factor::Paren(e) => e.is_pure_lie(),
                        Factor::Standard(_) | Factor::Power(..) => false,
                    }
            })
    }

    pub fn to_assoc(&self) -> AssocPolynomial {
        self.terms.iter().fold(AssocPolynomial::zero(), |acc, t| {
            let prod = t
                .factors
                .iter()
                .fold(AssocPolynomial::one(), |p, f| &p * &f.to_assoc());
            &acc + &prod.scale(&t.coeff)
        })
    }

    /// The Lie polynomial, when the expression is syntactically Lie.
    pub fn to_lie(&self) -> Option<LiePolynomial> {
        if !self.is_pure_lie() {
            return None;
        }
        Some(self.terms.iter().fold(LiePolynomial::zero(), |acc, t| {
            let v = t.factors[0].to_lie().expect("purity checked");
            &acc + &v.scale(&t.coeff)
        }))
    }

    /// Lie form when pure, associative otherwise.
    pub fn to_poly(&self) -> Poly {
        match self.to_lie() {
            Some(l) => Poly::Lie(l),
            None => Poly::Assoc(self.to_assoc()),
        }
    }
}

impl Factor {
    fn to_assoc(&self) -> AssocPolynomial {
        match self {
            Factor::Var(v) => AssocPolynomial::var(*v),
            Factor::Standard(k) => standard_polynomial(*k),
            Factor::Bracket(a, b) => a.to_assoc().commutator(&b.to_assoc()),
            Factor::Paren(e) => e.to_assoc(),
            Factor::Power(f, e) => f.to_assoc().pow(*e),
        }
    }

    fn to_lie(&self) -> Option<LiePolynomial> {
        match self {
            Factor::Var(v) => Some(LiePolynomial::var(*v)),
            Factor::Bracket(a, b) => Some(bracket_of(&a.to_lie()?, &b.to_lie()?)),
            Factor::Paren(e) => e.to_lie(),
            _ => None,
        }
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            if i > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let abs = t.coeff.abs();
            if t.factors.is_empty() {
                write_rational(f, &abs)?;
                continue;
            }
            if !abs.is_one() {
                write_rational(f, &abs)?;
                write!(f, "*")?;
            }
            for (j, x) in t.factors.iter().enumerate() {
                if j > 0 {
                    write!(f, "*")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Var(v) => write!(f, "{v}"),
            Factor::Standard(k) => write!(f, "s{k}"),
            Factor::Bracket(a, b) => write!(f, "[{a},{b}]"),
            Factor::Paren(e) => write!(f, "({e})"),
            Factor::Power(x, e) => write!(f, "{x}^{e}"),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    /// Digits immediately at the cursor (no whitespace skipping).
    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.s[start..self.pos]).expect("ascii"))
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        match self.digits() {
            Some(d) => Ok(d.parse().expect("digits")),
            None => self.err("expected an integer"),
        }
    }

    fn small<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, ParseError> {
        let at = self.pos;
        match self.digits().map(str::parse::<T>) {
            Some(Ok(v)) => Ok(v),
            _ => {
                self.pos = at;
                self.err(format!("expected {what}"))
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let mut negative = self.eat(b'-');
        if !negative {
            self.eat(b'+');
        }
        loop {
            let mut t = self.term()?;
            if negative {
                t.coeff = -t.coeff;
            }
            terms.push(t);
            if self.eat(b'+') {
                negative = false;
            } else if self.eat(b'-') {
                negative = true;
            } else {
                break;
            }
        }
        Ok(Expr { terms })
    }

    fn starts_factor(&mut self) -> bool {
        matches!(self.peek(), Some(b'x' | b'y' | b's' | b'[' | b'('))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut coeff = BigRational::one();
        let mut factors = Vec::new();
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let num = self.int()?;
            let den = if self.eat(b'/') { self.int()? } else { BigInt::one() };
            if den.is_zero() {
                return self.err("zero denominator");
            }
            coeff = BigRational::new(num, den);
            if !self.eat(b'*') && !self.starts_factor() {
                return Ok(Term { coeff, factors });
            }
        }
        factors.push(self.factor()?);
        loop {
            if self.eat(b'*') {
                factors.push(self.factor()?);
            } else if self.starts_factor() {
                factors.push(self.factor()?);
            } else {
                break;
            }
        }
        Ok(Term { coeff, factors })
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let mut f = match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let i: u32 = self.small("a variable index")?;
                if i == 0 {
                    return self.err("variable indices start at 1");
                }
                Factor::Var(VarId::x(i))
            }
            Some(b'y') => {
                self.pos += 1;
                Factor::Var(VarId::Y)
            }
            Some(b's') => {
                self.pos += 1;
                let k: usize = self.small("a standard polynomial degree")?;
                if k == 0 {
                    return self.err("s0 is not defined");
                }
                Factor::Standard(k)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b']')?;
                Factor::Bracket(Box::new(a), Box::new(b))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Factor::Paren(Box::new(e))
            }
            _ => return self.err("expected a variable, s<k>, '[' or '('"),
        };
        while self.eat(b'^') {
            self.skip_ws();
            let e: u32 = self.small("a nonnegative exponent")?;
            f = Factor::Power(Box::new(f), e);
        }
        Ok(f)
    }
}

pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Parses a group word such as `x1 x2 x1^-1 x2^-1` or `x1^2`; `1` is the
/// empty word.
pub fn parse_word(text: &str) -> Result<GroupWord, ParseError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let mut raw = Vec::new();
    if p.peek() == Some(b'1') {
        p.pos += 1;
        if p.peek().is_some() {
            return p.err("unexpected trailing input");
        }
        return Ok(GroupWord::default());
    }
    loop {
        match p.peek() {
            None => break,
            Some(b'x') => {
                p.pos += 1;
                let g: u32 = p.small("a generator index")?;
                if !(1..=9).contains(&g) {
                    return p.err("generators are x1..x9");
                }
                let mut e = 1i64;
                if p.eat(b'^') {
                    p.skip_ws();
                    let neg = p.eat(b'-');
                    p.skip_ws();
                    let v: i64 = p.small("an integer exponent")?;
                    e = if neg { -v } else { v };
                }
                raw.push((g, e));
                p.eat(b'*');
            }
            Some(_) => return p.err("expected a generator x1..x9"),
        }
    }
    if raw.is_empty() {
        return p.err("empty word; write 1 for the identity word");
    }
    Ok(reduce_word(&raw))
}
