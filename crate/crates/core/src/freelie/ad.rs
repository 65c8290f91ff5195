//! Conversion between Lie polynomials and ad-polynomials.
//!
//! An ad-chain `c · ad_{a_1}⋯ad_{a_t}(a)` stands for the right-normed
//! bracket `c · [a_1,[a_2,…,[a_t,a]…]]`.

use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::{FreeLieError, LiePolynomial, LieTerm, VarId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdChain {
    /// `a_1, …, a_t`; `a_t` is applied first.
    pub chain: Vec<LiePolynomial>,
    pub target: LiePolynomial,
    pub coefficient: BigRational,
}

/// A sum of ad-chains.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdPolynomial {
    pub chains: Vec<AdChain>,
}

impl AdChain {
    pub fn new(chain: Vec<LiePolynomial>, target: LiePolynomial, coefficient: BigRational) -> Self {
        AdChain {
            chain,
            target,
            coefficient,
        }
    }

    /// The Lie polynomial this chain denotes, extending multilinearly over
    /// chain arguments that are not single monomials.
    pub fn to_lie(&self) -> LiePolynomial {
        let mut acc = self.target.clone();
        for a in self.chain.iter().rev() {
            acc = super::bracket_of(a, &acc);
        }
        acc.scale(&self.coefficient)
    }
}

impl AdPolynomial {
    pub fn to_lie(&self) -> LiePolynomial {
        self.chains
            .iter()
            .fold(LiePolynomial::zero(), |acc, c| &acc + &c.to_lie())
    }

    /// Rewrites every argument into single variables using
    /// `ad_{[u,v]} = ad_u ad_v − ad_v ad_u`.
    pub fn expand_arguments(&self) -> AdPolynomial {
        let mut out = Vec::new();
        for c in &self.chains {
            // Each argument becomes a list of (coefficient, letter sequence).
            let mut words: Vec<(BigRational, Vec<VarId>)> = vec![(c.coefficient.clone(), Vec::new())];
            for arg in &c.chain {
                let expanded = ad_words_of_poly(arg);
                let mut next = Vec::with_capacity(words.len() * expanded.len());
                for (a, w) in &words {
                    for (b, v) in &expanded {
                        let mut joined = w.clone();
                        joined.extend_from_slice(v);
                        next.push((a * b, joined));
                    }
                }
                words = next;
            }
            for (coef, letters) in words {
                out.push(AdChain {
                    chain: letters.into_iter().map(LiePolynomial::var).collect(),
                    target: c.target.clone(),
                    coefficient: coef,
                });
            }
        }
        AdPolynomial { chains: out }
    }
}

fn ad_words_of_poly(p: &LiePolynomial) -> Vec<(BigRational, Vec<VarId>)> {
    p.terms()
        .flat_map(|(t, c)| {
            ad_words(t)
                .into_iter()
                .map(move |(s, w)| (s * c, w))
        })
        .collect()
}

/// `ad_t` as a signed sum of products of letter ad-operators.
fn ad_words(t: &LieTerm) -> Vec<(BigRational, Vec<VarId>)> {
    match t {
        LieTerm::Leaf(v) => vec![(BigRational::one(), vec![*v])],
        LieTerm::Bracket(u, v, _) => {
            let (us, vs) = (ad_words(u), ad_words(v));
            let mut out = Vec::with_capacity(2 * us.len() * vs.len());
            for (a, x) in &us {
                for (b, y) in &vs {
                    let c = a * b;
                    out.push((c.clone(), [x.as_slice(), y.as_slice()].concat()));
                    out.push((-c, [y.as_slice(), x.as_slice()].concat()));
                }
            }
            out
        }
    }
}

impl fmt::Display for AdChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.coefficient.is_one() {
            write!(f, "{}*", self.coefficient)?;
        }
        for a in &self.chain {
            match a.as_monomial() {
                Some(t) => write!(f, "ad_{t} ")?,
                None => write!(f, "ad_({a}) ")?,
            }
        }
        write!(f, "({})", self.target)
    }
}

impl fmt::Display for AdPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.chains.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.chains.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Rewrites `f` as ad-chains applied to `y`. Every Lie monomial of `f` must
/// contain `y` exactly once.
///
/// For a bracket `[h1,h2]` with `y` inside `h2` this prepends `ad_{h1}` to
/// the chains of `h2`; with `y` inside `h1` it uses `[h1,h2] = −[h2,h1]`.
pub fn lie_to_ad(f: &LiePolynomial, y: VarId) -> Result<AdPolynomial, FreeLieError> {
    let mut chains = Vec::new();
    for (t, c) in f.terms() {
        let count = t.count(y);
        if count != 1 {
            return Err(FreeLieError::BadDegreeInY {
                var: y,
                term: t.to_string(),
                count,
            });
        }
        let (sign, args) = ad_form_of_term(t, y);
        chains.push(AdChain {
            chain: args.into_iter().map(LiePolynomial::from_term).collect(),
            target: LiePolynomial::var(y),
            coefficient: if sign { c.clone() } else { -c },
        });
    }
    Ok(AdPolynomial { chains })
}

/// Returns (positive sign?, chain arguments) for a term containing `y` once.
fn ad_form_of_term(t: &LieTerm, y: VarId) -> (bool, Vec<LieTerm>) {
    match t {
        LieTerm::Leaf(_) => (true, Vec::new()),
        LieTerm::Bracket(l, r, _) => {
            if r.count(y) == 1 {
                let (s, mut args) = ad_form_of_term(r, y);
                args.insert(0, (**l).clone());
                (s, args)
            } else {
                let (s, mut args) = ad_form_of_term(l, y);
                args.insert(0, (**r).clone());
                (!s, args)
            }
        }
    }
}

/// The right-normed bracket `[a_1,[a_2,…,[a_t,a]…]]` of a chain whose
/// arguments and target are single Lie monomials. The chain coefficient is
/// not part of the result.
pub fn ad_to_lie(c: &AdChain) -> Result<LieTerm, FreeLieError> {
    let mono = |p: &LiePolynomial| {
        p.as_monomial()
            .cloned()
            .ok_or_else(|| FreeLieError::NotMonomial(p.to_string()))
    };
    let mut acc = mono(&c.target)?;
    for a in c.chain.iter().rev() {
        acc = LieTerm::bracket(mono(a)?, acc);
    }
    Ok(acc)
}
