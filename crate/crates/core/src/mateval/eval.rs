//! Polynomial evaluation at matrices.
//!
//! A [`CompiledPoly`] fixes the variable order and converts coefficients
//! into the target ring once, so that censuses can evaluate the same
//! polynomial millions of times. Lie polynomials are evaluated as bracket
//! trees; this agrees with evaluating the expansion because matrix
//! evaluation is an algebra homomorphism.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, RngCore};

use super::{Domain, MatevalError};
use crate::field::{Field, Ring};
use crate::freelie::{AssocPolynomial, LiePolynomial, LieTerm, VarId};
use crate::matrix::Matrix;

/// A polynomial in either the free associative or the free Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Poly {
    Assoc(AssocPolynomial),
    Lie(LiePolynomial),
}

impl Poly {
    /// Variables in sorted order; this is the argument order for evaluation.
    pub fn variables(&self) -> Vec<VarId> {
        match self {
            Poly::Assoc(p) => p.variables(),
            Poly::Lie(p) => p.variables(),
        }
    }

    pub fn to_assoc(&self) -> AssocPolynomial {
        match self {
            Poly::Assoc(p) => p.clone(),
            Poly::Lie(p) => p.expand(),
        }
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            Poly::Assoc(p) => p.degree(),
            Poly::Lie(p) => p.degree(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Poly::Assoc(p) => p.is_zero(),
            Poly::Lie(p) => p.is_zero(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Poly::Assoc(p) => write!(f, "{p}"),
            Poly::Lie(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Debug)]
enum Node {
    Leaf(usize),
    Bracket(Box<Node>, Box<Node>),
}

#[derive(Clone, Debug)]
enum Body<E> {
    /// Coefficient and the argument slots of each word.
    Assoc(Vec<(E, Vec<usize>)>),
    Lie(Vec<(E, Node)>),
}

/// A polynomial prepared for repeated evaluation over one ring.
#[derive(Clone, Debug)]
pub struct CompiledPoly<E> {
    vars: Vec<VarId>,
    body: Body<E>,
}

impl<E: Clone + PartialEq> CompiledPoly<E> {
    pub fn compile<R: Ring<Elem = E>>(r: &R, p: &Poly) -> Result<Self, MatevalError> {
        let vars = p.variables();
        let slot = |v: &VarId| vars.binary_search(v).expect("variable list is complete");
        let body = match p {
            Poly::Assoc(a) => Body::Assoc(
                a.terms()
                    .filter_map(|(w, c)| {
                        let c = match r.from_rational(c) {
                            Ok(c) => c,
                            Err(e) => return Some(Err(e)),
                        };
                        (!r.is_zero(&c)).then(|| Ok((c, w.letters().iter().map(slot).collect())))
                    })
                    .collect::<Result<_, _>>()?,
            ),
            Poly::Lie(l) => {
                fn node(t: &LieTerm, slot: &dyn Fn(&VarId) -> usize) -> Node {
                    match t {
                        LieTerm::Leaf(v) => Node::Leaf(slot(v)),
                        LieTerm::Bracket(a, b, _) => Node::Bracket(Box::new(node(a, slot)), Box::new(node(b, slot))),
                    }
                }
                Body::Lie(
                    l.terms()
                        .filter_map(|(t, c)| {
                            let c = match r.from_rational(c) {
                                Ok(c) => c,
                                Err(e) => return Some(Err(e)),
                            };
                            (!r.is_zero(&c)).then(|| Ok((c, node(t, &slot))))
                        })
                        .collect::<Result<_, _>>()?,
                )
            }
        };
        Ok(CompiledPoly { vars, body })
    }

    /// Number of arguments.
    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn variables(&self) -> &[VarId] {
        &self.vars
    }

    /// Value at `args` (in [`Self::variables`] order) for `n×n` matrices.
    pub fn evaluate<R: Ring<Elem = E>>(&self, r: &R, n: usize, args: &[Matrix<E>]) -> Matrix<E> {
        debug_assert_eq!(args.len(), self.vars.len());
        let mut acc = Matrix::zero(r, n);
        match &self.body {
            Body::Assoc(terms) => {
                for (c, word) in terms {
                    let mono = match word.split_first() {
                        None => Matrix::identity(r, n),
                        Some((&first, rest)) => rest.iter().fold(args[first].clone(), |m, &i| m.mul(r, &args[i])),
                    };
                    acc = acc.add(r, &mono.scale(r, c));
                }
            }
            Body::Lie(terms) => {
                fn go<R: Ring>(r: &R, node: &Node, args: &[Matrix<R::Elem>]) -> Matrix<R::Elem> {
                    match node {
                        Node::Leaf(i) => args[*i].clone(),
                        Node::Bracket(a, b) => go(r, a, args).bracket(r, &go(r, b, args)),
                    }
                }
                for (c, t) in terms {
                    acc = acc.add(r, &go(r, t, args).scale(r, c));
                }
            }
        }
        acc
    }
}

/// Evaluates `p` at the matrices assigned to its variables.
pub fn evaluate_poly<R: Ring>(
    r: &R,
    p: &Poly,
    assignment: &BTreeMap<VarId, Matrix<R::Elem>>,
) -> Result<Matrix<R::Elem>, MatevalError> {
    let n = assignment.values().next().ok_or(MatevalError::NoDimension)?.dim();
    if let Some(m) = assignment.values().find(|m| m.dim() != n) {
        return Err(MatevalError::ShapeMismatch {
            expected: n,
            found: m.dim(),
        });
    }
    let compiled = CompiledPoly::compile(r, p)?;
    let args = compiled
        .variables()
        .iter()
        .map(|v| assignment.get(v).cloned().ok_or(MatevalError::UnassignedVariable(*v)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(compiled.evaluate(r, n, &args))
}

/// Random trace-zero matrix with integer entries in `[-height, height]`
/// (the last diagonal entry balances the trace).
pub fn random_trace_zero<R: Ring>(r: &R, n: usize, rng: &mut dyn RngCore, height: i64) -> Matrix<R::Elem> {
    let mut m = Matrix::zero(r, n);
    let mut diag = 0i64;
    for i in 0..n {
        for j in 0..n {
            if i == n - 1 && j == n - 1 {
                continue;
            }
            let v = rng.gen_range(-height..=height);
            if i == j {
                diag += v;
            }
            m.set(i, j, r.from_i64(v));
        }
    }
    m.set(n - 1, n - 1, r.from_i64(-diag));
    m
}

/// Random element of `domain` with entries from [`Field::sample`].
pub fn sample_matrix<F: Field>(f: &F, domain: Domain, rng: &mut dyn RngCore) -> Matrix<F::Elem> {
    let n = domain.dim();
    let mut m = Matrix::zero(f, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, f.sample(rng));
        }
    }
    if domain.trace_zero() {
        let rest = (0..n - 1).fold(f.zero(), |acc, i| f.add(&acc, m.get(i, i)));
        m.set(n - 1, n - 1, f.neg(&rest));
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::freelie::standard_polynomial;
    use crate::matrix::all_trace_zero;
    use num_rational::BigRational;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn commutator() -> Poly {
        Poly::Lie(LiePolynomial::from_term(LieTerm::bracket(LieTerm::x(1), LieTerm::x(2))))
    }

    #[test]
    fn bracket_of_units() {
        let r = Rationals;
        let mut a = BTreeMap::new();
        a.insert(VarId::x(1), Matrix::unit(&r, 2, 0, 1));
        a.insert(VarId::x(2), Matrix::unit(&r, 2, 1, 0));
        let v = evaluate_poly(&r, &commutator(), &a).unwrap();
        assert_eq!(v, Matrix::diag(&r, vec![q(1, 1), q(-1, 1)]));
    }

    #[test]
    fn half_h_with_e12() {
        let r = Rationals;
        let mut a = BTreeMap::new();
        a.insert(VarId::x(1), Matrix::diag(&r, vec![q(1, 2), q(-1, 2)]));
        a.insert(VarId::x(2), Matrix::unit(&r, 2, 0, 1));
        let v = evaluate_poly(&r, &commutator(), &a).unwrap();
        assert_eq!(v, Matrix::unit(&r, 2, 0, 1));
    }

    #[test]
    fn errors() {
        let r = Rationals;
        let mut a = BTreeMap::new();
        a.insert(VarId::x(1), Matrix::unit(&r, 2, 0, 1));
        assert_eq!(
            evaluate_poly(&r, &commutator(), &a),
            Err(MatevalError::UnassignedVariable(VarId::x(2)))
        );
        a.insert(VarId::x(2), Matrix::identity(&r, 3));
        assert!(matches!(
            evaluate_poly(&r, &commutator(), &a),
            Err(MatevalError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn s4_on_some_sl2_gf3() {
        let f = PrimeField::new(3).unwrap();
        let s4 = CompiledPoly::compile(&f, &Poly::Assoc(standard_polynomial(4))).unwrap();
        let sl = all_trace_zero(&f, 2).unwrap();
        for i in 0..sl.len() {
            let args = [sl[i].clone(), sl[(i * 7 + 1) % 27].clone(), sl[(i * 5 + 2) % 27].clone(), sl[(i + 13) % 27].clone()];
            assert!(s4.evaluate(&f, 2, &args).is_zero(&f));
        }
    }

    #[test]
    fn lie_tree_matches_expansion() {
        let r = Rationals;
        let t = LieTerm::bracket(LieTerm::bracket(LieTerm::x(1), LieTerm::x(2)), LieTerm::x(1));
        let lie = Poly::Lie(LiePolynomial::from_term(t));
        let assoc = Poly::Assoc(lie.to_assoc());
        let mut a = BTreeMap::new();
        a.insert(VarId::x(1), Matrix::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(3, 1), q(-1, 1)]]));
        a.insert(VarId::x(2), Matrix::from_rows(vec![vec![q(0, 1), q(1, 2)], vec![q(5, 1), q(7, 1)]]));
        assert_eq!(evaluate_poly(&r, &lie, &a), evaluate_poly(&r, &assoc, &a));
    }
}
