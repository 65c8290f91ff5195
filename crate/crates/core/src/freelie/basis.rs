use std::collections::BTreeMap;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::Zero;

use super::{AssocPolynomial, AssocWord, FreeLieError, LiePolynomial, LieTerm, VarId};
use crate::linalg;

/// Sign of a permutation given as a sequence of distinct integers.
pub(crate) fn permutation_sign(p: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The standard polynomial `s_k = Σ_{π∈S_k} sgn(π) x_{π(1)}⋯x_{π(k)}`.
pub fn standard_polynomial(k: usize) -> AssocPolynomial {
    assert!(k >= 1, "standard polynomial needs k >= 1");
    AssocPolynomial::from_terms((1..=k).permutations(k).map(|p| {
        let sign = permutation_sign(&p);
        let w = AssocWord(p.iter().map(|&i| VarId::x(i as u32)).collect());
        (w, BigRational::from_integer(sign.into()))
    }))
}

/// All `k!` multilinear words in `x1..xk`, in lexicographic order.
pub fn multilinear_words(k: usize) -> Vec<AssocWord> {
    (1..=k)
        .permutations(k)
        .map(|p| AssocWord(p.into_iter().map(|i| VarId::x(i as u32)).collect()))
        .collect()
}

/// Spanning set of the multilinear component of degree `k`: the right-normed
/// chains `[x_{σ(1)},[x_{σ(2)},…,[x_{σ(k−1)},x_k]…]]` over permutations σ of
/// `1..k−1`, in lexicographic order of σ. There are `(k−1)!` of them.
pub fn multilinear_lie_basis(k: usize) -> Vec<LieTerm> {
    assert!(k >= 1, "degree must be positive");
    if k == 1 {
        return vec![LieTerm::x(1)];
    }
    (1..k)
        .permutations(k - 1)
        .map(|p| {
            let parts = p
                .into_iter()
                .map(|i| LieTerm::x(i as u32))
                .chain(std::iter::once(LieTerm::x(k as u32)));
            LieTerm::right_normed(parts).expect("nonempty")
        })
        .collect()
}

/// Rank of the expansions of `multilinear_lie_basis(k)` inside the space of
/// multilinear words.
pub fn multilinear_lie_rank(k: usize) -> usize {
    let (_, columns) = basis_columns(k);
    let words = multilinear_words(k).len();
    let rows: Vec<Vec<BigRational>> = (0..words)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    linalg::rank(rows, columns.len())
}

/// Expansion coordinates of each basis element over the multilinear words.
fn basis_columns(k: usize) -> (Vec<LieTerm>, Vec<Vec<BigRational>>) {
    let index: BTreeMap<AssocWord, usize> = multilinear_words(k)
        .into_iter()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    let basis = multilinear_lie_basis(k);
    let columns = basis
        .iter()
        .map(|t| coordinates(&t.expand(), &index))
        .collect();
    (basis, columns)
}

fn coordinates(p: &AssocPolynomial, index: &BTreeMap<AssocWord, usize>) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); index.len()];
    for (w, c) in p.terms() {
        v[index[w]] = c.clone();
    }
    v
}

/// Decides whether a multilinear polynomial in `x1..xk` is a Lie polynomial.
///
/// Solves `p = Σ c_σ · expand(b_σ)` over the multilinear basis exactly and
/// returns the Lie combination when the system is consistent. The returned
/// witness expands back to `p`.
pub fn is_lie(p: &AssocPolynomial, k: usize) -> Result<Option<LiePolynomial>, FreeLieError> {
    assert!(k >= 1, "degree must be positive");
    p.check_multilinear(k)?;
    let index: BTreeMap<AssocWord, usize> = multilinear_words(k)
        .into_iter()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    let (basis, columns) = basis_columns(k);
    let rhs = coordinates(p, &index);
    let Some(solution) = linalg::solve_columns(&columns, &rhs) else {
        return Ok(None);
    };
    let witness = LiePolynomial::from_terms(basis.into_iter().zip(solution));
    debug_assert_eq!(&witness.expand(), p);
    Ok(Some(witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn standard_polynomial_small_cases() {
        assert_eq!(standard_polynomial(1), AssocPolynomial::x(1));
        let s2 = standard_polynomial(2);
        assert_eq!(s2.to_string(), "x1*x2 - x2*x1");
        let s3 = standard_polynomial(3);
        assert_eq!(s3.len(), 6);
        assert!(s3.terms().all(|(_, c)| c == &q(1) || c == &q(-1)));
        assert_eq!(standard_polynomial(5).len(), 120);
    }

    #[test]
    fn standard_polynomial_alternates() {
        // Substituting x2 := x1 word by word collapses s3 to zero.
        let s3 = standard_polynomial(3);
        let collapsed = AssocPolynomial::from_terms(s3.terms().map(|(w, c)| {
            let w = AssocWord(
                w.letters()
                    .iter()
                    .map(|&v| if v == VarId::x(2) { VarId::x(1) } else { v })
                    .collect(),
            );
            (w, c.clone())
        }));
        assert!(collapsed.is_zero());
    }

    #[test]
    fn basis_sizes_and_shape() {
        let b2 = multilinear_lie_basis(2);
        assert_eq!(b2.len(), 1);
        assert_eq!(b2[0].to_string(), "[x1,x2]");
        let b4 = multilinear_lie_basis(4);
        assert_eq!(b4.len(), 6);
        assert_eq!(b4[0].to_string(), "[x1,[x2,[x3,x4]]]");
        assert_eq!(multilinear_lie_basis(1), vec![LieTerm::x(1)]);
    }

    #[test]
    fn ranks_are_factorial() {
        assert_eq!(multilinear_lie_rank(2), 1);
        assert_eq!(multilinear_lie_rank(3), 2);
        assert_eq!(multilinear_lie_rank(4), 6);
    }

    #[test]
    fn is_lie_examples() {
        let w = is_lie(&standard_polynomial(2), 2).unwrap().unwrap();
        assert_eq!(w.to_string(), "[x1,x2]");
        assert!(is_lie(&standard_polynomial(3), 3).unwrap().is_none());
        assert!(is_lie(&standard_polynomial(4), 4).unwrap().is_none());

        // [(x1x2 + x2x1), x3]
        let x = |i| AssocPolynomial::x(i);
        let sym = &(&x(1) * &x(2)) + &(&x(2) * &x(1));
        let f = sym.commutator(&x(3));
        assert!(is_lie(&f, 3).unwrap().is_none());

        let t = LieTerm::bracket(
            LieTerm::bracket(LieTerm::x(1), LieTerm::x(2)),
            LieTerm::bracket(LieTerm::x(3), LieTerm::x(4)),
        );
        let e = t.expand();
        let w = is_lie(&e, 4).unwrap().unwrap();
        assert_eq!(w.expand(), e);
    }

    #[test]
    fn is_lie_rejects_non_multilinear() {
        let p = &AssocPolynomial::x(1) * &AssocPolynomial::x(1);
        assert!(matches!(is_lie(&p, 2), Err(FreeLieError::NotMultilinear { .. })));
        assert!(is_lie(&AssocPolynomial::one(), 1).is_err());
    }

    #[test]
    fn zero_is_lie() {
        assert!(is_lie(&AssocPolynomial::zero(), 3).unwrap().unwrap().is_zero());
    }

    #[test]
    fn sign_of_permutations() {
        assert_eq!(permutation_sign(&[1, 2, 3]), 1);
        assert_eq!(permutation_sign(&[2, 1, 3]), -1);
        assert_eq!(permutation_sign(&[3, 1, 2]), 1);
    }
}
