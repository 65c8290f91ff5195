//! Exact linear algebra over the rationals.
//!
//! Systems are cleared of denominators row by row and reduced with
//! fraction-free (Bareiss) elimination over `BigInt`, so every intermediate
//! entry is an integer minor of the input. Back substitution into rational
//! solutions happens only at the end.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Row echelon form produced by fraction-free elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    /// The nonzero rows, in echelon order.
    rows: Vec<Vec<BigInt>>,
    /// Pivot column of each row of `rows`.
    pivots: Vec<usize>,
}

impl Echelon {
    /// Reduces `rows` (each of length `cols`).
    pub fn new(rows: Vec<Vec<BigRational>>, cols: usize) -> Self {
        let ints = rows.into_iter().map(|r| clear_denominators(&r)).collect();
        Self::from_integer_rows(ints, cols)
    }

    pub fn from_integer_rows(mut a: Vec<Vec<BigInt>>, cols: usize) -> Self {
        for row in &a {
            assert_eq!(row.len(), cols, "row length does not match column count");
        }
        a.retain(|r| r.iter().any(|x| !x.is_zero()));

        let nrows = a.len();
        let mut prev = BigInt::one();
        let mut r = 0;
        let mut pivots = Vec::new();
        for c in 0..cols {
            if r == nrows {
                break;
            }
            let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let (head, tail) = a.split_at_mut(r + 1);
            let pivot_row = &head[r];
            let pivot = pivot_row[c].clone();
            for row in tail.iter_mut() {
                let factor = std::mem::take(&mut row[c]);
                for j in c + 1..cols {
                    let v = &pivot * &row[j] - &factor * &pivot_row[j];
                    row[j] = if prev.is_one() { v } else { v / &prev };
                }
            }
            prev = pivot;
            pivots.push(c);
            r += 1;
        }
        a.truncate(r);
        Echelon {
            cols,
            rows: a,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis of the right kernel, one vector per free column. Each vector has
    /// a 1 in its free column and 0 in every other free column.
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = vec![BigRational::zero(); self.cols];
                x[free] = BigRational::one();
                self.back_substitute(&mut x);
                x
            })
            .collect()
    }

    /// Fills the pivot coordinates of `x` so that every row evaluates to 0,
    /// given the free coordinates already present in `x`.
    fn back_substitute(&self, x: &mut [BigRational]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots).rev() {
            let mut acc = BigRational::zero();
            for j in p + 1..self.cols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc += BigRational::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[p] = -acc / BigRational::from_integer(row[p].clone());
        }
    }
}

/// Multiplies a rational row by the lcm of its denominators.
pub fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let l = row
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter()
        .map(|q| q.numer() * (&l / q.denom()))
        .collect()
}

/// Divides an integer row by the gcd of its entries and makes the first
/// nonzero entry positive. Zero rows are returned unchanged.
pub fn primitive_part(mut row: Vec<BigInt>) -> Vec<BigInt> {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return row;
    }
    let negate = row.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in row.iter_mut() {
        *x = &*x / &g;
        if negate {
            *x = -&*x;
        }
    }
    row
}

/// Rank of a rational matrix given by rows.
pub fn rank(rows: Vec<Vec<BigRational>>, cols: usize) -> usize {
    Echelon::new(rows, cols).rank()
}

/// Solves `A x = b` where `A` is given column-wise. Returns one solution
/// (free variables set to 0) or `None` if the system is inconsistent.
pub fn solve_columns(columns: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let ncols = columns.len();
    let nrows = rhs.len();
    let rows: Vec<Vec<BigRational>> = (0..nrows)
        .map(|i| {
            columns
                .iter()
                .map(|c| c[i].clone())
                .chain(std::iter::once(rhs[i].clone()))
                .collect()
        })
        .collect();
    let ech = Echelon::new(rows, ncols + 1);
    if ech.pivots.last() == Some(&ncols) {
        return None;
    }
    // Solve with the augmented column treated as fixed at -1.
    let mut x = vec![BigRational::zero(); ncols + 1];
    x[ncols] = -BigRational::one();
    ech.back_substitute(&mut x);
    x.truncate(ncols);
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn qr(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn mat_vec(rows: &[Vec<BigRational>], x: &[BigRational]) -> Vec<BigRational> {
        rows.iter()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        let rows = vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(0), q(1), q(1)],
        ];
        assert_eq!(rank(rows, 3), 2);
        assert_eq!(rank(vec![], 4), 0);
        assert_eq!(rank(vec![vec![q(0), q(0)]], 2), 0);
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let rows = vec![
            vec![q(1), qr(1, 2), q(3), q(0)],
            vec![q(2), q(1), q(6), q(1)],
        ];
        let ech = Echelon::new(rows.clone(), 4);
        let ns = ech.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(mat_vec(&rows, &v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn skipped_column_keeps_divisions_exact() {
        // Second column is zero below the first pivot, forcing a skip.
        let rows = vec![
            vec![q(2), q(3), q(5), q(7)],
            vec![q(4), q(6), q(11), q(13)],
            vec![q(6), q(9), q(17), q(23)],
        ];
        let ech = Echelon::new(rows.clone(), 4);
        assert_eq!(ech.pivots(), &[0, 2, 3]);
        for v in ech.nullspace() {
            assert!(mat_vec(&rows, &v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let cols = vec![vec![q(1), q(0), q(1)], vec![q(0), q(1), q(1)]];
        let x = solve_columns(&cols, &[q(2), q(3), q(5)]).unwrap();
        assert_eq!(x, vec![q(2), q(3)]);
        assert!(solve_columns(&cols, &[q(2), q(3), q(6)]).is_none());
    }

    #[test]
    fn primitive_part_normalizes_sign_and_content() {
        let r = primitive_part(vec![0.into(), (-4).into(), 6.into()]);
        assert_eq!(r, vec![BigInt::from(0), 2.into(), (-3).into()]);
    }
}
