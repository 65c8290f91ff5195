//! Square matrices over a [`Ring`]. Operations take the ring as an explicit
//! context argument.

use smallvec::SmallVec;

use crate::field::{Field, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<E> {
    n: usize,
    entries: SmallVec<[E; 9]>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = E>) -> Self {
        let entries: SmallVec<[E; 9]> = entries.into_iter().collect();
        assert_eq!(entries.len(), n * n, "wrong number of entries");
        Matrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry in row `i`, column `j` (0-based).
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    pub fn map<T: Clone>(&self, f: impl FnMut(&E) -> T) -> Matrix<T> {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

impl<E: Clone + PartialEq> Matrix<E> {
    pub fn zero<R: Ring<Elem = E>>(r: &R, n: usize) -> Self {
        Matrix {
            n,
            entries: std::iter::repeat_n(r.zero(), n * n).collect(),
        }
    }

    pub fn identity<R: Ring<Elem = E>>(r: &R, n: usize) -> Self {
        Self::scalar(r, n, r.one())
    }

    pub fn scalar<R: Ring<Elem = E>>(r: &R, n: usize, c: E) -> Self {
        let mut m = Self::zero(r, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    /// Matrix unit with a 1 at `(i, j)` (0-based).
    pub fn unit<R: Ring<Elem = E>>(r: &R, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(r, n);
        m.set(i, j, r.one());
        m
    }

    pub fn diag<R: Ring<Elem = E>>(r: &R, d: Vec<E>) -> Self {
        let n = d.len();
        let mut m = Self::zero(r, n);
        for (i, v) in d.into_iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn add<R: Ring<Elem = E>>(&self, r: &R, o: &Self) -> Self {
        self.zip(o, |a, b| r.add(a, b))
    }

    pub fn sub<R: Ring<Elem = E>>(&self, r: &R, o: &Self) -> Self {
        self.zip(o, |a, b| r.sub(a, b))
    }

    pub fn neg<R: Ring<Elem = E>>(&self, r: &R) -> Self {
        self.map(|a| r.neg(a))
    }

    pub fn scale<R: Ring<Elem = E>>(&self, r: &R, c: &E) -> Self {
        self.map(|a| r.mul(c, a))
    }

    fn zip(&self, o: &Self, f: impl Fn(&E, &E) -> E) -> Self {
        assert_eq!(self.n, o.n, "dimension mismatch");
        Matrix {
            n: self.n,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn mul<R: Ring<Elem = E>>(&self, r: &R, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "dimension mismatch");
        let n = self.n;
        let mut out = SmallVec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = r.mul(self.get(i, 0), o.get(0, j));
                for k in 1..n {
                    acc = r.add(&acc, &r.mul(self.get(i, k), o.get(k, j)));
                }
                out.push(acc);
            }
        }
        Matrix { n, entries: out }
    }

    /// `self·o − o·self`.
    pub fn bracket<R: Ring<Elem = E>>(&self, r: &R, o: &Self) -> Self {
        self.mul(r, o).sub(r, &o.mul(r, self))
    }

    pub fn pow<R: Ring<Elem = E>>(&self, r: &R, e: u32) -> Self {
        let mut out = Self::identity(r, self.n);
        for _ in 0..e {
            out = out.mul(r, self);
        }
        out
    }

    pub fn trace<R: Ring<Elem = E>>(&self, r: &R) -> E {
        (0..self.n).fold(r.zero(), |acc, i| r.add(&acc, self.get(i, i)))
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, r: &R) -> bool {
        self.entries.iter().all(|a| r.is_zero(a))
    }

    pub fn is_scalar<R: Ring<Elem = E>>(&self, r: &R) -> bool {
        let c = self.get(0, 0);
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let v = self.get(i, j);
                if i == j {
                    v == c
                } else {
                    r.is_zero(v)
                }
            })
        })
    }

    /// Determinant by cofactor expansion (division free).
    pub fn det<R: Ring<Elem = E>>(&self, r: &R) -> E {
        let idx: Vec<usize> = (0..self.n).collect();
        self.minor(r, &idx, &idx)
    }

    fn minor<R: Ring<Elem = E>>(&self, r: &R, rows: &[usize], cols: &[usize]) -> E {
        match rows.len() {
            0 => r.one(),
            1 => self.get(rows[0], cols[0]).clone(),
            2 => r.sub(
                &r.mul(self.get(rows[0], cols[0]), self.get(rows[1], cols[1])),
                &r.mul(self.get(rows[0], cols[1]), self.get(rows[1], cols[0])),
            ),
            _ => {
                let mut acc = r.zero();
                for (k, &c) in cols.iter().enumerate() {
                    let a = self.get(rows[0], c);
                    if r.is_zero(a) {
                        continue;
                    }
                    let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let term = r.mul(a, &self.minor(r, &rows[1..], &rest));
                    acc = if k % 2 == 0 { r.add(&acc, &term) } else { r.sub(&acc, &term) };
                }
                acc
            }
        }
    }

    /// Second elementary symmetric function of the eigenvalues: the sum of
    /// the principal 2×2 minors.
    pub fn e2<R: Ring<Elem = E>>(&self, r: &R) -> E {
        let mut acc = r.zero();
        for i in 0..self.n {
            for j in i + 1..self.n {
                acc = r.add(&acc, &self.minor(r, &[i, j], &[i, j]));
            }
        }
        acc
    }

    pub fn format<R: Ring<Elem = E>>(&self, r: &R) -> String {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let cells: Vec<String> = (0..self.n).map(|j| r.format(self.get(i, j))).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }

    /// Inverse of a 2×2 matrix of determinant 1 (the adjugate).
    pub fn adjugate2<R: Ring<Elem = E>>(&self, r: &R) -> Self {
        assert_eq!(self.n, 2);
        Matrix::from_rows(vec![
            vec![self.get(1, 1).clone(), r.neg(self.get(0, 1))],
            vec![r.neg(self.get(1, 0)), self.get(0, 0).clone()],
        ])
    }

    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Option<Self> {
        let n = self.n;
        let mut a: Vec<Vec<E>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut inv: Vec<Vec<E>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&i| !f.is_zero(&a[i][c]))?;
            a.swap(c, p);
            inv.swap(c, p);
            let pinv = f.inv(&a[c][c])?;
            for j in 0..n {
                a[c][j] = f.mul(&a[c][j], &pinv);
                inv[c][j] = f.mul(&inv[c][j], &pinv);
            }
            for i in 0..n {
                if i == c || f.is_zero(&a[i][c]) {
                    continue;
                }
                let factor = a[i][c].clone();
                for j in 0..n {
                    a[i][j] = f.sub(&a[i][j], &f.mul(&factor, &a[c][j]));
                    inv[i][j] = f.sub(&inv[i][j], &f.mul(&factor, &inv[c][j]));
                }
            }
        }
        Some(Matrix::from_rows(inv))
    }
}

/// All `n×n` matrices over a finite field, in lexicographic order of their
/// row-major entry lists.
pub fn all_matrices<F: Field>(f: &F, n: usize) -> Option<Vec<Matrix<F::Elem>>> {
    let els = f.elements()?;
    let cells = n * n;
    let total = els.len().checked_pow(cells as u32)?;
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; cells];
    loop {
        out.push(Matrix::from_entries(n, idx.iter().map(|&i| els[i].clone())));
        let mut pos = cells;
        loop {
            if pos == 0 {
                return Some(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < els.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// All trace-zero `n×n` matrices over a finite field.
pub fn all_trace_zero<F: Field>(f: &F, n: usize) -> Option<Vec<Matrix<F::Elem>>> {
    Some(
        all_matrices(f, n)?
            .into_iter()
            .filter(|m| f.is_zero(&m.trace(f)))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn unit_bracket() {
        let r = Rationals;
        let e12 = Matrix::unit(&r, 2, 0, 1);
        let e21 = Matrix::unit(&r, 2, 1, 0);
        assert_eq!(e12.bracket(&r, &e21), Matrix::diag(&r, vec![q(1), q(-1)]));
    }

    #[test]
    fn determinants() {
        let r = Rationals;
        let m = Matrix::from_rows(vec![
            vec![q(2), q(0), q(1)],
            vec![q(1), q(3), q(2)],
            vec![q(1), q(1), q(2)],
        ]);
        assert_eq!(m.det(&r), q(6));
        assert_eq!(Matrix::diag(&r, vec![q(1), q(1), q(-2)]).e2(&r), q(-3));
        let inv = m.inverse(&r).unwrap();
        assert_eq!(inv.mul(&r, &m), Matrix::identity(&r, 3));
    }

    #[test]
    fn finite_enumeration_counts() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(all_matrices(&f, 2).unwrap().len(), 81);
        assert_eq!(all_trace_zero(&f, 2).unwrap().len(), 27);
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(all_matrices(&f2, 2).unwrap().len(), 16);
    }

    #[test]
    fn formatting() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::diag(&f, vec![2, 3]);
        assert_eq!(m.format(&f), "[[2,0],[0,3]]");
        assert!(Matrix::scalar(&f, 2, 4).is_scalar(&f));
        assert!(!m.is_scalar(&f));
    }
}
