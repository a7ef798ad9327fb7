//! Exact rational linear algebra: an incremental sparse echelon basis and
//! small dense matrices.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub type SparseVec = BTreeMap<usize, Rational>;

/// Row-echelon basis of a subspace, built one vector at a time. Each stored
/// row has a distinct leading (smallest) column with coefficient 1.
#[derive(Debug, Clone, Default)]
pub struct EchelonBasis {
    rows: HashMap<usize, SparseVec>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; what remains is zero iff `v` is in the span.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut floor = 0usize;
        loop {
            let next = v.range(floor..).find(|(k, _)| self.rows.contains_key(k));
            let Some((&k, c)) = next else { return v };
            let c = c.clone();
            for (col, x) in &self.rows[&k] {
                let entry = v.entry(*col).or_insert_with(Rational::zero);
                *entry -= &c * x;
                if entry.is_zero() {
                    v.remove(col);
                }
            }
            floor = k + 1;
        }
    }

    /// Inserts `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = self.reduce(v);
        let Some((&lead, c)) = v.iter().next() else {
            return false;
        };
        let inv = c.recip();
        for x in v.values_mut() {
            *x *= &inv;
        }
        self.rows.insert(lead, v);
        true
    }
}

/// Rank of a family of sparse vectors.
pub fn sparse_rank<I: IntoIterator<Item = SparseVec>>(vectors: I) -> usize {
    let mut basis = EchelonBasis::new();
    for v in vectors {
        basis.insert(v);
    }
    basis.rank()
}

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_columns(rows: usize, columns: Vec<Vec<Rational>>) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.into_iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.into_iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| !v[j].is_zero())
                    .fold(Rational::zero(), |acc, j| acc + &self[(i, j)] * &v[j])
            })
            .collect()
    }

    /// Gaussian elimination; returns (rank, determinant if square).
    fn eliminate(&self) -> (usize, Rational, Option<Matrix>) {
        let n = self.rows;
        let square = self.rows == self.cols;
        let mut a = self.clone();
        let mut inv = if square { Some(Matrix::identity(n)) } else { None };
        let mut det = Rational::one();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..n).find(|&r| !a[(r, col)].is_zero()) else {
                det = Rational::zero();
                continue;
            };
            if p != rank {
                a.swap_rows(p, rank);
                if let Some(m) = inv.as_mut() {
                    m.swap_rows(p, rank);
                }
                det = -det;
            }
            let pivot = a[(rank, col)].clone();
            det *= &pivot;
            let pinv = pivot.recip();
            a.scale_row(rank, &pinv);
            if let Some(m) = inv.as_mut() {
                m.scale_row(rank, &pinv);
            }
            for r in 0..n {
                if r != rank && !a[(r, col)].is_zero() {
                    let f = a[(r, col)].clone();
                    a.axpy_row(r, rank, &f);
                    if let Some(m) = inv.as_mut() {
                        m.axpy_row(r, rank, &f);
                    }
                }
            }
            rank += 1;
        }
        let inverse = if square && rank == n { inv } else { None };
        if !square || rank < n {
            det = Rational::zero();
        }
        (rank, det, inverse)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return Rational::one();
        }
        self.eliminate().1
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        if self.rows == 0 {
            return Some(Matrix::identity(0));
        }
        self.eliminate().2
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, f: &Rational) {
        for j in 0..self.cols {
            self[(r, j)] *= f;
        }
    }

    /// row[target] -= f * row[source]
    fn axpy_row(&mut self, target: usize, source: usize, f: &Rational) {
        for j in 0..self.cols {
            let s = self[(source, j)].clone();
            if !s.is_zero() {
                self[(target, j)] -= f * s;
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(self.rows)
    }

    pub fn abs_det_is_one(&self) -> bool {
        self.determinant().abs().is_one()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        let cols = rows[0].len();
        let mut out = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                out[(i, j)] = rat(x);
            }
        }
        out
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1], &[7, 4]]);
        assert_eq!(a.determinant(), rat(1));
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert_eq!(inv, m(&[&[4, -1], &[-7, 2]]));
    }

    #[test]
    fn singular_matrix() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(a.determinant(), rat(0));
        assert_eq!(a.rank(), 1);
        assert!(a.inverse().is_none());
    }

    #[test]
    fn determinant_sign_from_swap() {
        let a = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.determinant(), rat(-1));
    }

    #[test]
    fn echelon_basis_tracks_span() {
        let mut b = EchelonBasis::new();
        let v = |pairs: &[(usize, i64)]| -> SparseVec {
            pairs.iter().map(|&(k, x)| (k, rat(x))).collect()
        };
        assert!(b.insert(v(&[(0, 1), (2, 3)])));
        assert!(b.insert(v(&[(1, 2), (2, 1)])));
        assert!(!b.insert(v(&[(0, 2), (1, 4), (2, 8)])));
        assert!(b.insert(v(&[(2, 5)])));
        assert_eq!(b.rank(), 3);
        assert!(!b.insert(v(&[(0, 1)])));
        assert!(b.reduce(v(&[(1, 7)])).is_empty());
    }
}
