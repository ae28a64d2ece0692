//! Dense exact linear algebra over a [`Scalar`] field.
//!
//! Hecke modules use the row-vector convention `v ↦ v·A`; group
//! representations act on column vectors. Both sit on the same [`Matrix`].

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from row vectors; `cols` is needed when there are no rows.
    pub fn from_rows(rows: &[Vec<S>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r.iter().cloned());
        }
        Matrix { rows: rows.len(), cols, data }
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<S>], rows: usize) -> Self {
        Self::from_rows(cols, rows).transpose()
    }

    pub fn scalar(n: usize, s: S) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        let v = out[(i, j)].clone() + a.clone() * b.clone();
                        out[(i, j)] = v;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }

    /// `self + s·o`, the workhorse for accumulating module actions.
    pub fn add_scaled(&mut self, o: &Self, s: &S) {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            if !b.is_zero() {
                *a = a.clone() + b.clone() * s.clone();
            }
        }
    }

    /// Integer power; negative exponents need an invertible matrix.
    pub fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::identity(self.rows);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        Some(acc)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inverse().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n));
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(r.submatrix(0..n, n..2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Basis of `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![S::zero(); self.cols];
                x[f] = S::one();
                for (i, &p) in piv.iter().enumerate() {
                    x[p] = -r[(i, f)].clone();
                }
                x
            })
            .collect()
    }

    /// Basis of `{v : v A = 0}`.
    pub fn left_nullspace(&self) -> Vec<Vec<S>> {
        self.transpose().nullspace()
    }

    /// A solution of `A x = b`, if any.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(b.len(), self.rows);
        let bm = Matrix::from_cols(&[b.to_vec()], self.rows);
        let (r, piv) = self.hstack(&bm).rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (i, &p) in piv.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        Self::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                o[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let (r0, c0) = (rows.start, cols.start);
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// Adds `block` into the window starting at `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                let b = &block[(i, j)];
                if !b.is_zero() {
                    let v = self[(r0 + i, c0 + j)].clone() + b.clone();
                    self[(r0 + i, c0 + j)] = v;
                }
            }
        }
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![S::zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = &self[(i, j)];
                if !b.is_zero() {
                    *o = o.clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (j, b) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.rows as i64).map(|m| m.is_zero()).unwrap_or(false)
    }
}

/// Reduced basis of the span of the given vectors.
pub fn span_basis<S: Scalar>(vectors: &[Vec<S>], dim: usize) -> Vec<Vec<S>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (r, piv) = Matrix::from_rows(vectors, dim).rref();
    (0..piv.len()).map(|i| r.row(i).to_vec()).collect()
}

pub fn span_rank<S: Scalar>(vectors: &[Vec<S>], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(vectors, dim).rank()
}

/// Coordinates of `v` in the (independent) family `basis`, if it lies in the span.
pub fn coordinates<S: Scalar>(basis: &[Vec<S>], v: &[S]) -> Option<Vec<S>> {
    if basis.is_empty() {
        return if v.iter().all(|x| x.is_zero()) { Some(Vec::new()) } else { None };
    }
    Matrix::from_cols(basis, v.len()).solve(v)
}

pub fn vec_is_zero<S: Scalar>(v: &[S]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn vec_add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vec_sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vec_scale<S: Scalar>(a: &[S], s: &S) -> Vec<S> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

pub fn unit_vec<S: Scalar>(dim: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); dim];
    v[i] = S::one();
    v
}

/// Solves `A_g X = X B_g` for all pairs, returning a basis of solutions `X` (`ra × rb`).
///
/// With row-vector modules this is the space of intertwiners `v ↦ vX`; with
/// column-vector representations pass the pairs in swapped order.
pub fn intertwiners<S: Scalar>(pairs: &[(&Matrix<S>, &Matrix<S>)], ra: usize, rb: usize) -> Vec<Matrix<S>> {
    let nvar = ra * rb;
    if nvar == 0 {
        return Vec::new();
    }
    let mut eqs: Vec<Vec<S>> = Vec::new();
    let mut reduced: Vec<Vec<S>> = Vec::new();
    for (a, b) in pairs {
        for i in 0..ra {
            for j in 0..rb {
                let mut row = vec![S::zero(); nvar];
                for k in 0..ra {
                    let c = &a[(i, k)];
                    if !c.is_zero() {
                        row[k * rb + j] = row[k * rb + j].clone() + c.clone();
                    }
                }
                for k in 0..rb {
                    let c = &b[(k, j)];
                    if !c.is_zero() {
                        row[i * rb + k] = row[i * rb + k].clone() - c.clone();
                    }
                }
                if !vec_is_zero(&row) {
                    eqs.push(row);
                }
            }
        }
        // Keep the system small by compressing after each generator.
        if eqs.len() > 2 * nvar {
            let mut all = std::mem::take(&mut reduced);
            all.append(&mut eqs);
            reduced = span_basis(&all, nvar);
        }
    }
    reduced.append(&mut eqs);
    let sys = if reduced.is_empty() { Matrix::zeros(1, nvar) } else { Matrix::from_rows(&reduced, nvar) };
    sys.nullspace()
        .into_iter()
        .map(|x| Matrix::from_rows(&x.chunks(rb).map(|c| c.to_vec()).collect::<Vec<_>>(), rb))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{F3, Q};

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_rows(&[vec![q(2), q(1)], vec![q(5), q(3)]], 2);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = Matrix::from_rows(&[vec![F3::new(1), F3::new(2)], vec![F3::new(2), F3::new(1)]], 2);
        assert!(m.inverse().is_none());
        assert_eq!(m.nullspace().len(), 1);
    }

    #[test]
    fn nullspace_vectors_vanish() {
        let m = Matrix::from_rows(&[vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]], 3);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for x in ns {
            assert!(vec_is_zero(&m.apply(&x)));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Matrix::from_rows(&[vec![q(1), q(1)], vec![q(1), q(1)]], 2);
        assert!(m.solve(&[q(2), q(2)]).is_some());
        assert!(m.solve(&[q(1), q(2)]).is_none());
    }

    #[test]
    fn intertwiners_of_scalar_actions() {
        let a = Matrix::scalar(2, q(3));
        let b = Matrix::scalar(1, q(3));
        let c = Matrix::scalar(1, q(4));
        assert_eq!(intertwiners(&[(&a, &b)], 2, 1).len(), 2);
        assert_eq!(intertwiners(&[(&a, &c)], 2, 1).len(), 0);
    }

    #[test]
    fn negative_power() {
        let m = Matrix::from_rows(&[vec![q(1), q(1)], vec![q(0), q(1)]], 2);
        assert!(m.pow(3).unwrap().mul(&m.pow(-3).unwrap()).is_identity());
    }
}
