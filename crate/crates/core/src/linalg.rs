//! Small dense matrices over any [`Scalar`], with row reduction.
//!
//! Everything here is sized for the exterior algebra of a 7-dimensional space
//! (at most 35x35), so a plain row-major `Vec` is used throughout.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Scalar, Q};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<T> {
    pub matrix: Matrix<T>,
    pub pivots: Vec<usize>,
}

impl<T: Scalar> Rref<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Non-pivot columns, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.matrix.cols)
            .filter(|c| !self.pivots.contains(c))
            .collect()
    }

    /// Basis of the null space, one vector per free column.
    ///
    /// The basis vector for free column `f` has a 1 at `f` and 0 at every other
    /// free column, so the coordinates of any null vector are simply its entries
    /// at the free columns.
    pub fn null_space(&self) -> Vec<Vec<T>> {
        let n = self.matrix.cols;
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![T::zero(); n];
                v[f] = T::one();
                for (row, &p) in self.pivots.iter().enumerate() {
                    v[p] = -self.matrix[(row, f)].clone();
                }
                v
            })
            .collect()
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Build a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, x) in col.iter().enumerate() {
                m[(r, c)] = x.clone();
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        (0..self.rows)
            .map(|r| {
                let mut acc = T::zero();
                for (a, x) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, s: &T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(Scalar::is_negligible)
    }

    /// Gauss-Jordan elimination with largest-magnitude pivoting.
    pub fn rref(&self) -> Rref<T> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let best = (row..m.rows)
                .filter(|&r| !m[(r, col)].is_negligible())
                .max_by(|&a, &b| {
                    m[(a, col)]
                        .magnitude()
                        .partial_cmp(&m[(b, col)].magnitude())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            let Some(p) = best else {
                for r in row..m.rows {
                    m[(r, col)] = T::zero();
                }
                continue;
            };
            m.swap_rows(row, p);
            let inv = T::one() / m[(row, col)].clone();
            for c in col..m.cols {
                m[(row, c)] = m[(row, c)].clone() * inv.clone();
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col + 1..m.cols {
                    if m[(row, c)].is_zero() {
                        continue;
                    }
                    let sub = factor.clone() * m[(row, c)].clone();
                    m[(r, c)] = m[(r, c)].clone() - sub;
                }
                m[(r, col)] = T::zero();
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    pub fn null_space(&self) -> Vec<Vec<T>> {
        self.rref().null_space()
    }

    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = T::one();
        for col in 0..n {
            let best = (col..n)
                .filter(|&r| !m[(r, col)].is_negligible())
                .max_by(|&a, &b| {
                    m[(a, col)]
                        .magnitude()
                        .partial_cmp(&m[(b, col)].magnitude())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            let Some(p) = best else {
                return T::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det = det * pivot.clone();
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone() / pivot.clone();
                for c in col..n {
                    let sub = factor.clone() * m[(col, c)].clone();
                    m[(r, c)] = m[(r, c)].clone() - sub;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = T::one();
        }
        let red = aug.rref();
        if red.pivots.len() < n || red.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |r, c| red.matrix[(r, n + c)].clone()))
    }

    /// Orthogonal projector onto the span of the given columns with respect to
    /// the hermitian inner product `<u, v> = u^H v`.
    pub fn projector_onto(dim: usize, spanning: &[Vec<T>]) -> Self {
        if spanning.is_empty() {
            return Self::zeros(dim, dim);
        }
        // Drop dependent vectors first so that B^H B is invertible.
        let b_all = Self::from_columns(dim, spanning);
        let red = b_all.rref();
        let independent: Vec<Vec<T>> = red.pivots.iter().map(|&c| b_all.column(c)).collect();
        let b = Self::from_columns(dim, &independent);
        let bh = b.conj_transpose();
        let gram_inv = bh.mul(&b).inverse().expect("independent columns");
        b.mul(&gram_inv).mul(&bh)
    }
}

type Small = num_rational::Ratio<i128>;

/// Row reduction over `i128` rationals with overflow checks.
fn rref_small(m: &Matrix<Q>) -> Option<Rref<Q>> {
    use num_traits::{CheckedDiv, CheckedMul, CheckedSub, ToPrimitive};
    let mut a: Vec<Small> = m
        .data
        .iter()
        .map(|x| Some(Small::new(x.numer().to_i128()?, x.denom().to_i128()?)))
        .collect::<Option<_>>()?;
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let size = |x: &Small| x.numer().unsigned_abs().saturating_add(x.denom().unsigned_abs());
        let Some(p) = (row..rows)
            .filter(|&r| !a[r * cols + col].is_zero())
            .min_by_key(|&r| size(&a[r * cols + col]))
        else {
            continue;
        };
        for c in 0..cols {
            a.swap(row * cols + c, p * cols + c);
        }
        let inv = Small::one().checked_div(&a[row * cols + col])?;
        for c in col..cols {
            let x = &a[row * cols + c];
            if !x.is_zero() {
                a[row * cols + c] = x.checked_mul(&inv)?;
            }
        }
        for r in 0..rows {
            if r == row || a[r * cols + col].is_zero() {
                continue;
            }
            let factor = a[r * cols + col];
            for c in col + 1..cols {
                let x = a[row * cols + c];
                if x.is_zero() {
                    continue;
                }
                a[r * cols + c] = a[r * cols + c].checked_sub(&factor.checked_mul(&x)?)?;
            }
            a[r * cols + col] = Small::zero();
        }
        pivots.push(col);
        row += 1;
    }
    let data = a
        .into_iter()
        .map(|x| Q::new(BigInt::from(*x.numer()), BigInt::from(*x.denom())))
        .collect();
    Some(Rref {
        matrix: Matrix { rows, cols, data },
        pivots,
    })
}

impl Matrix<Q> {
    /// Reduced row echelon form, using machine-sized rationals when they suffice.
    ///
    /// The reduced form is unique, so the result equals [`Matrix::rref`].
    pub fn rref_exact(&self) -> Rref<Q> {
        rref_small(self).unwrap_or_else(|| self.rref())
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(f64::from_q)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.denom().is_one())
    }
}

/// Orthonormal basis of the span of real vectors, dropping dependent ones.
pub fn orthonormalize(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        // Two passes keep the basis orthonormal to machine precision.
        for _ in 0..2 {
            for u in &out {
                let c: f64 = u.iter().zip(&w).map(|(a, b)| a * b).sum();
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= c * ui;
                }
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            out.push(w.into_iter().map(|x| x / norm).collect());
        }
    }
    out
}

/// Basis of the integer kernel `{x in Z^n : M x = 0}` of an integer matrix.
///
/// Column operations reduce `M` to column echelon form while tracking a
/// unimodular transform `U`; the columns of `U` that end up paired with zero
/// columns span the (saturated) kernel lattice.
pub fn integer_kernel(m: &Matrix<Q>) -> Vec<Vec<BigInt>> {
    assert!(m.is_integral(), "integer_kernel expects an integral matrix");
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| (0..cols).map(|c| m[(r, c)].numer().clone()).collect())
        .collect();
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|r| {
            (0..cols)
                .map(|c| if r == c { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let col_op = |a: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, k: &BigInt| {
        // column dst -= k * column src
        for row in a.iter_mut() {
            let s = &row[src] * k;
            row[dst] -= s;
        }
        for row in u.iter_mut() {
            let s = &row[src] * k;
            row[dst] -= s;
        }
    };
    let swap_cols = |a: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in u.iter_mut() {
            row.swap(i, j);
        }
    };
    let mut lead = 0;
    for r in 0..rows {
        if lead == cols {
            break;
        }
        // Euclid on row r across columns lead..cols until a single nonzero remains.
        loop {
            let nonzero: Vec<usize> = (lead..cols).filter(|&c| !a[r][c].is_zero()).collect();
            if nonzero.len() <= 1 {
                if let Some(&c) = nonzero.first() {
                    swap_cols(&mut a, &mut u, lead, c);
                    lead += 1;
                }
                break;
            }
            let &pivot = nonzero
                .iter()
                .min_by_key(|&&c| a[r][c].abs())
                .expect("nonempty");
            for &c in &nonzero {
                if c != pivot {
                    let k = a[r][c].div_floor(&a[r][pivot]);
                    col_op(&mut a, &mut u, c, pivot, &k);
                }
            }
        }
    }
    (lead..cols)
        .map(|c| (0..cols).map(|r| u[r][c].clone()).collect())
        .collect()
}
