//! Dense row-major matrices with the handful of factorizations the torsion
//! and spectral code needs. Sizes here are modest (at most a few thousand),
//! so simple dependency-free kernels are adequate.

use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::numerics::NumericsError;
use crate::scalar::Real;

/// Dense matrix, row-major storage.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Real> std::fmt::Debug for DenseMatrix<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            write!(f, "  ")?;
            for j in 0..self.cols.min(8) {
                write!(f, "{:>12.5} ", self[(i, j)])?;
            }
            writeln!(f, "{}", if self.cols > 8 { "..." } else { "" })?;
        }
        if self.rows > 8 {
            writeln!(f, "  ...")?;
        }
        write!(f, "]")
    }
}

impl<R: Real> DenseMatrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![R::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = R::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<R>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn diagonal(diag: &[R]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
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

    pub fn data(&self) -> &[R] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[R]) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: R) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
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
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matmul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == R::zero() {
                    continue;
                }
                let (orow, crow) = (other.row(k), i * out.cols);
                for j in 0..other.cols {
                    out.data[crow + j] += a * orow[j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &x)| a * x)
                    .sum::<R>()
            })
            .collect()
    }

    pub fn trace(&self) -> R {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> R {
        self.data
            .iter()
            .map(|&x| x * x)
            .sum::<R>()
            .sqrt()
    }

    pub fn max_abs(&self) -> R {
        self.data
            .iter()
            .fold(R::zero(), |acc, &x| acc.max(x.abs()))
    }

    /// Columns `sel` gathered into a new matrix.
    pub fn select_columns(&self, sel: &[usize]) -> Self {
        Self::from_fn(self.rows, sel.len(), |i, j| self[(i, sel[j])])
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        })
    }

    pub fn is_symmetric(&self, rel_tol: R) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.max_abs().max(R::one());
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if (self[(i, j)] - self[(j, i)]).abs() > rel_tol * scale {
                    return false;
                }
            }
        }
        true
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Cholesky factor `L` with `A = L Lᵀ`. Fails if `A` is not SPD.
    pub fn cholesky(&self) -> Result<DenseMatrix<R>, NumericsError> {
        if !self.is_square() {
            return Err(NumericsError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut l = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s = s - l[(i, k)] * l[(j, k)];
                }
                if i == j {
                    if s <= R::zero() {
                        return Err(NumericsError::NotPositiveDefinite);
                    }
                    l[(i, i)] = s.sqrt();
                } else {
                    l[(i, j)] = s / l[(j, j)];
                }
            }
        }
        Ok(l)
    }

    /// Solve `L x = b` for lower-triangular `L`.
    pub fn solve_lower_triangular(&self, b: &[R]) -> Vec<R> {
        let n = self.rows;
        let mut x = b.to_vec();
        for i in 0..n {
            for j in 0..i {
                let lij = self[(i, j)];
                x[i] = x[i] - lij * x[j];
            }
            x[i] = x[i] / self[(i, i)];
        }
        x
    }

    /// Solve `Lᵀ x = b` for lower-triangular `L`.
    pub fn solve_lower_transpose(&self, b: &[R]) -> Vec<R> {
        let n = self.rows;
        let mut x = b.to_vec();
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let lji = self[(j, i)];
                x[i] = x[i] - lji * x[j];
            }
            x[i] = x[i] / self[(i, i)];
        }
        x
    }

    /// Apply `L⁻ᵀ`, `Lᵀ`, etc. columnwise to a matrix.
    pub fn map_columns(&self, m: &Self, f: impl Fn(&Self, &[R]) -> Vec<R>) -> Self {
        let mut out = Self::zeros(m.rows, m.cols);
        for j in 0..m.cols {
            let col = m.column(j);
            out.set_column(j, &f(self, &col));
        }
        out
    }
}

impl<R: Real> Index<(usize, usize)> for DenseMatrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<R: Real> IndexMut<(usize, usize)> for DenseMatrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Modified Gram-Schmidt with one reorthogonalization pass. Returns an
/// orthonormal basis of the column span; columns whose residual drops below
/// `tol * initial_norm` are dropped.
pub fn orthonormal_columns<R: Real>(m: &DenseMatrix<R>, tol: R) -> DenseMatrix<R> {
    let mut basis: Vec<Vec<R>> = Vec::new();
    for j in 0..m.cols() {
        let mut v = m.column(j);
        let norm0 = vec_norm(&v);
        if norm0 == R::zero() {
            continue;
        }
        for _pass in 0..2 {
            for b in &basis {
                let c = dot(&v, b);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi = *vi - c * *bi;
                }
            }
        }
        let norm = vec_norm(&v);
        if norm > tol * norm0 {
            let inv = R::one() / norm;
            for vi in v.iter_mut() {
                *vi = *vi * inv;
            }
            basis.push(v);
        }
    }
    let mut out = DenseMatrix::zeros(m.rows(), basis.len());
    for (j, b) in basis.iter().enumerate() {
        out.set_column(j, b);
    }
    out
}

pub fn dot<R: Real>(a: &[R], b: &[R]) -> R {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn vec_norm<R: Real>(a: &[R]) -> R {
    dot(a, a).sqrt()
}
