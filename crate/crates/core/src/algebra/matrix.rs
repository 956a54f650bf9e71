use std::fmt;

use super::scalar::{Complex64, RealScalar, Scalar};
use crate::error::{ConvError, Result};

/// Dense row-major matrix over a single scalar domain.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major entries.
    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(ConvError::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ConvError::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from small integers; handy for literal algorithms.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let c = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == c), "ragged rows");
        Self {
            rows: rows.len(),
            cols: c,
            data: rows
                .iter()
                .flat_map(|r| r.iter().map(|&v| T::from_i64(v)))
                .collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn matmul(&self, other: &Matrix<T>) -> Result<Self> {
        if self.cols != other.rows {
            return Err(ConvError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    /// `M x`.
    pub fn matvec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.cols {
            return Err(ConvError::DimensionMismatch(format!(
                "{}x{} matrix applied to vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    /// `Mᵀ x` without forming the transpose.
    pub fn tr_matvec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.rows {
            return Err(ConvError::DimensionMismatch(format!(
                "transpose of {}x{} matrix applied to vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut out = vec![T::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            for (j, a) in self.row(i).iter().enumerate() {
                if !a.is_zero() {
                    out[j] = out[j].clone() + a.clone() * xi.clone();
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ other`; row index `i·other.rows + k`.
    pub fn kron(&self, other: &Matrix<T>) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |i, j| {
            let (i1, i2) = (i / other.rows, i % other.rows);
            let (j1, j2) = (j / other.cols, j % other.cols);
            self.get(i1, j1).clone() * other.get(i2, j2).clone()
        })
    }

    /// Horizontal concatenation; all blocks must share the row count.
    pub fn hstack(blocks: &[Matrix<T>]) -> Result<Self> {
        let rows = blocks.first().map_or(0, |b| b.rows);
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(ConvError::DimensionMismatch(
                "hstack row counts differ".into(),
            ));
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for b in blocks {
                data.extend_from_slice(b.row(i));
            }
        }
        Ok(Self { rows, cols, data })
    }

    /// Keeps rows `start..end`.
    pub fn row_range(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.rows);
        Self {
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    /// Keeps columns `start..end`.
    pub fn col_range(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.cols);
        Self::from_fn(self.rows, end - start, |i, j| {
            self.get(i, start + j).clone()
        })
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Matrix<T>) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|v| {
                let m = v.magnitude();
                m * m
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_complex(&self) -> Matrix<Complex64> {
        self.map(Scalar::to_complex)
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting on entry
    /// magnitude. Exact for rationals.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(ConvError::DimensionMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut rhs = Self::identity(n);
        let mut lhs = self.clone();
        gauss_jordan(&mut lhs, &mut rhs)?;
        Ok(rhs)
    }

    /// Solves `M x = b` for square nonsingular `M`.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        if self.rows != self.cols || b.len() != self.rows {
            return Err(ConvError::DimensionMismatch(format!(
                "cannot solve {}x{} system with right-hand side of length {}",
                self.rows,
                self.cols,
                b.len()
            )));
        }
        let mut lhs = self.clone();
        let mut rhs = Self {
            rows: b.len(),
            cols: 1,
            data: b.to_vec(),
        };
        gauss_jordan(&mut lhs, &mut rhs)?;
        Ok(rhs.data)
    }
}

impl<T: RealScalar> Matrix<T> {
    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(RealScalar::to_f64)
    }
}

/// Reduces `lhs` to the identity, applying the same row operations to `rhs`.
fn gauss_jordan<T: Scalar>(lhs: &mut Matrix<T>, rhs: &mut Matrix<T>) -> Result<()> {
    let n = lhs.rows;
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !lhs.get(r, col).is_zero())
            .max_by(|&a, &b| {
                lhs.get(a, col)
                    .magnitude()
                    .partial_cmp(&lhs.get(b, col).magnitude())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .ok_or(ConvError::Singular)?;
        swap_rows(lhs, col, pivot);
        swap_rows(rhs, col, pivot);

        let inv = T::one() / lhs.get(col, col).clone();
        scale_row(lhs, col, &inv);
        scale_row(rhs, col, &inv);

        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = lhs.get(r, col).clone();
            if factor.is_zero() {
                continue;
            }
            eliminate(lhs, r, col, &factor);
            eliminate(rhs, r, col, &factor);
        }
    }
    Ok(())
}

fn swap_rows<T>(m: &mut Matrix<T>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        m.data.swap(a * m.cols + j, b * m.cols + j);
    }
}

fn scale_row<T: Scalar>(m: &mut Matrix<T>, r: usize, s: &T) {
    for j in 0..m.cols {
        let idx = r * m.cols + j;
        m.data[idx] = m.data[idx].clone() * s.clone();
    }
}

/// `row[target] -= factor * row[source]`.
fn eliminate<T: Scalar>(m: &mut Matrix<T>, target: usize, source: usize, factor: &T) {
    for j in 0..m.cols {
        let s = m.data[source * m.cols + j].clone();
        if s.is_zero() {
            continue;
        }
        let idx = target * m.cols + j;
        m.data[idx] = m.data[idx].clone() - factor.clone() * s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, Rational};

    #[test]
    fn rational_inverse_is_exact() {
        let m: Matrix<Rational> = Matrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv, Matrix::from_i64_rows(&[&[1, -1], &[-1, 2]]));
        assert_eq!(m.matmul(&inv).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m: Matrix<Rational> = Matrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert!(matches!(m.inverse(), Err(ConvError::Singular)));
    }

    #[test]
    fn kron_dimensions_and_nnz() {
        let a: Matrix<Rational> = Matrix::from_i64_rows(&[&[1, 1, 0], &[0, 1, 1]]);
        let k = a.kron(&a);
        assert_eq!((k.rows(), k.cols()), (4, 9));
        assert_eq!(k.nnz(), 16);
        assert_eq!(*k.get(1, 1), rational(1, 1));
    }

    #[test]
    fn transpose_matvec_matches_explicit() {
        let a: Matrix<f64> = Matrix::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6]]);
        let x = [1.0, -1.0];
        assert_eq!(a.tr_matvec(&x).unwrap(), a.transpose().matvec(&x).unwrap());
    }

    #[test]
    fn solve_small_system() {
        let a: Matrix<Rational> = Matrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        let x = a.solve(&[rational(3, 1), rational(5, 2)]).unwrap();
        assert_eq!(x, vec![rational(5, 2), rational(3, 1)]);
    }
}
