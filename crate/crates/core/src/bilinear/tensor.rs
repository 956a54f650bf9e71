use crate::algebra::{Matrix, Scalar};
use crate::error::{ConvError, Result};

/// Dense row-major tensor of arbitrary order.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<T> {
    shape: Vec<usize>,
    data: Vec<T>,
}

impl<T: Scalar> Tensor<T> {
    pub fn new(shape: Vec<usize>, data: Vec<T>) -> Result<Self> {
        let size: usize = shape.iter().product();
        if size != data.len() {
            return Err(ConvError::DimensionMismatch(format!(
                "tensor of shape {shape:?} needs {size} entries, got {}",
                data.len()
            )));
        }
        Ok(Self { shape, data })
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let size = shape.iter().product();
        Self {
            shape,
            data: vec![T::zero(); size],
        }
    }

    /// Order-`d` tensor with every mode of length `n`.
    pub fn cubical(d: usize, n: usize, data: Vec<T>) -> Result<Self> {
        Self::new(vec![n; d], data)
    }

    pub fn from_vec(v: Vec<T>) -> Self {
        Self {
            shape: vec![v.len()],
            data: v,
        }
    }

    pub fn from_matrix(m: &Matrix<T>) -> Self {
        Self {
            shape: vec![m.rows(), m.cols()],
            data: m.data().to_vec(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix<T>> {
        match self.shape.as_slice() {
            [r, c] => Matrix::new(*r, *c, self.data.clone()),
            _ => Err(ConvError::DimensionMismatch(format!(
                "tensor of order {} is not a matrix",
                self.order()
            ))),
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    /// Length of every mode if the tensor is cubical.
    pub fn cubical_len(&self) -> Option<usize> {
        let first = *self.shape.first()?;
        self.shape.iter().all(|&s| s == first).then_some(first)
    }

    /// Multiplies mode `mode` by `m` (`p × q`, with `shape[mode] == q`).
    pub fn mode_product(&self, mode: usize, m: &Matrix<T>) -> Result<Self> {
        let q = self.shape[mode];
        if m.cols() != q {
            return Err(ConvError::DimensionMismatch(format!(
                "mode {mode} has length {q}, matrix is {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let p = m.rows();
        let outer: usize = self.shape[..mode].iter().product();
        let inner: usize = self.shape[mode + 1..].iter().product();
        let mut shape = self.shape.clone();
        shape[mode] = p;
        let mut data = vec![T::zero(); outer * p * inner];
        for o in 0..outer {
            let src = &self.data[o * q * inner..(o + 1) * q * inner];
            let dst = &mut data[o * p * inner..(o + 1) * p * inner];
            for a in 0..p {
                for (b, coef) in m.row(a).iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    for t in 0..inner {
                        let idx = a * inner + t;
                        dst[idx] = dst[idx].clone() + coef.clone() * src[b * inner + t].clone();
                    }
                }
            }
        }
        Ok(Self { shape, data })
    }

    /// Applies `m` along every mode.
    pub fn multilinear(&self, m: &Matrix<T>) -> Result<Self> {
        (0..self.order()).try_fold(self.clone(), |acc, mode| acc.mode_product(mode, m))
    }

    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        if self.shape != other.shape {
            return Err(ConvError::DimensionMismatch(format!(
                "hadamard of shapes {:?} and {:?}",
                self.shape, other.shape
            )));
        }
        Ok(Self {
            shape: self.shape.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() * b.clone())
                .collect(),
        })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Tensor<U> {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data
            .iter()
            .map(|v| v.magnitude().powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Unravels a flat row-major index.
pub(crate) fn unravel(mut idx: usize, shape: &[usize], out: &mut [usize]) {
    for (slot, &s) in out.iter_mut().zip(shape).rev() {
        *slot = idx % s;
        idx /= s;
    }
}
