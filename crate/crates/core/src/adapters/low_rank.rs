use crate::algebra::{Matrix, Scalar};
use crate::bilinear::{BilinearAlgorithm, ConvVariant};
use crate::error::{ConvError, Result};
use crate::par::{self, Execution};

/// `F = Σᵢ σᵢ uᵢ vᵢᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankFactors2D<T> {
    pub sigma: Vec<T>,
    pub u: Vec<Vec<T>>,
    pub v: Vec<Vec<T>>,
}

impl<T: Scalar> RankFactors2D<T> {
    pub fn new(sigma: Vec<T>, u: Vec<Vec<T>>, v: Vec<Vec<T>>) -> Result<Self> {
        if sigma.is_empty() || sigma.len() != u.len() || sigma.len() != v.len() {
            return Err(ConvError::DimensionMismatch(format!(
                "{} weights, {} left and {} right vectors",
                sigma.len(),
                u.len(),
                v.len()
            )));
        }
        let (rows, cols) = (u[0].len(), v[0].len());
        if u.iter().any(|x| x.len() != rows) || v.iter().any(|x| x.len() != cols) {
            return Err(ConvError::DimensionMismatch(
                "factor vectors differ in length".into(),
            ));
        }
        Ok(Self { sigma, u, v })
    }

    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.u[0].len(), self.v[0].len())
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        let (rows, cols) = self.shape();
        Matrix::from_fn(rows, cols, |i, j| {
            self.sigma
                .iter()
                .zip(&self.u)
                .zip(&self.v)
                .fold(T::zero(), |acc, ((s, u), v)| {
                    acc + s.clone() * u[i].clone() * v[j].clone()
                })
        })
    }
}

/// 2D linear convolution of two low-rank matrices as `R_F·R_G` pairs of 1D
/// convolutions, `Σᵢⱼ σᵢσⱼ (uᵢ∗uⱼ)(vᵢ∗vⱼ)ᵀ`. Both factor shapes must be
/// square and match `alg1d`, a linear `(r, n)` algorithm.
pub fn low_rank_conv2d<T: Scalar>(
    factors_f: &RankFactors2D<T>,
    factors_g: &RankFactors2D<T>,
    alg1d: &BilinearAlgorithm<T>,
    exec: Execution,
) -> Result<Matrix<T>> {
    let ConvVariant::Linear { r, n } = *alg1d.variant() else {
        return Err(ConvError::InvalidArgument(format!(
            "low-rank 2D convolution needs a linear algorithm, got {}",
            alg1d.variant()
        )));
    };
    if factors_f.shape() != (r, r) || factors_g.shape() != (n, n) {
        return Err(ConvError::DimensionMismatch(format!(
            "factor shapes {:?} and {:?} do not match linear({r}, {n})",
            factors_f.shape(),
            factors_g.shape()
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..factors_f.rank())
        .flat_map(|i| (0..factors_g.rank()).map(move |j| (i, j)))
        .collect();
    let terms = par::try_map(exec, pairs, |(i, j)| -> Result<Matrix<T>> {
        let cu = alg1d.apply(&factors_f.u[i], &factors_g.u[j])?;
        let cv = alg1d.apply(&factors_f.v[i], &factors_g.v[j])?;
        let w = factors_f.sigma[i].clone() * factors_g.sigma[j].clone();
        Ok(Matrix::from_fn(cu.len(), cv.len(), |a, b| {
            w.clone() * cu[a].clone() * cv[b].clone()
        }))
    })?;
    let out = n + r - 1;
    let mut y = Matrix::<T>::zeros(out, out);
    for t in terms {
        for a in 0..out {
            for b in 0..out {
                y.set(a, b, y.get(a, b).clone() + t.get(a, b).clone());
            }
        }
    }
    Ok(y)
}
