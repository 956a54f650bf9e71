use crate::algebra::{Matrix, Rational, Scalar};
use crate::bilinear::{BilinearAlgorithm, ConvVariant};
use crate::error::{ConvError, Result};
use crate::generators::{small_integer_nodes, toom_cook};

/// Block split `n = γ·η` of a length-`n` vector into `γ` chunks of length `η`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OverlapShape {
    pub gamma: usize,
    pub eta: usize,
}

impl OverlapShape {
    pub fn new(gamma: usize, eta: usize) -> Result<Self> {
        if gamma == 0 || eta == 0 {
            return Err(ConvError::InvalidArgument(
                "overlap-add factors must be >= 1".into(),
            ));
        }
        Ok(Self { gamma, eta })
    }

    pub fn n(&self) -> usize {
        self.gamma * self.eta
    }
}

/// Recomposition matrix `Q`, `(2n−1) × (2γ−1)(2η−1)`: column `j` of the
/// row-major 2D result lands on output `j − (η−1)⌊j/(2η−1)⌋`.
pub fn overlap_add_matrix<T: Scalar>(shape: OverlapShape) -> Matrix<T> {
    let (g, e) = (shape.gamma, shape.eta);
    let cols = (2 * g - 1) * (2 * e - 1);
    Matrix::from_fn(2 * shape.n() - 1, cols, |i, j| {
        if i == j - (e - 1) * (j / (2 * e - 1)) {
            T::one()
        } else {
            T::zero()
        }
    })
}

fn square_linear_size(alg: &ConvVariant) -> Option<usize> {
    match *alg {
        ConvVariant::Linear { r, n } if r == n => Some(n),
        _ => None,
    }
}

/// Linear convolution of length `γη` from a `(γ, η)` 2D convolution: the
/// Kronecker nest followed by `Q` on the decoder.
pub fn overlap_add_nest<T: Scalar>(
    alg_gamma: &BilinearAlgorithm<T>,
    alg_eta: &BilinearAlgorithm<T>,
) -> Result<BilinearAlgorithm<T>> {
    let (Some(gamma), Some(eta)) = (
        square_linear_size(alg_gamma.variant()),
        square_linear_size(alg_eta.variant()),
    ) else {
        return Err(ConvError::InvalidArgument(format!(
            "overlap-add needs square linear algorithms, got {} and {}",
            alg_gamma.variant(),
            alg_eta.variant()
        )));
    };
    let shape = OverlapShape::new(gamma, eta)?;
    let nested = alg_gamma.kron_nest(alg_eta);
    let q = overlap_add_matrix::<T>(shape);
    let n = shape.n();
    nested.with_decoder(
        q.matmul(nested.c())?,
        ConvVariant::Linear { r: n, n },
        format!(
            "overlap-add({}, {})",
            alg_gamma.provenance(),
            alg_eta.provenance()
        ),
    )
}

/// Toom-Cook blocks of the given sizes nested by overlap-add from the right,
/// so `[2, 2, 2]` is `2 × (2 × 2)`.
pub fn nested_toom(factors: &[usize]) -> Result<BilinearAlgorithm<Rational>> {
    let toom = |s: usize| {
        if s == 0 {
            return Err(ConvError::InvalidArgument("block size must be >= 1".into()));
        }
        toom_cook(s, s, &small_integer_nodes(2 * s - 1))
    };
    let (&last, rest) = factors
        .split_last()
        .ok_or_else(|| ConvError::InvalidArgument("no nesting factors".into()))?;
    let mut alg = toom(last)?;
    for &s in rest.iter().rev() {
        alg = overlap_add_nest(&toom(s)?, &alg)?;
    }
    let label: Vec<String> = factors.iter().map(usize::to_string).collect();
    Ok(alg.with_provenance(format!("nested-toom({})", label.join("x"))))
}

/// Linear convolution of a short filter with a long input: the input is cut
/// into length-`r` chunks, each convolved with `f` by `alg_r`, and the
/// overlapping tails are added. When `r ∤ n` the input is zero-padded and the
/// output truncated to `n + r − 1`.
pub fn small_filter_conv<T: Scalar>(
    f: &[T],
    g: &[T],
    alg_r: &BilinearAlgorithm<T>,
) -> Result<Vec<T>> {
    if f.is_empty() || g.is_empty() {
        return Err(ConvError::InvalidArgument(
            "empty convolution operand".into(),
        ));
    }
    let r = f.len();
    if alg_r.variant() != &(ConvVariant::Linear { r, n: r }) {
        return Err(ConvError::InvalidArgument(format!(
            "blocking with a length-{r} filter needs a linear({r},{r}) algorithm, got {}",
            alg_r.variant()
        )));
    }
    let out_len = g.len() + r - 1;
    let chunks = g.len().div_ceil(r);
    let mut y = vec![T::zero(); chunks * r + r - 1];
    let mut chunk = vec![T::zero(); r];
    for c in 0..chunks {
        for (t, slot) in chunk.iter_mut().enumerate() {
            *slot = g.get(c * r + t).cloned().unwrap_or_else(T::zero);
        }
        for (t, v) in alg_r.apply(f, &chunk)?.into_iter().enumerate() {
            let k = c * r + t;
            y[k] = y[k].clone() + v;
        }
    }
    y.truncate(out_len);
    Ok(y)
}
