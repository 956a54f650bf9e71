//! Bilinear algorithm representation, execution, and validation against the
//! convolution tensor.
//!
//! Vectorization is row-major throughout: the `r × c` matrix `F` flattens to
//! index `row·c + col`, so a Kronecker-nested algorithm `(A₁⊗A₂, B₁⊗B₂,
//! C₁⊗C₂)` acts on `vec(F)` exactly as the mode-wise form acts on `F`.

mod tensor;

use std::fmt;

use crate::algebra::{Complex64, Domain, Matrix, RealScalar, Scalar};
use crate::error::{ConvError, Result};

pub(crate) use tensor::unravel;
pub use tensor::Tensor;

/// Largest tensor order accepted by [`BilinearAlgorithm::apply_nd`].
pub const DEFAULT_MAX_ORDER: usize = 4;

/// Imaginary parts above this on real inputs indicate a broken complex algorithm.
pub const IMAG_WARNING_THRESHOLD: f64 = 1e-10;

/// Which convolution an algorithm computes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvVariant {
    /// `y_k = Σ f_i g_{k-i}`; filter `r`, input `n`, output `n + r - 1`.
    Linear { r: usize, n: usize },
    /// `y_k = Σ f_i g_{(k-i) mod n}`; all lengths `n`.
    Cyclic { n: usize },
    /// `y_k = Σ f_i g_{k+i}`; filter `r`, input `n_out + r - 1`, output `n_out`.
    Correlation { r: usize, n_out: usize },
    /// Multidimensional convolution whose tensor is the Kronecker product of
    /// the factors' tensors (row-major vectorization).
    Product(Vec<ConvVariant>),
}

impl ConvVariant {
    pub fn filter_len(&self) -> usize {
        match self {
            Self::Linear { r, .. } | Self::Correlation { r, .. } => *r,
            Self::Cyclic { n } => *n,
            Self::Product(f) => f.iter().map(Self::filter_len).product(),
        }
    }

    pub fn input_len(&self) -> usize {
        match self {
            Self::Linear { n, .. } | Self::Cyclic { n } => *n,
            Self::Correlation { r, n_out } => n_out + r - 1,
            Self::Product(f) => f.iter().map(Self::input_len).product(),
        }
    }

    pub fn output_len(&self) -> usize {
        match self {
            Self::Linear { r, n } => n + r - 1,
            Self::Cyclic { n } => *n,
            Self::Correlation { n_out, .. } => *n_out,
            Self::Product(f) => f.iter().map(Self::output_len).product(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Linear { .. } => "linear",
            Self::Cyclic { .. } => "cyclic",
            Self::Correlation { .. } => "correlation",
            Self::Product(_) => "product",
        }
    }

    fn check(&self) -> Result<()> {
        let ok = match self {
            Self::Linear { r, n } | Self::Correlation { r, n_out: n } => *r >= 1 && *n >= 1,
            Self::Cyclic { n } => *n >= 1,
            Self::Product(f) => {
                return if f.is_empty() {
                    Err(ConvError::InvalidArgument("empty product variant".into()))
                } else {
                    f.iter().try_for_each(Self::check)
                }
            }
        };
        if ok {
            Ok(())
        } else {
            Err(ConvError::InvalidArgument(format!(
                "degenerate variant {self}"
            )))
        }
    }

    /// Kronecker product of variants, flattened.
    pub fn product(a: &ConvVariant, b: &ConvVariant) -> ConvVariant {
        let mut factors = Vec::new();
        for v in [a, b] {
            match v {
                Self::Product(f) => factors.extend(f.iter().cloned()),
                other => factors.push(other.clone()),
            }
        }
        Self::Product(factors)
    }
}

impl fmt::Display for ConvVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Linear { r, n } => write!(f, "linear(r={r}, n={n})"),
            Self::Cyclic { n } => write!(f, "cyclic(n={n})"),
            Self::Correlation { r, n_out } => write!(f, "correlation(r={r}, n_out={n_out})"),
            Self::Product(factors) => {
                write!(f, "product[")?;
                for (i, v) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, " x ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// The 0/1 order-3 convolution tensor, dims `filter × input × output`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvTensor {
    dims: (usize, usize, usize),
    entries: Vec<bool>,
}

impl ConvTensor {
    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> bool {
        let (_, n, out) = self.dims;
        self.entries[(i * n + j) * out + k]
    }

    /// Number of ones.
    pub fn count(&self) -> usize {
        self.entries.iter().filter(|&&e| e).count()
    }
}

pub fn conv_tensor(variant: &ConvVariant) -> ConvTensor {
    let dims = (
        variant.filter_len(),
        variant.input_len(),
        variant.output_len(),
    );
    let (r, n, out) = dims;
    let mut entries = vec![false; r * n * out];
    for i in 0..r {
        for j in 0..n {
            for k in 0..out {
                entries[(i * n + j) * out + k] = tensor_entry(variant, i, j, k);
            }
        }
    }
    ConvTensor { dims, entries }
}

fn tensor_entry(variant: &ConvVariant, i: usize, j: usize, k: usize) -> bool {
    match variant {
        ConvVariant::Linear { .. } => i + j == k,
        ConvVariant::Cyclic { n } => (i + j) % n == k,
        ConvVariant::Correlation { .. } => j == i + k,
        ConvVariant::Product(factors) => {
            let (mut i, mut j, mut k) = (i, j, k);
            let mut all = true;
            for f in factors.iter().rev() {
                let (fr, fnn, fo) = (f.filter_len(), f.input_len(), f.output_len());
                all &= tensor_entry(f, i % fr, j % fnn, k % fo);
                i /= fr;
                j /= fnn;
                k /= fo;
            }
            all
        }
    }
}

/// A triple `(A, B, C)` computing `y = C[(Aᵀf) ⊙ (Bᵀg)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearAlgorithm<T> {
    a: Matrix<T>,
    b: Matrix<T>,
    c: Matrix<T>,
    variant: ConvVariant,
    provenance: String,
}

impl<T: Scalar> BilinearAlgorithm<T> {
    pub fn new(
        a: Matrix<T>,
        b: Matrix<T>,
        c: Matrix<T>,
        variant: ConvVariant,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        variant.check()?;
        let rank = a.cols();
        if b.cols() != rank || c.cols() != rank {
            return Err(ConvError::DimensionMismatch(format!(
                "column counts differ: A has {}, B has {}, C has {}",
                a.cols(),
                b.cols(),
                c.cols()
            )));
        }
        let want = (
            variant.filter_len(),
            variant.input_len(),
            variant.output_len(),
        );
        if (a.rows(), b.rows(), c.rows()) != want {
            return Err(ConvError::DimensionMismatch(format!(
                "{variant} needs row counts {want:?}, got ({}, {}, {})",
                a.rows(),
                b.rows(),
                c.rows()
            )));
        }
        if let ConvVariant::Linear { r, n } = variant {
            if rank < n + r - 1 {
                return Err(ConvError::InvalidArgument(format!(
                    "rank {rank} is below the minimum {} for {variant}",
                    n + r - 1
                )));
            }
        }
        Ok(Self {
            a,
            b,
            c,
            variant,
            provenance: provenance.into(),
        })
    }

    pub fn a(&self) -> &Matrix<T> {
        &self.a
    }

    pub fn b(&self) -> &Matrix<T> {
        &self.b
    }

    pub fn c(&self) -> &Matrix<T> {
        &self.c
    }

    pub fn variant(&self) -> &ConvVariant {
        &self.variant
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn rank(&self) -> usize {
        self.a.cols()
    }

    pub fn domain(&self) -> Domain {
        T::DOMAIN
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    /// Max over `(i, j, k)` of `|Σ_l a_il b_jl c_kl − t_ijk|`. Exactly zero
    /// for a correct rational algorithm.
    pub fn residual(&self) -> f64 {
        let t = conv_tensor(&self.variant);
        let (r, n, out) = t.dims();
        let rank = self.rank();
        let mut worst = 0.0f64;
        let mut ab = vec![T::zero(); rank];
        for i in 0..r {
            for j in 0..n {
                for (l, slot) in ab.iter_mut().enumerate() {
                    *slot = self.a.get(i, l).clone() * self.b.get(j, l).clone();
                }
                for k in 0..out {
                    let mut s = T::zero();
                    for (l, v) in ab.iter().enumerate() {
                        let c = self.c.get(k, l);
                        if !v.is_zero() && !c.is_zero() {
                            s = s + v.clone() * c.clone();
                        }
                    }
                    if t.get(i, j, k) {
                        s = s - T::one();
                    }
                    worst = worst.max(s.magnitude());
                }
            }
        }
        worst
    }

    /// Default tolerance for floating-point algorithms:
    /// `1e-12 · R · max|A| · max|B| · max|C|`. Zero for rationals.
    pub fn default_tol(&self) -> f64 {
        if T::DOMAIN == Domain::Rational {
            return 0.0;
        }
        1e-12
            * self.rank() as f64
            * self.a.max_magnitude()
            * self.b.max_magnitude()
            * self.c.max_magnitude()
    }

    /// Returns the residual, or an error when it exceeds `tol`.
    pub fn validate(&self, tol: f64) -> Result<f64> {
        let residual = self.residual();
        if residual > tol {
            return Err(ConvError::ValidationFailed { residual, tol });
        }
        Ok(residual)
    }

    /// `y = C[(Aᵀf) ⊙ (Bᵀg)]`.
    pub fn apply(&self, f: &[T], g: &[T]) -> Result<Vec<T>> {
        let fa = self.a.tr_matvec(f)?;
        let gb = self.b.tr_matvec(g)?;
        let prod: Vec<T> = fa.into_iter().zip(gb).map(|(x, y)| x * y).collect();
        self.c.matvec(&prod)
    }

    /// `Y = C[(AᵀFA) ⊙ (BᵀGB)]Cᵀ` for square 2D inputs.
    pub fn apply_2d(&self, f: &Matrix<T>, g: &Matrix<T>) -> Result<Matrix<T>> {
        let (r, n) = (self.a.rows(), self.b.rows());
        if (f.rows(), f.cols()) != (r, r) || (g.rows(), g.cols()) != (n, n) {
            return Err(ConvError::DimensionMismatch(format!(
                "apply_2d needs {r}x{r} and {n}x{n} inputs, got {}x{} and {}x{}",
                f.rows(),
                f.cols(),
                g.rows(),
                g.cols()
            )));
        }
        let at = self.a.transpose();
        let bt = self.b.transpose();
        let ef = at.matmul(f)?.matmul(&self.a)?;
        let eg = bt.matmul(g)?.matmul(&self.b)?;
        let rank = self.rank();
        let prod = Matrix::from_fn(rank, rank, |i, j| {
            ef.get(i, j).clone() * eg.get(i, j).clone()
        });
        self.c.matmul(&prod)?.matmul(&self.c.transpose())
    }

    /// Order-`d` convolution by mode-wise encode, elementwise product and
    /// mode-wise decode; the `d`-fold Kronecker matrices are never formed.
    pub fn apply_nd(&self, f: &Tensor<T>, g: &Tensor<T>) -> Result<Tensor<T>> {
        self.apply_nd_with_limit(f, g, DEFAULT_MAX_ORDER)
    }

    pub fn apply_nd_with_limit(
        &self,
        f: &Tensor<T>,
        g: &Tensor<T>,
        max_order: usize,
    ) -> Result<Tensor<T>> {
        let d = f.order();
        if d == 0 || d != g.order() {
            return Err(ConvError::DimensionMismatch(format!(
                "inputs have orders {} and {}",
                f.order(),
                g.order()
            )));
        }
        if d > max_order {
            return Err(ConvError::Unsupported(format!(
                "order {d} exceeds the limit of {max_order}"
            )));
        }
        let (r, n) = (self.a.rows(), self.b.rows());
        if f.cubical_len() != Some(r) || g.cubical_len() != Some(n) {
            return Err(ConvError::DimensionMismatch(format!(
                "apply_nd needs cubical inputs with modes {r} and {n}, got {:?} and {:?}",
                f.shape(),
                g.shape()
            )));
        }
        let ef = f.multilinear(&self.a.transpose())?;
        let eg = g.multilinear(&self.b.transpose())?;
        ef.hadamard(&eg)?.multilinear(&self.c)
    }

    /// Matrix interchange: `(A, B, C) → (A, C, B)`, switching between linear
    /// convolution and correlation. The rank is unchanged.
    pub fn interchange(&self) -> Result<Self> {
        let variant = match self.variant {
            ConvVariant::Linear { r, n } => ConvVariant::Correlation { r, n_out: n },
            ConvVariant::Correlation { r, n_out } => ConvVariant::Linear { r, n: n_out },
            _ => {
                return Err(ConvError::Unsupported(format!(
                    "matrix interchange of {} algorithm",
                    self.variant
                )))
            }
        };
        Ok(Self {
            a: self.a.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            variant,
            provenance: format!("interchange({})", self.provenance),
        })
    }

    /// `(A₁⊗A₂, B₁⊗B₂, C₁⊗C₂)`, rank `R₁R₂`.
    pub fn kron_nest(&self, other: &Self) -> Self {
        Self {
            a: self.a.kron(&other.a),
            b: self.b.kron(&other.b),
            c: self.c.kron(&other.c),
            variant: ConvVariant::product(&self.variant, &other.variant),
            provenance: format!("kron({}, {})", self.provenance, other.provenance),
        }
    }

    pub fn to_complex(&self) -> BilinearAlgorithm<Complex64> {
        BilinearAlgorithm {
            a: self.a.to_complex(),
            b: self.b.to_complex(),
            c: self.c.to_complex(),
            variant: self.variant.clone(),
            provenance: self.provenance.clone(),
        }
    }

    /// Replaces the decoding matrix and variant; used by compositions that
    /// post-multiply the decoder.
    pub(crate) fn with_decoder(
        &self,
        c: Matrix<T>,
        variant: ConvVariant,
        provenance: String,
    ) -> Result<Self> {
        Self::new(self.a.clone(), self.b.clone(), c, variant, provenance)
    }
}

impl<T: RealScalar> BilinearAlgorithm<T> {
    /// Converts every entry to `f64` once, for execution.
    pub fn to_f64(&self) -> BilinearAlgorithm<f64> {
        BilinearAlgorithm {
            a: self.a.to_f64(),
            b: self.b.to_f64(),
            c: self.c.to_f64(),
            variant: self.variant.clone(),
            provenance: self.provenance.clone(),
        }
    }
}

/// Output of a real-input execution.
#[derive(Clone, Debug, PartialEq)]
pub struct RealOutput<V> {
    pub values: V,
    /// Largest discarded imaginary part (zero for real algorithms).
    pub max_imag: f64,
}

impl<V> RealOutput<V> {
    pub fn imag_warning(&self) -> bool {
        self.max_imag > IMAG_WARNING_THRESHOLD
    }
}

/// Execution on real `f64` inputs, regardless of the algorithm's domain.
pub trait RealApply {
    fn apply_real(&self, f: &[f64], g: &[f64]) -> Result<RealOutput<Vec<f64>>>;

    fn apply_nd_real(&self, f: &Tensor<f64>, g: &Tensor<f64>) -> Result<RealOutput<Tensor<f64>>>;
}

impl RealApply for BilinearAlgorithm<f64> {
    fn apply_real(&self, f: &[f64], g: &[f64]) -> Result<RealOutput<Vec<f64>>> {
        Ok(RealOutput {
            values: self.apply(f, g)?,
            max_imag: 0.0,
        })
    }

    fn apply_nd_real(&self, f: &Tensor<f64>, g: &Tensor<f64>) -> Result<RealOutput<Tensor<f64>>> {
        Ok(RealOutput {
            values: self.apply_nd(f, g)?,
            max_imag: 0.0,
        })
    }
}

impl RealApply for BilinearAlgorithm<Complex64> {
    fn apply_real(&self, f: &[f64], g: &[f64]) -> Result<RealOutput<Vec<f64>>> {
        let lift = |v: &[f64]| {
            v.iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect::<Vec<_>>()
        };
        let y = self.apply(&lift(f), &lift(g))?;
        let max_imag = y.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        Ok(RealOutput {
            values: y.iter().map(|z| z.re).collect(),
            max_imag,
        })
    }

    fn apply_nd_real(&self, f: &Tensor<f64>, g: &Tensor<f64>) -> Result<RealOutput<Tensor<f64>>> {
        let lift = |t: &Tensor<f64>| t.map(|&x| Complex64::new(x, 0.0));
        let y = self.apply_nd(&lift(f), &lift(g))?;
        let max_imag = y.data().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        Ok(RealOutput {
            values: y.map(|z| z.re),
            max_imag,
        })
    }
}

/// An algorithm in any of the three scalar domains.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyAlgorithm {
    Rational(BilinearAlgorithm<crate::algebra::Rational>),
    Real(BilinearAlgorithm<f64>),
    Complex(BilinearAlgorithm<Complex64>),
}

macro_rules! dispatch {
    ($self:expr, $alg:ident => $body:expr) => {
        match $self {
            AnyAlgorithm::Rational($alg) => $body,
            AnyAlgorithm::Real($alg) => $body,
            AnyAlgorithm::Complex($alg) => $body,
        }
    };
}

impl AnyAlgorithm {
    pub fn domain(&self) -> Domain {
        dispatch!(self, a => a.domain())
    }

    pub fn rank(&self) -> usize {
        dispatch!(self, a => a.rank())
    }

    pub fn variant(&self) -> &ConvVariant {
        dispatch!(self, a => a.variant())
    }

    pub fn provenance(&self) -> &str {
        dispatch!(self, a => a.provenance())
    }

    pub fn residual(&self) -> f64 {
        dispatch!(self, a => a.residual())
    }

    pub fn default_tol(&self) -> f64 {
        dispatch!(self, a => a.default_tol())
    }

    /// Lifts to `target` if it is a wider domain; never narrows.
    pub fn promote(&self, target: Domain) -> Result<AnyAlgorithm> {
        Ok(match (self, target) {
            (a, t) if a.domain() == t => a.clone(),
            (AnyAlgorithm::Rational(a), Domain::Real) => AnyAlgorithm::Real(a.to_f64()),
            (AnyAlgorithm::Rational(a), Domain::Complex) => AnyAlgorithm::Complex(a.to_complex()),
            (AnyAlgorithm::Real(a), Domain::Complex) => AnyAlgorithm::Complex(a.to_complex()),
            (a, t) => {
                return Err(ConvError::DomainMismatch(format!(
                    "cannot convert {} algorithm to {}",
                    a.domain().as_str(),
                    t.as_str()
                )))
            }
        })
    }

    /// Kronecker nesting after promoting both sides to the wider domain.
    pub fn kron_nest(&self, other: &AnyAlgorithm) -> Result<AnyAlgorithm> {
        let target = self.domain().max(other.domain());
        Ok(match (self.promote(target)?, other.promote(target)?) {
            (AnyAlgorithm::Rational(a), AnyAlgorithm::Rational(b)) => {
                AnyAlgorithm::Rational(a.kron_nest(&b))
            }
            (AnyAlgorithm::Real(a), AnyAlgorithm::Real(b)) => AnyAlgorithm::Real(a.kron_nest(&b)),
            (AnyAlgorithm::Complex(a), AnyAlgorithm::Complex(b)) => {
                AnyAlgorithm::Complex(a.kron_nest(&b))
            }
            _ => unreachable!("promotion yields equal domains"),
        })
    }

    pub fn interchange(&self) -> Result<AnyAlgorithm> {
        Ok(match self {
            AnyAlgorithm::Rational(a) => AnyAlgorithm::Rational(a.interchange()?),
            AnyAlgorithm::Real(a) => AnyAlgorithm::Real(a.interchange()?),
            AnyAlgorithm::Complex(a) => AnyAlgorithm::Complex(a.interchange()?),
        })
    }
}

impl From<BilinearAlgorithm<crate::algebra::Rational>> for AnyAlgorithm {
    fn from(a: BilinearAlgorithm<crate::algebra::Rational>) -> Self {
        AnyAlgorithm::Rational(a)
    }
}

impl From<BilinearAlgorithm<f64>> for AnyAlgorithm {
    fn from(a: BilinearAlgorithm<f64>) -> Self {
        AnyAlgorithm::Real(a)
    }
}

impl From<BilinearAlgorithm<Complex64>> for AnyAlgorithm {
    fn from(a: BilinearAlgorithm<Complex64>) -> Self {
        AnyAlgorithm::Complex(a)
    }
}

impl RealApply for AnyAlgorithm {
    fn apply_real(&self, f: &[f64], g: &[f64]) -> Result<RealOutput<Vec<f64>>> {
        match self {
            AnyAlgorithm::Rational(a) => a.to_f64().apply_real(f, g),
            AnyAlgorithm::Real(a) => a.apply_real(f, g),
            AnyAlgorithm::Complex(a) => a.apply_real(f, g),
        }
    }

    fn apply_nd_real(&self, f: &Tensor<f64>, g: &Tensor<f64>) -> Result<RealOutput<Tensor<f64>>> {
        match self {
            AnyAlgorithm::Rational(a) => a.to_f64().apply_nd_real(f, g),
            AnyAlgorithm::Real(a) => a.apply_nd_real(f, g),
            AnyAlgorithm::Complex(a) => a.apply_nd_real(f, g),
        }
    }
}
