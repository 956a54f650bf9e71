//! Bilinear algorithms for discrete convolution.
//!
//! A bilinear algorithm is a triple of matrices `(A, B, C)` computing
//! `y = C[(Aᵀf) ⊙ (Bᵀg)]`. This crate builds such triples (Toom-Cook,
//! Winograd CRT with superlinear divisors, DFT/DCT, fixed small algorithms),
//! composes them (Kronecker nesting, overlap-add, Agarwal-Cooley, low-rank 2D),
//! validates them against the convolution tensor, executes them, and reports
//! their arithmetic cost and numerical accuracy.
//!
//! Generation happens in exact rational arithmetic wherever the nodes or
//! divisors are rational; matrices are converted to `f64` once for execution.

pub mod accuracy;
pub mod adapters;
pub mod algebra;
pub mod bilinear;
pub mod cost;
mod error;
pub mod fastexec;
pub mod generators;
pub mod io;
pub mod par;

pub use algebra::{Complex64, Domain, Matrix, Node, Polynomial, Rational, Scalar};
pub use bilinear::{AnyAlgorithm, BilinearAlgorithm, ConvVariant, RealApply, Tensor};
pub use error::{ConvError, Result};
