//! Scalars, dense matrices, polynomials, and the structured matrices used to
//! build and analyze convolution algorithms.

mod matrix;
mod poly;
mod scalar;
mod structured;

pub(crate) use poly::parse_rational;
pub(crate) use structured::root_of_unity;

pub use matrix::Matrix;
pub use poly::Polynomial;
pub use scalar::{rational, Complex64, Domain, Rational, RealScalar, Scalar};
pub use structured::{
    bezout_solve, circulant_of, dct1_matrix, dft_matrix, mod_operator, square_vandermonde,
    toeplitz_of, vandermonde, Node,
};
