//! Constructors for bilinear convolution algorithms.

mod fixed;
mod spectral;
mod toom;
mod winograd;

pub use fixed::{direct, fixed_alg, karatsuba, sparse3, FixedAlg};
pub use spectral::{
    calibrate_dct_window, dct_linear_alg, dft_cyclic_alg, dft_linear_alg, DctAlgorithm,
};
pub use toom::{
    chebyshev_nodes, default_nodes, small_integer_nodes, toom_cook, toom_cook_scheme, NodeList,
    NodeScheme,
};
pub use winograd::{default_divisors, reference_divisors, winograd, DivisorSet, SubAlgorithms};
