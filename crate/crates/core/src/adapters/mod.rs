//! Compositions of small algorithms into larger or multidimensional ones.

mod agarwal_cooley;
mod low_rank;
mod overlap;

pub use agarwal_cooley::{agarwal_cooley_nest, crt_permutation, CrtSplit};
pub use low_rank::{low_rank_conv2d, RankFactors2D};
pub use overlap::{
    nested_toom, overlap_add_matrix, overlap_add_nest, small_filter_conv, OverlapShape,
};
