//! Numerical and exact ranks, kernels and minors.

mod minors;
mod rank;
mod svd;

pub use minors::{
    generic_rank, minors, random_rational_point, Minor, GENERIC_RANK_SAMPLES, MINOR_DIM_CAP,
    SCHWARTZ_ZIPPEL_NOTE,
};
pub use rank::{exact_rank, kernel_basis, numerical_rank, numerical_rank_scaled, RankResult, DEFAULT_REL_TOL};
pub use svd::{jacobi_svd, op_norm, Svd};
