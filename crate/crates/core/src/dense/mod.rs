//! Dense column-major kernels: arithmetic, Householder QR, one-sided Jacobi
//! SVD, pseudoinverse and seeded Gaussian sampling.

mod matrix;
mod qr;
pub mod random;
mod svd;

pub use matrix::{frobenius_norm, matmul, DenseMatrix};
pub use qr::thin_qr;
pub use random::{derive_seed, gaussian_matrix};
pub use svd::{
    pseudoinverse, singular_values, svd, SingularSpectrum, Svd, MAX_SWEEPS, PINV_RANK_TOL,
};
