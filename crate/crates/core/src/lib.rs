//! Randomized low-rank matrix approximation.
//!
//! A Gaussian sketch `Y = F G` of a matrix `F` is orthonormalized into a basis
//! `H`, and `F` is approximated in factored form as `H T` with `T = Hᵀ F`.
//! Alongside the factorization the crate provides the expected-error bound
//! `(1 + r/(s-1)) τ_r`, the oversampling rule that picks `s` for a given error
//! budget, deterministic baselines, and a Monte Carlo harness that checks the
//! bound empirically.
//!
//! Everything is built on a small column-major dense kernel set in [`dense`]
//! (Householder QR, one-sided Jacobi SVD, pseudoinverse, seeded Gaussian
//! sampling).

pub mod baselines;
pub mod dense;
pub mod error;
pub mod experiments;
pub mod io;
pub mod planner;
pub mod rangefinder;

pub use dense::{DenseMatrix, SingularSpectrum, Svd};
pub use error::{Error, Result};
pub use planner::{ApproximationPlan, Mode};
pub use rangefinder::{FactoredApproximation, Method};

/// Version tag written into every JSON report.
pub const SCHEMA_VERSION: u32 = 1;
