//! Gaussian-sketch rangefinder and the factored approximation `F ≈ H T`.
//!
//! 1. draw a `b × (r+s)` Gaussian test matrix `G`,
//! 2. form the sketch `Y = F G`,
//! 3. orthonormalize `Y` into `H`, then set `T = Hᵀ F`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dense::{gaussian_matrix, thin_qr, DenseMatrix};
use crate::error::{Error, Result};
use crate::io::{parse_matrix_market, write_matrix_market};

/// Minimum oversampling; the expected-error bound needs `s - 1 > 0`.
pub const MIN_OVERSAMPLING: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Randomized,
    TruncatedSvd,
    ColumnSelect,
    ExactFallback,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Randomized => "randomized",
            Method::TruncatedSvd => "truncated-svd",
            Method::ColumnSelect => "column-select",
            Method::ExactFallback => "exact-fallback",
        }
    }
}

/// `F ≈ H T` with `H` orthonormal (`a × ℓ`) and `T` (`ℓ × b`).
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredApproximation {
    h: DenseMatrix,
    t: DenseMatrix,
    target_rank: usize,
    oversampling: usize,
    seed: Option<u64>,
    method: Method,
}

impl FactoredApproximation {
    /// Assembles a factorization, checking that the inner dimensions agree
    /// and that `H` has orthonormal columns to within `1e-10`.
    pub fn new(
        h: DenseMatrix,
        t: DenseMatrix,
        target_rank: usize,
        oversampling: usize,
        seed: Option<u64>,
        method: Method,
    ) -> Result<Self> {
        if h.cols() != t.rows() {
            return Err(Error::DimensionMismatch {
                op: "factored approximation",
                left: h.dims(),
                right: t.dims(),
            });
        }
        let defect = h.orthonormality_defect();
        if defect > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "basis is not orthonormal (defect {defect:e})"
            )));
        }
        Ok(Self {
            h,
            t,
            target_rank,
            oversampling,
            seed,
            method,
        })
    }

    pub fn h(&self) -> &DenseMatrix {
        &self.h
    }

    pub fn t(&self) -> &DenseMatrix {
        &self.t
    }

    /// Inner dimension `ℓ`.
    pub fn width(&self) -> usize {
        self.h.cols()
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn oversampling(&self) -> usize {
        self.oversampling
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// The product `H T`.
    pub fn reconstruct(&self) -> DenseMatrix {
        self.h
            .matmul(&self.t)
            .expect("inner dimensions checked at construction")
    }

    pub fn sidecar(&self) -> Sidecar {
        Sidecar {
            target_rank: self.target_rank,
            oversampling: self.oversampling,
            seed: self.seed,
            method: self.method,
        }
    }

    /// Writes `<prefix>_H.mtx`, `<prefix>_T.mtx` and `<prefix>.json`.
    pub fn save(&self, prefix: impl AsRef<Path>) -> Result<FactoredPaths> {
        let paths = FactoredPaths::for_prefix(prefix.as_ref());
        let mut buf = Vec::new();
        write_matrix_market(&self.h, &mut buf)?;
        fs::write(&paths.h, &buf)?;
        buf.clear();
        write_matrix_market(&self.t, &mut buf)?;
        fs::write(&paths.t, &buf)?;
        let mut json = serde_json::to_string_pretty(&self.sidecar())?;
        json.push('\n');
        fs::write(&paths.sidecar, json)?;
        Ok(paths)
    }

    pub fn load(prefix: impl AsRef<Path>) -> Result<Self> {
        let paths = FactoredPaths::for_prefix(prefix.as_ref());
        let h = parse_matrix_market(&fs::read_to_string(&paths.h)?)?;
        let t = parse_matrix_market(&fs::read_to_string(&paths.t)?)?;
        let meta = parse_sidecar(&fs::read_to_string(&paths.sidecar)?)?;
        Self::new(
            h,
            t,
            meta.target_rank,
            meta.oversampling,
            meta.seed,
            meta.method,
        )
    }
}

/// JSON metadata stored next to the `H` and `T` Matrix Market files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub target_rank: usize,
    pub oversampling: usize,
    pub seed: Option<u64>,
    pub method: Method,
}

pub fn parse_sidecar(text: &str) -> Result<Sidecar> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredPaths {
    pub h: PathBuf,
    pub t: PathBuf,
    pub sidecar: PathBuf,
}

impl FactoredPaths {
    pub fn for_prefix(prefix: &Path) -> Self {
        let with = |suffix: &str| {
            let mut s = prefix.as_os_str().to_owned();
            s.push(suffix);
            PathBuf::from(s)
        };
        FactoredPaths {
            h: with("_H.mtx"),
            t: with("_T.mtx"),
            sidecar: with(".json"),
        }
    }
}

/// `Y = F G` with `G = gaussian_matrix(F.cols, width, seed)`.
pub fn sketch(f: &DenseMatrix, width: usize, seed: u64) -> Result<DenseMatrix> {
    if width == 0 {
        return Err(Error::InvalidArgument(
            "sketch width must be positive".into(),
        ));
    }
    let g = gaussian_matrix(f.cols(), width, seed);
    f.matmul(&g)
}

/// Orthonormal basis for `range(Y)` (the `Q` factor of a Householder QR).
pub fn build_basis(y: &DenseMatrix) -> Result<DenseMatrix> {
    let (q, _) = thin_qr(y)?;
    Ok(q)
}

/// Randomized rank-`r` factorization with oversampling `s`.
///
/// When `r + s ≥ min(a, b)` the sketch would span everything it can, so an
/// exact orthonormal basis of `range(F)` is used instead and the result is
/// tagged [`Method::ExactFallback`].
pub fn factorize(f: &DenseMatrix, r: usize, s: usize, seed: u64) -> Result<FactoredApproximation> {
    let min_dim = f.min_dim();
    if r == 0 || r > min_dim {
        return Err(Error::RankOutOfRange {
            rank: r,
            max: min_dim,
        });
    }
    if s < MIN_OVERSAMPLING {
        return Err(Error::OversamplingTooSmall(s));
    }
    if r.saturating_add(s) >= min_dim {
        let h = exact_range_basis(f)?;
        let t = h.t_matmul(f)?;
        return FactoredApproximation::new(h, t, r, s, None, Method::ExactFallback);
    }
    let y = sketch(f, r + s, seed)?;
    let h = build_basis(&y)?;
    let t = h.t_matmul(f)?;
    FactoredApproximation::new(h, t, r, s, Some(seed), Method::Randomized)
}

/// `a × min(a, b)` orthonormal basis containing `range(F)`.
fn exact_range_basis(f: &DenseMatrix) -> Result<DenseMatrix> {
    if f.rows() >= f.cols() {
        build_basis(f)
    } else {
        Ok(DenseMatrix::identity(f.rows()))
    }
}

/// `‖F − H T‖_F`, computed exactly.
pub fn approximation_error(f: &DenseMatrix, approx: &FactoredApproximation) -> Result<f64> {
    if approx.h.rows() != f.rows() || approx.t.cols() != f.cols() {
        return Err(Error::DimensionMismatch {
            op: "approximation_error",
            left: f.dims(),
            right: (approx.h.rows(), approx.t.cols()),
        });
    }
    Ok(f.sub(&approx.reconstruct())?.frobenius_norm())
}
