use serde::{Deserialize, Serialize};

use crate::dense::{derive_seed, gaussian_matrix, thin_qr, DenseMatrix};
use crate::error::{Error, Result};

/// Recipe for a seeded test matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub rows: usize,
    pub cols: usize,
    #[serde(flatten)]
    pub kind: GeneratorKind,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorKind {
    /// `F = U diag(spectrum) Vᵀ` with random orthonormal `U`, `V`.
    PrescribedSpectrum { spectrum: Vec<f64> },
    /// `F = B + E`: `B` has `signal_rank` unit singular values, `E` is Gaussian
    /// noise with `‖E‖_F ≈ noise_level`.
    SignalPlusNoise {
        signal_rank: usize,
        noise_level: f64,
    },
}

impl GeneratorSpec {
    pub fn prescribed(rows: usize, cols: usize, spectrum: Vec<f64>, seed: u64) -> Self {
        Self {
            rows,
            cols,
            kind: GeneratorKind::PrescribedSpectrum { spectrum },
            seed,
        }
    }

    pub fn signal_plus_noise(
        rows: usize,
        cols: usize,
        signal_rank: usize,
        noise_level: f64,
        seed: u64,
    ) -> Self {
        Self {
            rows,
            cols,
            kind: GeneratorKind::SignalPlusNoise {
                signal_rank,
                noise_level,
            },
            seed,
        }
    }

    pub fn generate(&self) -> Result<DenseMatrix> {
        match self.kind {
            GeneratorKind::PrescribedSpectrum { .. } => gen_prescribed_spectrum(self),
            GeneratorKind::SignalPlusNoise { .. } => gen_signal_plus_noise(self),
        }
    }

    fn check_dims(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidDimensions {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }
}

/// `σ_i = ratio^i` for `i = 1..=count`.
pub fn geometric_spectrum(ratio: f64, count: usize) -> Vec<f64> {
    (1..=count).map(|i| ratio.powi(i as i32)).collect()
}

/// `σ_i = i^(-power)` for `i = 1..=count`.
pub fn polynomial_spectrum(power: f64, count: usize) -> Vec<f64> {
    (1..=count).map(|i| (i as f64).powf(-power)).collect()
}

/// `rows × k` matrix with orthonormal columns from a seeded Gaussian QR.
fn random_orthonormal(rows: usize, k: usize, seed: u64) -> Result<DenseMatrix> {
    let (q, _) = thin_qr(&gaussian_matrix(rows, k, seed))?;
    Ok(q)
}

/// `U diag(weights) Vᵀ`.
fn outer_sum(u: &DenseMatrix, weights: &[f64], v: &DenseMatrix) -> Result<DenseMatrix> {
    let scaled = DenseMatrix::from_fn(u.rows(), weights.len(), |i, j| u.get(i, j) * weights[j]);
    scaled.matmul(&v.transpose())
}

pub fn gen_prescribed_spectrum(spec: &GeneratorSpec) -> Result<DenseMatrix> {
    spec.check_dims()?;
    let GeneratorKind::PrescribedSpectrum { spectrum } = &spec.kind else {
        return Err(Error::InvalidArgument(
            "generator kind is not prescribed-spectrum".into(),
        ));
    };
    // validates ordering, sign and length
    crate::dense::SingularSpectrum::new(spectrum.clone(), (spec.rows, spec.cols))?;
    if spectrum.is_empty() {
        return Err(Error::InvalidSpectrum("spectrum is empty".into()));
    }
    let k = spectrum.len();
    let u = random_orthonormal(spec.rows, k, derive_seed(spec.seed, 0))?;
    let v = random_orthonormal(spec.cols, k, derive_seed(spec.seed, 1))?;
    outer_sum(&u, spectrum, &v)
}

pub fn gen_signal_plus_noise(spec: &GeneratorSpec) -> Result<DenseMatrix> {
    spec.check_dims()?;
    let GeneratorKind::SignalPlusNoise {
        signal_rank,
        noise_level,
    } = spec.kind
    else {
        return Err(Error::InvalidArgument(
            "generator kind is not signal-plus-noise".into(),
        ));
    };
    let min_dim = spec.rows.min(spec.cols);
    if signal_rank == 0 || signal_rank > min_dim {
        return Err(Error::RankOutOfRange {
            rank: signal_rank,
            max: min_dim,
        });
    }
    if !(noise_level.is_finite() && noise_level >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "noise level {noise_level} must be finite and non-negative"
        )));
    }
    let u = random_orthonormal(spec.rows, signal_rank, derive_seed(spec.seed, 0))?;
    let v = random_orthonormal(spec.cols, signal_rank, derive_seed(spec.seed, 1))?;
    let signal = outer_sum(&u, &vec![1.0; signal_rank], &v)?;
    if noise_level == 0.0 {
        return Ok(signal);
    }
    let scale = noise_level / ((spec.rows * spec.cols) as f64).sqrt();
    let noise = gaussian_matrix(spec.rows, spec.cols, derive_seed(spec.seed, 2)).scale(scale);
    signal.add(&noise)
}
