//! Seeded Gaussian sampling.
//!
//! The generator is ChaCha8, which is counter based: a `(seed, stream)` pair
//! selects an independent keystream. Column `j` of a Gaussian matrix is drawn
//! from stream `j`, and per-trial seeds are derived from `(master, index)` with
//! [`derive_seed`], so results never depend on execution order.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::DenseMatrix;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Human-readable description of [`derive_seed`], written into reports.
pub const SEED_DERIVATION: &str =
    "splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15), splitmix64 finalizer (30, 27, 31)";

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of substream `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Standard normal variates via Box–Muller over one ChaCha8 stream.
#[derive(Clone, Debug)]
pub struct GaussianStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, spare: None }
    }

    /// Uniform on (0, 1].
    fn open_unit(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.open_unit();
        let u2 = self.open_unit();
        let radius = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare = Some(radius * theta.sin());
        radius * theta.cos()
    }
}

/// `rows × cols` matrix of i.i.d. N(0, 1) entries, deterministic in `seed`.
///
/// # Panics
/// If a dimension is zero.
pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
    let mut data = Vec::with_capacity(rows * cols);
    for j in 0..cols {
        let mut stream = GaussianStream::new(seed, j as u64);
        data.extend((0..rows).map(|_| stream.next_gaussian()));
    }
    DenseMatrix::from_parts(rows, cols, data)
}
