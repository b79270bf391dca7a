use serde::{Deserialize, Serialize};

use super::trials::{mean_and_standard_error, run_indexed, Execution};
use crate::dense::random::SEED_DERIVATION;
use crate::dense::{derive_seed, gaussian_matrix, pseudoinverse};
use crate::error::{Error, Result};
use crate::rangefinder::MIN_OVERSAMPLING;
use crate::SCHEMA_VERSION;

/// Pass threshold, in standard errors, for the moment check.
pub const MOMENT_SLACK_SE: f64 = 4.0;

/// Monte Carlo estimate of `E‖G⁺‖_F²` for an `r × (r+s)` Gaussian `G`,
/// compared with the closed form `r/(s−1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub schema_version: u32,
    pub r: usize,
    pub s: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub seed_derivation: String,
    pub estimate: f64,
    pub std_error: f64,
    pub expected: f64,
    pub z_score: f64,
    pub pass: bool,
}

pub fn verify_gaussian_pinv_moment(
    r: usize,
    s: usize,
    trials: usize,
    master_seed: u64,
) -> Result<MomentEstimate> {
    verify_gaussian_pinv_moment_with(r, s, trials, master_seed, Execution::Parallel)
}

pub fn verify_gaussian_pinv_moment_with(
    r: usize,
    s: usize,
    trials: usize,
    master_seed: u64,
    exec: Execution,
) -> Result<MomentEstimate> {
    if r == 0 {
        return Err(Error::RankOutOfRange {
            rank: 0,
            max: usize::MAX,
        });
    }
    if s < MIN_OVERSAMPLING {
        return Err(Error::OversamplingTooSmall(s));
    }
    if trials < 2 {
        return Err(Error::InvalidArgument(
            "moment check needs at least 2 trials".into(),
        ));
    }
    let samples = run_indexed(trials, exec, |i| {
        let g = gaussian_matrix(r, r + s, derive_seed(master_seed, i));
        let n = pseudoinverse(&g)?.frobenius_norm();
        Ok(n * n)
    })?;
    let (estimate, std_error) = mean_and_standard_error(&samples);
    let expected = r as f64 / (s - 1) as f64;
    let z_score = (estimate - expected) / std_error;
    Ok(MomentEstimate {
        schema_version: SCHEMA_VERSION,
        r,
        s,
        trials,
        master_seed,
        seed_derivation: SEED_DERIVATION.to_string(),
        estimate,
        std_error,
        expected,
        z_score,
        pass: (estimate - expected).abs() <= MOMENT_SLACK_SE * std_error,
    })
}
