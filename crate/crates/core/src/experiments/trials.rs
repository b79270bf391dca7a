use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dense::random::SEED_DERIVATION;
use crate::dense::{derive_seed, singular_values, DenseMatrix};
use crate::error::{Error, Result};
use crate::planner::{expected_error_bound, tail_energy, Mode};
use crate::rangefinder::{approximation_error, factorize, Method};
use crate::SCHEMA_VERSION;

/// Slack, in standard errors, allowed between the empirical mean and the bound.
pub const BOUND_SLACK_SE: f64 = 3.0;

/// Errors below `ROUNDING_FLOOR · ‖F‖_F` are indistinguishable from zero.
pub const ROUNDING_FLOOR: f64 = 1e-12;

/// How trials are scheduled. Results are identical either way.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// Runs `trials` independent jobs indexed `0..trials`; output is in index order.
pub(crate) fn run_indexed<T, F>(trials: usize, exec: Execution, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    match exec {
        Execution::Serial => (0..trials as u64).map(job).collect(),
        Execution::Parallel => (0..trials as u64).into_par_iter().map(job).collect(),
    }
}

/// Sample mean and standard error of the mean, summed in index order.
pub fn mean_and_standard_error(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    BoundSatisfied,
    BoundViolated,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub rows: usize,
    pub cols: usize,
    pub target_rank: usize,
    pub oversampling: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub mode: Mode,
    pub method: Method,
    pub seed_derivation: String,
}

/// Monte Carlo summary of repeated randomized factorizations.
///
/// `per_trial_errors` holds plain Frobenius errors `‖F − H T‖_F` by trial index.
/// `std_error` is the standard error of the statistic the mode compares: the
/// squared error in squared-consistent mode, the plain error otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub schema_version: u32,
    pub config: TrialConfig,
    pub per_trial_errors: Vec<f64>,
    pub mean_error: f64,
    pub mean_squared_error: f64,
    pub std_error: f64,
    pub tail_energy: f64,
    pub bound: f64,
    /// `ROUNDING_FLOOR · ‖F‖_F` in the mode's units, added to the slack.
    pub rounding_floor: f64,
    pub epsilon: Option<f64>,
    pub fraction_below_epsilon: Option<f64>,
    pub verdict: Verdict,
}

impl TrialReport {
    /// Mean of the mode's statistic over trials.
    pub fn mean_statistic(&self) -> f64 {
        match self.config.mode {
            Mode::PaperLiteral => self.mean_error,
            Mode::SquaredConsistent => self.mean_squared_error,
        }
    }

    /// Fills in the budget comparison: fraction of trials strictly below
    /// `epsilon` (a plain error) and a verdict on whether the mean statistic is
    /// strictly below `budget`.
    pub(crate) fn compare_to_epsilon(&mut self, epsilon: f64, budget: f64) {
        let below = self
            .per_trial_errors
            .iter()
            .filter(|&&e| e < epsilon)
            .count();
        self.epsilon = Some(epsilon);
        self.fraction_below_epsilon = Some(below as f64 / self.per_trial_errors.len() as f64);
        self.verdict = if self.mean_statistic() < budget {
            Verdict::BoundSatisfied
        } else {
            Verdict::BoundViolated
        };
    }
}

/// [`monte_carlo_with`] on the parallel schedule.
pub fn monte_carlo(
    f: &DenseMatrix,
    r: usize,
    s: usize,
    trials: usize,
    master_seed: u64,
    mode: Mode,
) -> Result<TrialReport> {
    monte_carlo_with(f, r, s, trials, master_seed, mode, Execution::Parallel)
}

/// Repeats [`factorize`] with seeds `derive_seed(master_seed, i)` and checks
/// the mean statistic against `(1 + r/(s−1)) τ_r` with a 3-standard-error slack
/// (plus the rounding floor).
pub fn monte_carlo_with(
    f: &DenseMatrix,
    r: usize,
    s: usize,
    trials: usize,
    master_seed: u64,
    mode: Mode,
    exec: Execution,
) -> Result<TrialReport> {
    let tau = tail_energy(&singular_values(f)?, r);
    run_trials(f, r, s, trials, master_seed, mode, exec, tau)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn run_trials(
    f: &DenseMatrix,
    r: usize,
    s: usize,
    trials: usize,
    master_seed: u64,
    mode: Mode,
    exec: Execution,
    tau: f64,
) -> Result<TrialReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let bound = expected_error_bound(r, s, tau)?;
    // argument errors surface once, before spawning trials
    let method = factorize(f, r, s, derive_seed(master_seed, 0))?.method();

    let errors = run_indexed(trials, exec, |i| {
        let approx = factorize(f, r, s, derive_seed(master_seed, i))?;
        approximation_error(f, &approx)
    })?;

    let (mean_error, se_plain) = mean_and_standard_error(&errors);
    let squared: Vec<f64> = errors.iter().map(|e| e * e).collect();
    let (mean_squared_error, se_squared) = mean_and_standard_error(&squared);
    let (mean_stat, std_error) = match mode {
        Mode::PaperLiteral => (mean_error, se_plain),
        Mode::SquaredConsistent => (mean_squared_error, se_squared),
    };
    let rounding_floor = mode.statistic(ROUNDING_FLOOR * f.frobenius_norm());
    let verdict = if mean_stat <= bound + BOUND_SLACK_SE * std_error + rounding_floor {
        Verdict::BoundSatisfied
    } else {
        Verdict::BoundViolated
    };

    Ok(TrialReport {
        schema_version: SCHEMA_VERSION,
        config: TrialConfig {
            rows: f.rows(),
            cols: f.cols(),
            target_rank: r,
            oversampling: s,
            trials,
            master_seed,
            mode,
            method,
            seed_derivation: SEED_DERIVATION.to_string(),
        },
        per_trial_errors: errors,
        mean_error,
        mean_squared_error,
        std_error,
        tail_energy: tau,
        bound,
        rounding_floor,
        epsilon: None,
        fraction_below_epsilon: None,
        verdict,
    })
}
