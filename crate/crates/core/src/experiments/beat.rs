use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::trials::{run_trials, Execution, TrialReport, Verdict};
use crate::baselines::{column_select, truncated_svd};
use crate::dense::{singular_values, DenseMatrix};
use crate::error::{Error, Result};
use crate::planner::{plan, ApproximationPlan, Mode};
use crate::rangefinder::{approximation_error, Method};
use crate::SCHEMA_VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Baseline {
    TruncatedSvd,
    ColumnSelect,
}

impl Baseline {
    pub fn method(self) -> Method {
        match self {
            Baseline::TruncatedSvd => Method::TruncatedSvd,
            Baseline::ColumnSelect => Method::ColumnSelect,
        }
    }
}

impl fmt::Display for Baseline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.method().tag())
    }
}

impl FromStr for Baseline {
    type Err = Error;

    /// Accepts `svd`/`truncated-svd` and `colsel`/`column-select`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svd" | "truncated-svd" => Ok(Baseline::TruncatedSvd),
            "colsel" | "column-select" => Ok(Baseline::ColumnSelect),
            other => Err(Error::InvalidArgument(format!(
                "unknown baseline {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Feasible,
    Infeasible,
}

/// Result of pitting the randomized factorization against a deterministic
/// rank-`r` baseline.
///
/// `epsilon` is the baseline's plain Frobenius error; `error_budget` is the
/// same quantity in the mode's units (squared in squared-consistent mode).
/// The randomized factorization has rank up to `r + s` while the baseline has
/// rank `r`; both are reported.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeatReport {
    pub schema_version: u32,
    pub outcome: Outcome,
    pub baseline: Baseline,
    pub baseline_rank: usize,
    pub randomized_rank: Option<usize>,
    pub epsilon: f64,
    pub error_budget: f64,
    pub mode: Mode,
    pub plan: ApproximationPlan,
    pub trials: Option<TrialReport>,
    pub verdict: Verdict,
}

pub fn beat_baseline_experiment(
    f: &DenseMatrix,
    r: usize,
    baseline: Baseline,
    trials: usize,
    master_seed: u64,
    mode: Mode,
) -> Result<BeatReport> {
    beat_baseline_experiment_with(
        f,
        r,
        baseline,
        trials,
        master_seed,
        mode,
        Execution::Parallel,
    )
}

/// Computes the baseline error `ε`, plans `s` for budget `ε` (or `ε²`), and
/// runs the Monte Carlo comparison. An unattainable budget is returned as
/// [`Outcome::Infeasible`], not as an error.
pub fn beat_baseline_experiment_with(
    f: &DenseMatrix,
    r: usize,
    baseline: Baseline,
    trials: usize,
    master_seed: u64,
    mode: Mode,
    exec: Execution,
) -> Result<BeatReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let approx = match baseline {
        Baseline::TruncatedSvd => truncated_svd(f, r)?,
        Baseline::ColumnSelect => column_select(f, r)?,
    };
    let epsilon = approximation_error(f, &approx)?;
    let budget = mode.statistic(epsilon);
    let spectrum = singular_values(f)?;

    let mut report = BeatReport {
        schema_version: SCHEMA_VERSION,
        outcome: Outcome::Infeasible,
        baseline,
        baseline_rank: r,
        randomized_rank: None,
        epsilon,
        error_budget: budget,
        mode,
        plan: infeasible_exact_plan(r, budget, mode),
        trials: None,
        verdict: Verdict::NotApplicable,
    };
    if budget == 0.0 {
        // an exact baseline leaves no strictly smaller error to reach
        report.plan.tail_energy = crate::planner::tail_energy(&spectrum, r);
        return Ok(report);
    }
    report.plan = plan(&spectrum, r, budget, mode)?;
    let Some(s) = report.plan.oversampling.filter(|_| report.plan.feasible) else {
        return Ok(report);
    };

    let mut mc = run_trials(
        f,
        r,
        s,
        trials,
        master_seed,
        mode,
        exec,
        report.plan.tail_energy,
    )?;
    mc.compare_to_epsilon(epsilon, budget);
    report.outcome = Outcome::Feasible;
    report.randomized_rank = Some(match mc.config.method {
        Method::ExactFallback => f.min_dim(),
        _ => r + s,
    });
    report.verdict = mc.verdict;
    report.trials = Some(mc);
    Ok(report)
}

fn infeasible_exact_plan(r: usize, budget: f64, mode: Mode) -> ApproximationPlan {
    ApproximationPlan {
        schema_version: SCHEMA_VERSION,
        target_rank: r,
        oversampling: None,
        tail_energy: 0.0,
        error_budget: budget,
        predicted_bound: None,
        mode,
        fallback: false,
        feasible: false,
        strictness_bumped: false,
        reason: Some("baseline error is zero; no strictly smaller error exists".into()),
    }
}
