//! Test-matrix generators and Monte Carlo experiments.

mod beat;
mod generators;
mod moment;
mod trials;

pub use beat::{
    beat_baseline_experiment, beat_baseline_experiment_with, Baseline, BeatReport, Outcome,
};
pub use generators::{
    gen_prescribed_spectrum, gen_signal_plus_noise, geometric_spectrum, polynomial_spectrum,
    GeneratorKind, GeneratorSpec,
};
pub use moment::{
    verify_gaussian_pinv_moment, verify_gaussian_pinv_moment_with, MomentEstimate, MOMENT_SLACK_SE,
};
pub use trials::{
    mean_and_standard_error, monte_carlo, monte_carlo_with, Execution, TrialConfig, TrialReport,
    Verdict, BOUND_SLACK_SE, ROUNDING_FLOOR,
};
