use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lowrank_core::dense::singular_values;
use lowrank_core::experiments::{
    beat_baseline_experiment, geometric_spectrum, monte_carlo, polynomial_spectrum,
    verify_gaussian_pinv_moment, Baseline, GeneratorSpec, Outcome,
};
use lowrank_core::io::{parse_spectrum_json, read_matrix, spectrum_to_json, write_matrix};
use lowrank_core::planner::{plan, Mode};
use lowrank_core::rangefinder::{approximation_error, factorize};
use lowrank_core::{DenseMatrix, SingularSpectrum, SCHEMA_VERSION};

const EXIT_INFEASIBLE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "lowrank",
    version,
    about = "Randomized low-rank matrix approximation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the singular values of a matrix as JSON.
    Spectrum { matrix: PathBuf },
    /// Choose the oversampling for an error budget.
    Plan {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::SquaredConsistent)]
        mode: ModeArg,
        /// Matrix file (.mtx/.csv) or spectrum file (.json).
        input: PathBuf,
    },
    /// Compute H and T and write them as Matrix Market files plus a JSON sidecar.
    Approx {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        oversample: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out_prefix: PathBuf,
        matrix: PathBuf,
    },
    /// Monte Carlo check of the expected-error bound.
    Bench {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        oversample: usize,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::SquaredConsistent)]
        mode: ModeArg,
        #[command(flatten)]
        threads: Threads,
        matrix: PathBuf,
    },
    /// Plan against a deterministic baseline's error and test the randomized factorization.
    Beat {
        #[arg(long)]
        rank: usize,
        #[arg(long, value_enum)]
        baseline: BaselineArg,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::SquaredConsistent)]
        mode: ModeArg,
        #[command(flatten)]
        threads: Threads,
        matrix: PathBuf,
    },
    /// Generate a test matrix.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Monte Carlo estimate of E‖G⁺‖_F² for an r × (r+s) Gaussian G.
    Moment {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        threads: Threads,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// U diag(σ) Vᵀ with random orthonormal factors.
    Spectrum {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        /// Explicit comma-separated singular values.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["geometric", "polynomial"])]
        values: Option<Vec<f64>>,
        /// σ_i = ratio^i.
        #[arg(long, requires = "count")]
        geometric: Option<f64>,
        /// σ_i = i^(-power).
        #[arg(long, requires = "count", conflicts_with = "geometric")]
        polynomial: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank-r signal with unit singular values plus Gaussian noise.
    SignalNoise {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        noise: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Threads {
    /// Worker threads for trials (default: all cores). Output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

impl Threads {
    fn run<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.threads {
            if n == 0 {
                bail!("--threads must be at least 1");
            }
            builder = builder.num_threads(n);
        }
        Ok(builder.build()?.install(job))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    PaperLiteral,
    SquaredConsistent,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::PaperLiteral => Mode::PaperLiteral,
            ModeArg::SquaredConsistent => Mode::SquaredConsistent,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BaselineArg {
    Svd,
    Colsel,
}

impl From<BaselineArg> for Baseline {
    fn from(b: BaselineArg) -> Self {
        match b {
            BaselineArg::Svd => Baseline::TruncatedSvd,
            BaselineArg::Colsel => Baseline::ColumnSelect,
        }
    }
}

#[derive(Serialize)]
struct ApproxSummary {
    schema_version: u32,
    h: PathBuf,
    t: PathBuf,
    sidecar: PathBuf,
    method: &'static str,
    width: usize,
    error: f64,
}

#[derive(Serialize)]
struct GenSummary<'a> {
    schema_version: u32,
    out: &'a Path,
    generator: &'a GeneratorSpec,
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn load_matrix(path: &Path) -> Result<DenseMatrix> {
    read_matrix(path).with_context(|| format!("reading matrix {}", path.display()))
}

fn load_spectrum(path: &Path) -> Result<SingularSpectrum> {
    let is_json = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return parse_spectrum_json(&text)
            .with_context(|| format!("parsing spectrum {}", path.display()));
    }
    Ok(singular_values(&load_matrix(path)?)?)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Spectrum { matrix } => {
            let spec = singular_values(&load_matrix(&matrix)?)?;
            println!("{}", spectrum_to_json(&spec)?);
        }
        Command::Plan {
            rank,
            epsilon,
            mode,
            input,
        } => {
            let spec = load_spectrum(&input)?;
            let p = plan(&spec, rank, epsilon, mode.into())?;
            print_json(&p)?;
            if !p.feasible {
                return Ok(ExitCode::from(EXIT_INFEASIBLE));
            }
        }
        Command::Approx {
            rank,
            oversample,
            seed,
            out_prefix,
            matrix,
        } => {
            let f = load_matrix(&matrix)?;
            let approx = factorize(&f, rank, oversample, seed)?;
            let paths = approx.save(&out_prefix)?;
            print_json(&ApproxSummary {
                schema_version: SCHEMA_VERSION,
                h: paths.h,
                t: paths.t,
                sidecar: paths.sidecar,
                method: approx.method().tag(),
                width: approx.width(),
                error: approximation_error(&f, &approx)?,
            })?;
        }
        Command::Bench {
            rank,
            oversample,
            trials,
            seed,
            mode,
            threads,
            matrix,
        } => {
            let f = load_matrix(&matrix)?;
            let report =
                threads.run(|| monte_carlo(&f, rank, oversample, trials, seed, mode.into()))??;
            print_json(&report)?;
        }
        Command::Beat {
            rank,
            baseline,
            trials,
            seed,
            mode,
            threads,
            matrix,
        } => {
            let f = load_matrix(&matrix)?;
            let report = threads.run(|| {
                beat_baseline_experiment(&f, rank, baseline.into(), trials, seed, mode.into())
            })??;
            print_json(&report)?;
            if report.outcome == Outcome::Infeasible {
                return Ok(ExitCode::from(EXIT_INFEASIBLE));
            }
        }
        Command::Gen { kind } => {
            let (spec, out) = match kind {
                GenKind::Spectrum {
                    rows,
                    cols,
                    values,
                    geometric,
                    polynomial,
                    count,
                    seed,
                    out,
                } => {
                    let values = match (values, geometric, polynomial, count) {
                        (Some(v), None, None, _) => v,
                        (None, Some(ratio), None, Some(n)) => geometric_spectrum(ratio, n),
                        (None, None, Some(power), Some(n)) => polynomial_spectrum(power, n),
                        _ => bail!("give exactly one of --values, --geometric/--count, --polynomial/--count"),
                    };
                    (GeneratorSpec::prescribed(rows, cols, values, seed), out)
                }
                GenKind::SignalNoise {
                    rows,
                    cols,
                    rank,
                    noise,
                    seed,
                    out,
                } => (
                    GeneratorSpec::signal_plus_noise(rows, cols, rank, noise, seed),
                    out,
                ),
            };
            let m = spec.generate()?;
            write_matrix(&out, &m).with_context(|| format!("writing {}", out.display()))?;
            print_json(&GenSummary {
                schema_version: SCHEMA_VERSION,
                out: &out,
                generator: &spec,
            })?;
        }
        Command::Moment {
            r,
            s,
            trials,
            seed,
            threads,
        } => {
            let est = threads.run(|| verify_gaussian_pinv_moment(r, s, trials, seed))??;
            print_json(&est)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // usage errors exit 1; exit 2 is reserved for infeasible plans
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
