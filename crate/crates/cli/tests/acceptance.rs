//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use lowrank_core::baselines::truncated_svd;
use lowrank_core::dense::random::splitmix64;
use lowrank_core::dense::{gaussian_matrix, pseudoinverse, singular_values, thin_qr};
use lowrank_core::experiments::{
    beat_baseline_experiment, geometric_spectrum, monte_carlo, polynomial_spectrum,
    verify_gaussian_pinv_moment, Baseline, GeneratorSpec, Outcome, Verdict,
};
use lowrank_core::planner::{choose_oversampling, expected_error_bound, tail_energy, Mode};
use lowrank_core::rangefinder::approximation_error;
use lowrank_core::DenseMatrix;

struct Check {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Check {
    Check {
        pass,
        detail: detail.into(),
    }
}

/// Uniform draw in [0, 1) from a splitmix64 counter.
struct Uniform(u64);

impl Uniform {
    fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(1);
        (splitmix64(self.0) >> 11) as f64 / (1u64 << 53) as f64
    }

    fn below(&mut self, n: usize) -> usize {
        ((self.next() * n as f64) as usize).min(n - 1)
    }
}

// 1. Bound validation, squared-consistent mode.
fn bound_validation() -> Check {
    let geo = GeneratorSpec::prescribed(100, 100, geometric_spectrum(0.5, 20), 1)
        .generate()
        .unwrap();
    let rep = monte_carlo(&geo, 5, 6, 500, 2024, Mode::SquaredConsistent).unwrap();
    let slack = rep.bound + 3.0 * rep.std_error;
    let headline = rep.mean_squared_error <= slack;
    let mut detail = format!(
        "headline mean {:.4e} <= 2·τ5 + 3·SE = {:.4e}",
        rep.mean_squared_error, slack
    );
    if !headline {
        return check(false, detail);
    }

    let poly = GeneratorSpec::prescribed(100, 100, polynomial_spectrum(2.0, 100), 2)
        .generate()
        .unwrap();
    let mut failed = Vec::new();
    let mut cells = 0;
    for (name, f) in [("geometric", &geo), ("polynomial", &poly)] {
        for r in [2, 5, 10] {
            for s in [3, 6, 12] {
                let rep = monte_carlo(f, r, s, 500, 7000 + cells, Mode::SquaredConsistent).unwrap();
                cells += 1;
                if rep.verdict != Verdict::BoundSatisfied {
                    failed.push(format!("{name} r={r} s={s}"));
                }
            }
        }
    }
    detail.push_str(&format!(
        "; grid {}/{} cells bound-satisfied",
        cells as usize - failed.len(),
        cells
    ));
    if !failed.is_empty() {
        detail.push_str(&format!(" (failed: {})", failed.join(", ")));
    }
    check(failed.is_empty(), detail)
}

// 2. Moment identity E‖G⁺‖_F² = r/(s−1).
fn moment_identity() -> Check {
    let mut worst: (f64, usize, usize) = (0.0, 0, 0);
    let mut failed = Vec::new();
    for r in [1, 2, 5, 10] {
        for s in [2, 3, 6, 11] {
            let est = verify_gaussian_pinv_moment(r, s, 2000, 31 + (r * 100 + s) as u64).unwrap();
            let z = est.z_score.abs();
            if z > worst.0 {
                worst = (z, r, s);
            }
            if !(z <= 4.0) {
                failed.push(format!("(r={r}, s={s}) z={:.2}", est.z_score));
            }
        }
    }
    let mut detail = format!(
        "16 cells, worst |z| = {:.2} at r={} s={}",
        worst.0, worst.1, worst.2
    );
    if !failed.is_empty() {
        detail.push_str(&format!("; failed: {}", failed.join(", ")));
    }
    check(failed.is_empty(), detail)
}

// 3. Oversampling formula: strict, minimal, boundary bumps.
fn oversampling_formula() -> Check {
    let mut rng = Uniform(0xACCE_0003);
    let mut bad = Vec::new();
    for _ in 0..1000 {
        let r = 1 + rng.below(100);
        let tau = 10f64.powf(-6.0 + 9.0 * rng.next());
        // ε/τ − 1 spans [1e−6·(1+δ), 1e3]
        let excess = 10f64.powf(-6.0 + 9.0 * rng.next()) * (1.0 + 1e-9);
        let eps = tau * (1.0 + excess);
        if !(eps > tau * (1.0 + 1e-6)) {
            continue;
        }
        let s = choose_oversampling(r, tau, eps).unwrap().oversampling;
        let strict = (1.0 + r as f64 / (s as f64 - 1.0)) * tau < eps;
        let minimal = s - 1 < 2 || (1.0 + r as f64 / (s as f64 - 2.0)) * tau >= eps;
        if !(strict && minimal) {
            bad.push(format!("(r={r}, τ={tau:e}, ε={eps:e}) -> s={s}"));
        }
    }
    // exact-integer boundary: ε = τ(1 + r/k) puts the formula value on k + 1
    let mut boundary = 0;
    for (r, k, tau) in [
        (10, 2, 1.0),
        (2, 4, 1.0),
        (8, 8, 0.5),
        (3, 1, 4.0),
        (12, 4, 2.0),
        (5, 16, 0.25),
    ] {
        let eps = tau * (1.0 + r as f64 / k as f64);
        let choice = choose_oversampling(r, tau, eps).unwrap();
        boundary += 1;
        if choice.oversampling != k + 2 || !choice.strictness_bumped {
            bad.push(format!(
                "boundary r={r} k={k}: s={} bumped={}",
                choice.oversampling, choice.strictness_bumped
            ));
        }
        if expected_error_bound(r, k + 1, tau).unwrap() != eps {
            bad.push(format!("boundary r={r} k={k} not exact"));
        }
    }
    let mut detail = format!("1000 random triples and {boundary} integer boundary cases");
    if !bad.is_empty() {
        detail.push_str(&format!("; {} failures, first: {}", bad.len(), bad[0]));
    }
    check(bad.is_empty(), detail)
}

// 4. Beat a deterministic baseline on signal-plus-noise.
fn beat_baseline() -> Check {
    let f = GeneratorSpec::signal_plus_noise(100, 80, 5, 0.05, 7)
        .generate()
        .unwrap();
    let colsel = beat_baseline_experiment(
        &f,
        5,
        Baseline::ColumnSelect,
        300,
        1,
        Mode::SquaredConsistent,
    )
    .unwrap();
    let svd = beat_baseline_experiment(
        &f,
        5,
        Baseline::TruncatedSvd,
        300,
        1,
        Mode::SquaredConsistent,
    )
    .unwrap();
    let Some(trials) = colsel.trials.as_ref() else {
        return check(false, "column-select run produced no trials");
    };
    let eps2 = colsel.epsilon * colsel.epsilon;
    let feasible = colsel.outcome == Outcome::Feasible && colsel.plan.feasible;
    let beats = trials.mean_squared_error < eps2;
    let svd_infeasible = svd.outcome == Outcome::Infeasible;
    check(
        feasible && beats && svd_infeasible,
        format!(
            "colsel: s={:?} mean err² {:.4e} < ε² {:.4e} ({}); svd: {:?}",
            colsel.plan.oversampling,
            trials.mean_squared_error,
            eps2,
            if beats { "ok" } else { "not below" },
            svd.outcome
        ),
    )
}

// 5. Exact-rank recovery with s = 2.
fn exact_rank() -> Check {
    let mut worst = 0.0f64;
    for (k, r) in [1usize, 5, 10].into_iter().enumerate() {
        let f = gaussian_matrix(60, r, 500 + k as u64)
            .matmul(&gaussian_matrix(r, 40, 600 + k as u64))
            .unwrap();
        let rep = monte_carlo(&f, r, 2, 200, 77 + k as u64, Mode::SquaredConsistent).unwrap();
        let scale = f.frobenius_norm();
        worst = rep
            .per_trial_errors
            .iter()
            .fold(worst, |w, &e| w.max(e / scale));
    }
    check(
        worst <= 1e-8,
        format!("max error/‖F‖ = {worst:.2e} over 3×200 trials (limit 1e-8)"),
    )
}

fn fro(m: &DenseMatrix) -> f64 {
    m.frobenius_norm()
}

fn diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.sub(b).unwrap().frobenius_norm()
}

// 6. Kernel correctness on random matrices.
fn kernels() -> Check {
    let mut rng = Uniform(0xACCE_0006);
    let mut worst = [0.0f64; 5];
    for i in 0..100u64 {
        let rows = 1 + rng.below(50);
        let cols = 1 + rng.below(40);
        let m = gaussian_matrix(rows, cols, 9000 + i).scale(10f64.powf(-3.0 + 6.0 * rng.next()));
        let norm = fro(&m);

        let tall = if rows >= cols {
            m.clone()
        } else {
            m.transpose()
        };
        let (q, r) = thin_qr(&tall).unwrap();
        worst[0] = worst[0].max(diff(&q.matmul(&r).unwrap(), &tall) / norm);
        worst[1] = worst[1].max(q.orthonormality_defect());

        let spec = singular_values(&m).unwrap();
        worst[2] = worst[2].max((spec.total_energy() - norm * norm).abs() / (norm * norm));

        let p = pseudoinverse(&m).unwrap();
        let mp = m.matmul(&p).unwrap();
        let pm = p.matmul(&m).unwrap();
        let mpenrose = [
            diff(&mp.matmul(&m).unwrap(), &m) / norm,
            diff(&pm.matmul(&p).unwrap(), &p) / fro(&p),
            diff(&mp, &mp.transpose()),
            diff(&pm, &pm.transpose()),
        ];
        worst[3] = mpenrose.iter().fold(worst[3], |w, &x| w.max(x));

        if m.min_dim() > 1 {
            let k = 1 + rng.below(m.min_dim() - 1);
            let tau = tail_energy(&spec, k);
            let err = approximation_error(&m, &truncated_svd(&m, k).unwrap()).unwrap();
            worst[4] = worst[4].max((err * err - tau).abs() / tau);
        }
    }
    let limits = [1e-10, 1e-12, 1e-10, 1e-10, 1e-8];
    let pass = worst.iter().zip(limits).all(|(w, l)| *w <= l);
    check(
        pass,
        format!(
            "QR recon {:.1e}, QᵀQ {:.1e}, energy {:.1e}, Moore-Penrose {:.1e}, truncated SVD {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    )
}

fn lowrank(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_lowrank"))
        .args(args)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "lowrank {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

// 7. Determinism of `bench` output across runs and thread counts.
fn determinism() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let matrix = dir.path().join("f.mtx");
    let m = matrix.to_str().unwrap();
    lowrank(&[
        "gen",
        "spectrum",
        "--rows",
        "60",
        "--cols",
        "50",
        "--geometric",
        "0.7",
        "--count",
        "30",
        "--seed",
        "3",
        "--out",
        m,
    ]);
    assert!(Path::new(m).exists());
    let base = [
        "bench",
        "--rank",
        "4",
        "--oversample",
        "5",
        "--trials",
        "200",
        "--seed",
        "42",
        m,
    ];
    let a = lowrank(&base);
    let b = lowrank(&base);
    let one = lowrank(&[&base[..], &["--threads", "1"]].concat());
    let four = lowrank(&[&base[..], &["--threads", "4"]].concat());
    let same = a == b && a == one && a == four;
    check(
        same,
        format!(
            "{} bytes of JSON, default/default/1/4 threads identical: {same}",
            a.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 7] = [
        ("bound validation", bound_validation),
        ("moment identity", moment_identity),
        ("oversampling formula", oversampling_formula),
        ("beat baseline", beat_baseline),
        ("exact-rank recovery", exact_rank),
        ("kernel correctness", kernels),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let c = run();
        let status = if c.pass { "PASS" } else { "FAIL" };
        println!(
            "acceptance {} [{status}] {name}: {} ({:.1}s)",
            i + 1,
            c.detail,
            start.elapsed().as_secs_f64()
        );
        failures += usize::from(!c.pass);
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
