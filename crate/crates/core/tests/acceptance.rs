//! Exit-gate criteria. Runs as a plain binary (`harness = false`) and prints
//! one PASS/FAIL line per criterion; any failure makes the process exit 1.
//!
//!     cargo test -p optcwt --test acceptance

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use optcwt::bench::{extrapolate_hours, grid_cost, run_speedup_bench, seeded_signal};
use optcwt::transform::{integer_scales, reference_samples, transform_samples};
use optcwt::{build_kernel, full_support_length, write_wav, AudioSignal, Backend, TransformConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_TOL: f64 = 1e-9;
const MIN_SPEEDUP: f64 = 3.0;
const MIN_HOP_RATIO: f64 = 10.0;
const EXTRAPOLATION_TOL_HOURS: f64 = 0.2;
const PROPERTY_CASES: usize = 50;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("downsampling consistency", downsampling_consistency),
        ("shape claim", shape_claim),
        ("speedup claim", speedup_claim),
        ("hop monotonicity", hop_monotonicity),
        ("kernel properties", kernel_properties),
        ("determinism", determinism),
        ("linearity", linearity),
        ("shift covariance", shift_covariance),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] {name}: {} ({:.1} s)",
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
        if !outcome.passed {
            failures += 1;
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}

fn oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut runs = 0;
    for seed in 0..20u64 {
        let x = seeded_signal(1024, 1000 + seed);
        for wl in [16, 64] {
            for hop in [1, 7, 128] {
                let cfg = TransformConfig::new(integer_scales(2, 33), wl, hop);
                let reference = reference_samples(&x, 16_000, &cfg).unwrap();
                for backend in [Backend::Direct, Backend::Fft] {
                    let out =
                        transform_samples(&x, 16_000, &cfg.clone().with_backend(backend)).unwrap();
                    worst = worst.max(out.max_abs_diff(&reference));
                    runs += 1;
                }
            }
        }
    }
    Outcome::new(
        worst <= ORACLE_TOL,
        format!("{runs} runs, max |dev| = {worst:.3e} (tol {ORACLE_TOL:e})"),
    )
}

fn downsampling_consistency() -> Outcome {
    let x = seeded_signal(16_000, 7);
    let mut mismatches = 0usize;
    for backend in [Backend::Direct, Backend::Fft] {
        let cfg = |hop| TransformConfig::new(integer_scales(2, 129), 64, hop).with_backend(backend);
        let dense = transform_samples(&x, 16_000, &cfg(1)).unwrap();
        let sparse = transform_samples(&x, 16_000, &cfg(128)).unwrap();
        for s in 0..dense.rows() {
            let picked = dense.row(s).iter().step_by(128);
            mismatches += picked
                .zip(sparse.row(s))
                .filter(|(a, b)| a.to_bits() != b.to_bits())
                .count();
        }
    }
    Outcome::new(
        mismatches == 0,
        format!("{mismatches} non-identical cells across direct and fft"),
    )
}

fn shape_claim() -> Outcome {
    let x = seeded_signal(160_000, 3);
    let shape = transform_samples(&x, 16_000, &TransformConfig::optimized())
        .unwrap()
        .shape();

    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("ten_seconds.wav");
    let png = dir.path().join("ten_seconds.png");
    write_wav(&wav, &AudioSignal::new(x, 16_000, "noise").unwrap()).unwrap();
    let status = cli(&[
        "transform",
        path(&wav),
        "--out",
        path(&png),
        "--format",
        "png",
    ]);
    let image = status.then(|| png_size(&png));
    Outcome::new(
        shape == (128, 1250) && image == Some((512, 512)),
        format!("matrix {shape:?}, CLI PNG {image:?}"),
    )
}

fn speedup_claim() -> Outcome {
    let report = run_speedup_bench(160_000, 5, false).unwrap();
    let hours = extrapolate_hours(1.15);
    let arithmetic_ok = (hours - 17.4).abs() <= EXTRAPOLATION_TOL_HOURS;
    Outcome::new(
        report.speedup >= MIN_SPEEDUP && arithmetic_ok,
        format!(
            "baseline {:.3} s, optimized {:.4} s, speedup {:.1}x (min {MIN_SPEEDUP}); 1.15 s/file -> {hours:.2} h",
            report.baseline_median_s, report.optimized_median_s, report.speedup
        ),
    )
}

fn hop_monotonicity() -> Outcome {
    let cells = grid_cost(&[64], &[1, 128], 160_000, 3, Backend::Direct).unwrap();
    let (dense, sparse) = (cells[0].median_s, cells[1].median_s);
    let ratio = dense / sparse;
    Outcome::new(
        sparse < dense && ratio >= MIN_HOP_RATIO,
        format!("H=1 {dense:.3} s, H=128 {sparse:.4} s, ratio {ratio:.1} (min {MIN_HOP_RATIO})"),
    )
}

fn kernel_properties() -> Outcome {
    let mut problems = Vec::new();
    for scale in [1.0f64, 2.0, 17.0, 129.0] {
        let full = full_support_length(scale);
        for len in [1, 17, 65, 257, full] {
            let k = build_kernel(scale, len).unwrap();
            let reversed: Vec<f64> = k.taps().iter().rev().copied().collect();
            if k.taps() != &reversed[..] {
                problems.push(format!("asymmetric a={scale} L={len}"));
            }
            if k.taps()[k.center_index()] != 1.0 / scale.sqrt() {
                problems.push(format!("centre tap a={scale} L={len}"));
            }
        }
        let tail = build_kernel(scale, full).unwrap().taps()[0].abs();
        if tail >= 1e-13 / scale.sqrt() {
            problems.push(format!("tail {tail:e} at a={scale}"));
        }
    }
    let detail = if problems.is_empty() {
        "symmetry, centre tap and tail bound hold at a in {1, 2, 17, 129}".to_owned()
    } else {
        problems.join("; ")
    };
    Outcome::new(problems.is_empty(), detail)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("in.wav");
    write_wav(
        &wav,
        &AudioSignal::new(seeded_signal(48_000, 5), 16_000, "noise").unwrap(),
    )
    .unwrap();
    let mut differing = Vec::new();
    for format in ["png", "csv", "raw"] {
        let outputs: Vec<Vec<u8>> = (0..2)
            .map(|run| {
                let out = dir.path().join(format!("run{run}.{format}"));
                assert!(cli(&[
                    "transform",
                    path(&wav),
                    "--out",
                    path(&out),
                    "--format",
                    format
                ]));
                std::fs::read(&out).unwrap()
            })
            .collect();
        if outputs[0] != outputs[1] || outputs[0].is_empty() {
            differing.push(format);
        }
    }
    Outcome::new(
        differing.is_empty(),
        if differing.is_empty() {
            "png, csv and raw byte-identical across runs".to_owned()
        } else {
            format!("outputs differ: {differing:?}")
        },
    )
}

struct Case {
    n: usize,
    scales: Vec<f64>,
    wl: usize,
    hop: usize,
    backend: Backend,
}

fn random_case(rng: &mut ChaCha8Rng, min_n: usize) -> Case {
    let wl = [1, 16, 64, 65][rng.random_range(0..4)];
    let hop = [1, 7, 128][rng.random_range(0..3)];
    let first: u32 = rng.random_range(2..=30);
    let count: u32 = rng.random_range(1..=4);
    Case {
        n: rng.random_range(min_n.max(1)..=4096),
        scales: integer_scales(first, (first + count - 1).min(33)),
        wl,
        hop,
        backend: if rng.random_bool(0.5) {
            Backend::Direct
        } else {
            Backend::Fft
        },
    }
}

fn linearity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for i in 0..PROPERTY_CASES {
        let case = random_case(&mut rng, 1);
        let alpha: f64 = rng.random_range(-1.0..=1.0);
        let beta: f64 = rng.random_range(-1.0..=1.0);
        let x = seeded_signal(case.n, 3 * i as u64);
        let y = seeded_signal(case.n, 3 * i as u64 + 1);
        let mix: Vec<f64> = x
            .iter()
            .zip(&y)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        let cfg = TransformConfig::new(case.scales, case.wl, case.hop).with_backend(case.backend);
        let cx = transform_samples(&x, 1, &cfg).unwrap();
        let cy = transform_samples(&y, 1, &cfg).unwrap();
        let cm = transform_samples(&mix, 1, &cfg).unwrap();
        for ((m, a), b) in cm.values().iter().zip(cx.values()).zip(cy.values()) {
            worst = worst.max((m - (alpha * a + beta * b)).abs());
        }
    }
    Outcome::new(
        worst <= ORACLE_TOL,
        format!("{PROPERTY_CASES} cases, max |dev| = {worst:.3e}"),
    )
}

fn shift_covariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst = 0.0f64;
    let mut compared = 0usize;
    for i in 0..PROPERTY_CASES {
        let case = random_case(&mut rng, 0);
        let n = case.n.max(2 * (case.wl + case.hop) + 1);
        let (hop, wl) = (case.hop, case.wl);
        let x = seeded_signal(n, 500 + i as u64);
        let mut shifted = vec![0.0; n];
        shifted[hop..].copy_from_slice(&x[..n - hop]);
        let cfg = TransformConfig::new(case.scales, wl, hop).with_backend(case.backend);
        let cx = transform_samples(&x, 1, &cfg).unwrap();
        let cs = transform_samples(&shifted, 1, &cfg).unwrap();
        let center = (wl - 1) / 2;
        for s in 0..cx.rows() {
            for m in 0..cx.cols() - 1 {
                // Both windows interior: original in [0, n - hop), shifted in [hop, n).
                let b = m * hop;
                if b < center || b - center + wl > n - hop {
                    continue;
                }
                worst = worst.max((cs.get(s, m + 1) - cx.get(s, m)).abs());
                compared += 1;
            }
        }
    }
    Outcome::new(
        worst <= ORACLE_TOL && compared > 0,
        format!("{PROPERTY_CASES} cases, {compared} interior columns, max |dev| = {worst:.3e}"),
    )
}

fn cli(args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_optcwt"))
        .args(args)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn png_size(path: &Path) -> (u32, u32) {
    let decoder = png::Decoder::new(std::io::BufReader::new(std::fs::File::open(path).unwrap()));
    let reader = decoder.read_info().unwrap();
    (reader.info().width, reader.info().height)
}
