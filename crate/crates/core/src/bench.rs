//! Wall-clock timing of transform configurations.
//!
//! Only the transform call sits inside the timed region. Inputs are a seeded
//! uniform signal in `[-1, 1]`, so timings do not depend on any dataset.

use std::hint::black_box;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::transform::{
    integer_scales, output_columns, transform_samples, Backend, KernelLength, TransformConfig,
};

pub const BENCH_SEED: u64 = 42;
pub const DEFAULT_SIGNAL_LENGTH: usize = 160_000;
/// Files in the reference machine-sound corpus, used for extrapolation.
pub const DATASET_FILE_COUNT: f64 = 54_507.0;
pub const MIN_REPETITIONS: usize = 3;

const BENCH_SAMPLE_RATE: u32 = 16_000;

/// Uniform samples in `[-1, 1]` from a ChaCha8 stream seeded with `seed`.
pub fn seeded_signal(length: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..length).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

/// Hours to process the whole corpus at `per_file_s` seconds per file.
pub fn extrapolate_hours(per_file_s: f64) -> f64 {
    per_file_s * DATASET_FILE_COUNT / 3600.0
}

pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty slice");
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchEntry {
    pub name: String,
    pub kernel_length: KernelLength,
    pub hop: usize,
    pub backend: Backend,
    pub parallel: bool,
    pub run_seconds: Vec<f64>,
    pub median_s: f64,
}

impl BenchEntry {
    pub fn repetitions(&self) -> usize {
        self.run_seconds.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub signal_length: usize,
    pub entries: Vec<BenchEntry>,
    pub baseline_median_s: f64,
    pub optimized_median_s: f64,
    pub speedup: f64,
    pub baseline_extrapolation_hours: f64,
    pub optimized_extrapolation_hours: f64,
}

/// Times `config` on `samples` `repetitions` times.
pub fn time_config(
    name: &str,
    samples: &[f64],
    config: &TransformConfig,
    repetitions: usize,
) -> Result<BenchEntry> {
    check_repetitions(repetitions)?;
    let mut run_seconds = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        let start = Instant::now();
        let out = transform_samples(samples, BENCH_SAMPLE_RATE, config)?;
        run_seconds.push(start.elapsed().as_secs_f64());
        black_box(out);
    }
    Ok(BenchEntry {
        name: name.to_owned(),
        kernel_length: config.kernel_length,
        hop: config.hop,
        backend: config.backend,
        parallel: config.parallel,
        median_s: median(&run_seconds),
        run_seconds,
    })
}

/// Baseline (full-support kernels, hop 1) against the optimized
/// `WL = 64, H = 128` configuration. With `parallel`, both are timed a second
/// time with rows on the thread pool; the speedup always compares the
/// single-threaded runs.
pub fn run_speedup_bench(
    signal_length: usize,
    repetitions: usize,
    parallel: bool,
) -> Result<BenchReport> {
    check_repetitions(repetitions)?;
    let samples = seeded_signal(signal_length, BENCH_SEED);
    let baseline = TransformConfig::baseline();
    let optimized = TransformConfig::optimized();

    let probe = transform_samples(&samples, BENCH_SAMPLE_RATE, &optimized)?;
    let want = (
        optimized.scales.len(),
        output_columns(signal_length, optimized.hop),
    );
    if probe.shape() != want {
        return Err(Error::InvalidConfig(format!(
            "optimized output shape {:?}, expected {want:?}",
            probe.shape()
        )));
    }
    drop(probe);

    let mut entries = vec![
        time_config("baseline", &samples, &baseline, repetitions)?,
        time_config("optimized", &samples, &optimized, repetitions)?,
    ];
    if parallel {
        entries.push(time_config(
            "baseline_parallel",
            &samples,
            &baseline.clone().with_parallel(true),
            repetitions,
        )?);
        entries.push(time_config(
            "optimized_parallel",
            &samples,
            &optimized.clone().with_parallel(true),
            repetitions,
        )?);
    }

    let baseline_median_s = entries[0].median_s;
    let optimized_median_s = entries[1].median_s;
    Ok(BenchReport {
        signal_length,
        baseline_median_s,
        optimized_median_s,
        speedup: baseline_median_s / optimized_median_s,
        baseline_extrapolation_hours: extrapolate_hours(baseline_median_s),
        optimized_extrapolation_hours: extrapolate_hours(optimized_median_s),
        entries,
    })
}

/// `name,WL,H,backend,median_s,speedup_vs_baseline`
pub fn bench_csv(report: &BenchReport) -> String {
    let mut out = String::from("name,WL,H,backend,median_s,speedup_vs_baseline\n");
    for e in &report.entries {
        out.push_str(&format!(
            "{},{},{},{},{:.9},{:.6}\n",
            e.name,
            e.kernel_length,
            e.hop,
            e.backend.name(),
            e.median_s,
            report.baseline_median_s / e.median_s
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub wavelet_length: usize,
    pub hop: usize,
    pub median_s: f64,
}

/// Median transform time for every `(WL, H)` pair, scales 2..=129, on the
/// seeded signal.
pub fn grid_cost(
    wl_values: &[usize],
    hop_values: &[usize],
    signal_length: usize,
    repetitions: usize,
    backend: Backend,
) -> Result<Vec<GridCell>> {
    if wl_values.is_empty() || hop_values.is_empty() {
        return Err(Error::InvalidConfig(
            "grid needs at least one WL and one H".into(),
        ));
    }
    check_repetitions(repetitions)?;
    let samples = seeded_signal(signal_length, BENCH_SEED);
    let mut cells = Vec::with_capacity(wl_values.len() * hop_values.len());
    for &wl in wl_values {
        for &hop in hop_values {
            let config =
                TransformConfig::new(integer_scales(2, 129), wl, hop).with_backend(backend);
            let entry = time_config("grid", &samples, &config, repetitions)?;
            cells.push(GridCell {
                wavelet_length: wl,
                hop,
                median_s: entry.median_s,
            });
        }
    }
    Ok(cells)
}

/// `WL,H,median_s`
pub fn grid_csv(cells: &[GridCell]) -> String {
    let mut out = String::from("WL,H,median_s\n");
    for c in cells {
        out.push_str(&format!(
            "{},{},{:.9}\n",
            c.wavelet_length, c.hop, c.median_s
        ));
    }
    out
}

fn check_repetitions(repetitions: usize) -> Result<()> {
    if repetitions < MIN_REPETITIONS {
        return Err(Error::InvalidConfig(format!(
            "repetitions must be >= {MIN_REPETITIONS}, got {repetitions}"
        )));
    }
    Ok(())
}
