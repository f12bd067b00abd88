//! Strided Morlet CWT.
//!
//! For scale `a`, kernel taps `w` of length `L` with centre `c`, and hop `H`,
//! column `m` of the output row is
//!
//! ```text
//! y[m] = Σ_{k=0}^{L-1} x[m·H + k - c] · w[k]
//! ```
//!
//! with `x` zero outside `[0, N)`. Two backends compute this: a direct
//! strided dot product whose cost is `O(L · N / H)`, and an FFT linear
//! correlation followed by stride selection. [`cwt_reference`] is the literal
//! double loop, kept as ground truth.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::audio_io::AudioSignal;
use crate::error::{Error, Result};
use crate::wavelet::{full_support_length, MorletKernel};

/// Calibration constant of the backend cost model.
pub const FFT_COST_FACTOR: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Direct,
    Fft,
    /// Pick per row with [`choose_backend`].
    Auto,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Direct => "direct",
            Backend::Fft => "fft",
            Backend::Auto => "auto",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Backend::Direct),
            "fft" => Ok(Backend::Fft),
            "auto" => Ok(Backend::Auto),
            other => Err(Error::InvalidConfig(format!("unknown backend {other:?}"))),
        }
    }
}

/// How many taps each scale's kernel gets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelLength {
    /// The same `WL` at every scale.
    Fixed(usize),
    /// [`full_support_length`] of each scale; the unoptimized comparator.
    FullSupport,
}

impl KernelLength {
    pub fn for_scale(self, scale: f64) -> usize {
        match self {
            KernelLength::Fixed(len) => len,
            KernelLength::FullSupport => full_support_length(scale),
        }
    }
}

impl std::fmt::Display for KernelLength {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelLength::Fixed(len) => f.pad(&len.to_string()),
            KernelLength::FullSupport => f.pad("full"),
        }
    }
}

/// Scales, kernel length, hop and backend of one transform.
///
/// Signals are always zero-extended outside `[0, N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformConfig {
    pub scales: Vec<f64>,
    pub kernel_length: KernelLength,
    pub hop: usize,
    pub backend: Backend,
    /// Compute rows on the rayon pool. Output is bit-identical either way.
    pub parallel: bool,
}

impl TransformConfig {
    pub fn new(scales: Vec<f64>, wavelet_length: usize, hop: usize) -> Self {
        Self {
            scales,
            kernel_length: KernelLength::Fixed(wavelet_length),
            hop,
            backend: Backend::Auto,
            parallel: false,
        }
    }

    /// 128 integer scales 2..=129 with `WL = 64`, `H = 128`.
    pub fn optimized() -> Self {
        Self::new(integer_scales(2, 129), 64, 128)
    }

    /// Same scales, full-support kernels at every translation.
    pub fn baseline() -> Self {
        Self {
            kernel_length: KernelLength::FullSupport,
            ..Self::new(integer_scales(2, 129), 1, 1)
        }
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_kernel_length(mut self, kernel_length: KernelLength) -> Self {
        self.kernel_length = kernel_length;
        self
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.scales.is_empty() {
            return Err(Error::InvalidConfig("scale list is empty".into()));
        }
        if let Some(bad) = self.scales.iter().find(|s| !s.is_finite() || **s < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "scale {bad} must be finite and >= 1"
            )));
        }
        if self.scales.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "scales must be strictly increasing".into(),
            ));
        }
        if self.kernel_length == KernelLength::Fixed(0) {
            return Err(Error::InvalidConfig("wavelet length must be >= 1".into()));
        }
        if self.hop == 0 {
            return Err(Error::InvalidConfig("hop must be >= 1".into()));
        }
        Ok(())
    }
}

/// Integers `lo..=hi` as scales.
pub fn integer_scales(lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(f64::from).collect()
}

/// Number of output columns, `ceil(n / hop)`.
pub fn output_columns(n: usize, hop: usize) -> usize {
    n.div_ceil(hop)
}

/// Coefficient matrix, scale-major: row `s` is scale `scales[s]`, column `m`
/// is translation `m · hop`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scalogram {
    values: Vec<f64>,
    rows: usize,
    cols: usize,
    scales: Vec<f64>,
    hop: usize,
    source_length: usize,
    sample_rate_hz: u32,
}

impl Scalogram {
    /// Assembles a scalogram from row-major values, checking the shape
    /// against `scales`, `hop` and `source_length`.
    pub fn from_parts(
        values: Vec<f64>,
        scales: Vec<f64>,
        hop: usize,
        source_length: usize,
        sample_rate_hz: u32,
    ) -> Result<Self> {
        if hop == 0 {
            return Err(Error::InvalidConfig("hop must be >= 1".into()));
        }
        let rows = scales.len();
        let cols = output_columns(source_length, hop);
        if values.len() != rows * cols {
            return Err(Error::InvalidConfig(format!(
                "{} values do not fill a {rows}x{cols} matrix",
                values.len()
            )));
        }
        Ok(Self {
            values,
            rows,
            cols,
            scales,
            hop,
            source_length,
            sample_rate_hz,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn row(&self, s: usize) -> &[f64] {
        &self.values[s * self.cols..(s + 1) * self.cols]
    }

    pub fn get(&self, s: usize, m: usize) -> f64 {
        self.values[s * self.cols + m]
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    pub fn source_length(&self) -> usize {
        self.source_length
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    /// Largest absolute elementwise difference; `inf` on shape mismatch.
    pub fn max_abs_diff(&self, other: &Scalogram) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Cost model: direct when `WL · ceil(N/H) < 4 · (N+WL) · log2(N+WL)`.
pub fn choose_backend(n: usize, wavelet_length: usize, hop: usize) -> Backend {
    let direct_cost = wavelet_length as f64 * output_columns(n, hop) as f64;
    let span = (n + wavelet_length) as f64;
    let fft_cost = FFT_COST_FACTOR * span * span.log2();
    if direct_cost < fft_cost {
        Backend::Direct
    } else {
        Backend::Fft
    }
}

/// Strided CWT of an audio signal.
pub fn cwt_strided(signal: &AudioSignal, config: &TransformConfig) -> Result<Scalogram> {
    transform_samples(signal.samples(), signal.sample_rate_hz(), config)
}

/// Strided CWT of a raw sample slice. Samples need only be finite.
pub fn transform_samples(
    samples: &[f64],
    sample_rate_hz: u32,
    config: &TransformConfig,
) -> Result<Scalogram> {
    check_samples(samples)?;
    config.validate()?;
    let n = samples.len();

    let plans: Vec<(MorletKernel, Backend)> = config
        .scales
        .iter()
        .map(|&scale| {
            let kernel = MorletKernel::new(scale, config.kernel_length.for_scale(scale))?;
            let backend = match config.backend {
                Backend::Auto => choose_backend(n, kernel.len(), config.hop),
                fixed => fixed,
            };
            Ok((kernel, backend))
        })
        .collect::<Result<_>>()?;

    // One signal spectrum per FFT size, shared read-only by every row.
    let mut planner = FftPlanner::new();
    let mut spectra: BTreeMap<usize, SignalSpectrum> = BTreeMap::new();
    for (kernel, backend) in &plans {
        if *backend == Backend::Fft {
            let size = fft_size(n, kernel.len());
            spectra
                .entry(size)
                .or_insert_with(|| SignalSpectrum::new(samples, size, &mut planner));
        }
    }

    let hop = config.hop;
    let compute_row = |(kernel, backend): &(MorletKernel, Backend)| -> Vec<f64> {
        match backend {
            Backend::Fft => spectra[&fft_size(n, kernel.len())].correlate_strided(kernel, hop),
            _ => direct_row(samples, kernel, hop),
        }
    };
    let rows: Vec<Vec<f64>> = if config.parallel {
        plans.par_iter().map(compute_row).collect()
    } else {
        plans.iter().map(compute_row).collect()
    };

    Scalogram::from_parts(rows.concat(), config.scales.clone(), hop, n, sample_rate_hz)
}

/// Literal evaluation of the strided sum, one multiply-add at a time.
/// No performance contract.
pub fn cwt_reference(signal: &AudioSignal, config: &TransformConfig) -> Result<Scalogram> {
    reference_samples(signal.samples(), signal.sample_rate_hz(), config)
}

/// [`cwt_reference`] on a raw sample slice.
pub fn reference_samples(
    samples: &[f64],
    sample_rate_hz: u32,
    config: &TransformConfig,
) -> Result<Scalogram> {
    check_samples(samples)?;
    config.validate()?;
    let n = samples.len() as i64;
    let cols = output_columns(samples.len(), config.hop);
    let mut values = Vec::with_capacity(config.scales.len() * cols);
    for &scale in &config.scales {
        let kernel = MorletKernel::new(scale, config.kernel_length.for_scale(scale))?;
        let center = kernel.center_index() as i64;
        for m in 0..cols {
            let b = (m * config.hop) as i64;
            let mut acc = 0.0;
            for (k, &tap) in kernel.taps().iter().enumerate() {
                let j = b + k as i64 - center;
                if (0..n).contains(&j) {
                    acc += samples[j as usize] * tap;
                }
            }
            values.push(acc);
        }
    }
    Scalogram::from_parts(
        values,
        config.scales.clone(),
        config.hop,
        samples.len(),
        sample_rate_hz,
    )
}

/// One row via per-column dot products.
pub fn direct_strided(samples: &[f64], kernel: &MorletKernel, hop: usize) -> Result<Vec<f64>> {
    check_row_args(samples, hop)?;
    Ok(direct_row(samples, kernel, hop))
}

/// One row via FFT linear correlation, then stride selection.
pub fn fft_convolve_strided(
    samples: &[f64],
    kernel: &MorletKernel,
    hop: usize,
) -> Result<Vec<f64>> {
    check_row_args(samples, hop)?;
    let mut planner = FftPlanner::new();
    let spectrum =
        SignalSpectrum::new(samples, fft_size(samples.len(), kernel.len()), &mut planner);
    Ok(spectrum.correlate_strided(kernel, hop))
}

fn check_samples(samples: &[f64]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::InvalidSignal("signal has no samples".into()));
    }
    if samples.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidSignal(
            "signal contains non-finite samples".into(),
        ));
    }
    Ok(())
}

fn check_row_args(samples: &[f64], hop: usize) -> Result<()> {
    check_samples(samples)?;
    if hop == 0 {
        return Err(Error::InvalidConfig("hop must be >= 1".into()));
    }
    Ok(())
}

fn direct_row(samples: &[f64], kernel: &MorletKernel, hop: usize) -> Vec<f64> {
    let n = samples.len() as isize;
    let taps = kernel.taps();
    let len = taps.len() as isize;
    let center = kernel.center_index() as isize;
    (0..output_columns(samples.len(), hop))
        .map(|m| {
            let start = (m * hop) as isize - center;
            let k_lo = (-start).clamp(0, len);
            let k_hi = (n - start).clamp(k_lo, len);
            let x_lo = (start + k_lo) as usize;
            let x_hi = (start + k_hi) as usize;
            dot(&taps[k_lo as usize..k_hi as usize], &samples[x_lo..x_hi])
        })
        .collect()
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let a_chunks = a.chunks_exact(4);
    let b_chunks = b.chunks_exact(4);
    let tail: f64 = a_chunks
        .remainder()
        .iter()
        .zip(b_chunks.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (ca, cb) in a_chunks.zip(b_chunks) {
        for i in 0..4 {
            acc[i] += ca[i] * cb[i];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

fn fft_size(n: usize, kernel_len: usize) -> usize {
    (n + kernel_len - 1).next_power_of_two()
}

/// Zero-padded forward spectrum of the signal plus the plans of its size.
struct SignalSpectrum {
    n: usize,
    spectrum: Vec<Complex<f64>>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl SignalSpectrum {
    fn new(samples: &[f64], size: usize, planner: &mut FftPlanner<f64>) -> Self {
        let forward = planner.plan_fft_forward(size);
        let inverse = planner.plan_fft_inverse(size);
        let mut spectrum = vec![Complex::new(0.0, 0.0); size];
        for (dst, &x) in spectrum.iter_mut().zip(samples) {
            dst.re = x;
        }
        forward.process(&mut spectrum);
        Self {
            n: samples.len(),
            spectrum,
            forward,
            inverse,
        }
    }

    /// Convolves with the reversed taps; full-convolution index
    /// `b + (L - 1 - c)` holds the correlation at translation `b`.
    fn correlate_strided(&self, kernel: &MorletKernel, hop: usize) -> Vec<f64> {
        let size = self.spectrum.len();
        let taps = kernel.taps();
        let mut buf = vec![Complex::new(0.0, 0.0); size];
        for (dst, &tap) in buf.iter_mut().zip(taps.iter().rev()) {
            dst.re = tap;
        }
        self.forward.process(&mut buf);
        for (b, x) in buf.iter_mut().zip(&self.spectrum) {
            *b *= *x;
        }
        self.inverse.process(&mut buf);

        let offset = taps.len() - 1 - kernel.center_index();
        let norm = 1.0 / size as f64;
        (0..output_columns(self.n, hop))
            .map(|m| buf[m * hop + offset].re * norm)
            .collect()
    }
}
