//! Entry point shaped like the familiar `cwt(data, scales, wavelet)` call,
//! extended with kernel length and hop. Native-extension wrappers delegate
//! here so that they share the exact arithmetic of the CLI.

use crate::error::{Error, Result};
use crate::transform::{transform_samples, TransformConfig};

/// The only wavelet name accepted.
pub const MORLET_NAME: &str = "morl";

/// Nominal rate attached to rate-less array input.
const NOMINAL_RATE_HZ: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct BindingResult {
    /// Row-major, `scales_out.len()` rows of `cols` values.
    pub coefficients: Vec<f64>,
    pub rows: usize,
    pub cols: usize,
    pub scales_out: Vec<f64>,
}

/// Strided Morlet CWT of `data` with automatic backend selection.
pub fn cwt(
    data: &[f64],
    scales: &[f64],
    wavelet: &str,
    wavelet_length: usize,
    hop: usize,
) -> Result<BindingResult> {
    if wavelet != MORLET_NAME {
        return Err(Error::UnsupportedWavelet(wavelet.to_owned()));
    }
    let config = TransformConfig::new(scales.to_vec(), wavelet_length, hop);
    let out = transform_samples(data, NOMINAL_RATE_HZ, &config)?;
    let (rows, cols) = out.shape();
    Ok(BindingResult {
        scales_out: out.scales().to_vec(),
        coefficients: out.into_values(),
        rows,
        cols,
    })
}
