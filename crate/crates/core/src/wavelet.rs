//! Truncated, dilated, `1/√a`-normalized real Morlet kernels.

use crate::error::{Error, Result};

/// Half-width of the canonical Morlet support in wavelet time units.
pub const CANONICAL_HALF_SUPPORT: f64 = 8.0;

/// Real Morlet mother wavelet `exp(-t²/2) · cos(5t)`.
#[inline]
pub fn morlet(t: f64) -> f64 {
    // cos is evaluated on |t| so that the function is bit-exactly even.
    let t = t.abs();
    (-0.5 * t * t).exp() * (5.0 * t).cos()
}

/// Kernel length that covers `t ∈ [-8, 8]` at dilation `scale`.
pub fn full_support_length(scale: f64) -> usize {
    (2.0 * CANONICAL_HALF_SUPPORT * scale).ceil() as usize + 1
}

/// Morlet taps sampled on the signal grid at one scale.
///
/// `taps[k] = morlet((k - center_index) / scale) / √scale`, with
/// `center_index = (length - 1) / 2` (integer division, so even lengths
/// lean left). The window is never resampled: at large scales a short
/// `length` covers only the core of the wavelet.
#[derive(Debug, Clone, PartialEq)]
pub struct MorletKernel {
    scale: f64,
    center_index: usize,
    taps: Vec<f64>,
}

impl MorletKernel {
    pub fn new(scale: f64, length: usize) -> Result<Self> {
        if !scale.is_finite() || scale < 1.0 {
            return Err(Error::InvalidKernel(format!(
                "scale {scale} must be finite and >= 1"
            )));
        }
        if length == 0 {
            return Err(Error::InvalidKernel("length must be >= 1".into()));
        }
        let center_index = (length - 1) / 2;
        let norm = 1.0 / scale.sqrt();
        let taps = (0..length)
            .map(|k| norm * morlet(tap_time(k, center_index, scale)))
            .collect();
        Ok(Self {
            scale,
            center_index,
            taps,
        })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn center_index(&self) -> usize {
        self.center_index
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    /// Wavelet-time coordinate of tap `k`.
    pub fn time_of(&self, k: usize) -> f64 {
        tap_time(k, self.center_index, self.scale)
    }
}

#[inline]
fn tap_time(k: usize, center: usize, scale: f64) -> f64 {
    (k as f64 - center as f64) / scale
}

/// Convenience wrapper for [`MorletKernel::new`].
pub fn build_kernel(scale: f64, length: usize) -> Result<MorletKernel> {
    MorletKernel::new(scale, length)
}

/// Writes `index,t,value` lines with 17 significant digits.
pub fn kernel_csv(kernel: &MorletKernel) -> String {
    let mut out = String::from("index,t,value\n");
    for (k, v) in kernel.taps().iter().enumerate() {
        out.push_str(&format!("{k},{:.16e},{:.16e}\n", kernel.time_of(k), v));
    }
    out
}
