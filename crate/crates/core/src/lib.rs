//! Strided continuous wavelet transform with a truncated Morlet kernel.
//!
//! The transform evaluates CWT coefficients only at translations that are
//! multiples of a hop size `H`, with each scale's kernel cut to `WL` taps.
//! The output is a compact `scales × ceil(N/H)` matrix that can be rendered
//! as a heatmap or exported losslessly.
//!
//! ```
//! use optcwt::{synth_sine, cwt_strided, TransformConfig};
//!
//! let signal = synth_sine(16_000, 440.0, 16_000, 0.5).unwrap();
//! let scalogram = cwt_strided(&signal, &TransformConfig::optimized()).unwrap();
//! assert_eq!(scalogram.shape(), (128, 125));
//! ```

pub mod audio_io;
pub mod bench;
pub mod cli;
mod colormap;
pub mod compat;
mod error;
pub mod render;
pub mod transform;
pub mod wavelet;

pub use audio_io::{decode_wav, read_wav, synth_impulse, synth_sine, write_wav, AudioSignal};
pub use bench::{grid_cost, run_speedup_bench, BenchReport};
pub use error::{Error, Result};
pub use render::{
    export_matrix, import_raw, render_png, to_magnitude, Colormap, HeatmapSpec, MatrixFormat,
};
pub use transform::{
    choose_backend, cwt_reference, cwt_strided, direct_strided, fft_convolve_strided, Backend,
    KernelLength, Scalogram, TransformConfig,
};
pub use wavelet::{build_kernel, full_support_length, morlet, MorletKernel};
