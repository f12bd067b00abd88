//! WAV ingestion and deterministic test-signal synthesis.
//!
//! Samples are kept as `f64` in `[-1, 1]`. PCM16 input is normalized by
//! full-scale 32768 so that `-32768` maps to `-1.0` exactly, and multi-channel
//! frames are averaged down to mono.

use std::f64::consts::PI;
use std::io::{self, Read, Seek};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

const PCM16_FULL_SCALE: f64 = 32768.0;

/// A real-valued, mono sample sequence with its sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioSignal {
    samples: Vec<f64>,
    sample_rate_hz: u32,
    source_label: String,
}

impl AudioSignal {
    /// Validates the amplitude range and builds a signal.
    pub fn new(
        samples: Vec<f64>,
        sample_rate_hz: u32,
        source_label: impl Into<String>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidSignal("signal has no samples".into()));
        }
        if sample_rate_hz == 0 {
            return Err(Error::InvalidSignal("sample rate must be positive".into()));
        }
        if let Some((i, s)) = samples
            .iter()
            .enumerate()
            .find(|(_, s)| !(-1.0..=1.0).contains(*s))
        {
            return Err(Error::InvalidSignal(format!(
                "sample {i} = {s} lies outside [-1, 1]"
            )));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
            source_label: source_label.into(),
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false for a constructed signal; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

/// Reads a PCM16 WAV file, averaging channels per frame.
pub fn read_wav(path: impl AsRef<Path>) -> Result<AudioSignal> {
    let path = path.as_ref();
    let reader = hound::WavReader::open(path).map_err(|e| map_hound_error(path, e))?;
    decode(reader, path)
}

/// Decodes WAV bytes from any seekable reader. `label` is used for error
/// messages and provenance.
pub fn decode_wav<R: Read + Seek>(reader: R, label: &str) -> Result<AudioSignal> {
    let path = PathBuf::from(label);
    let reader = hound::WavReader::new(reader).map_err(|e| map_hound_error(&path, e))?;
    decode(reader, &path)
}

fn decode<R: Read>(mut reader: hound::WavReader<R>, path: &Path) -> Result<AudioSignal> {
    let spec = reader.spec();
    if spec.sample_format != hound::SampleFormat::Int || spec.bits_per_sample != 16 {
        let kind = match spec.sample_format {
            hound::SampleFormat::Int => "integer",
            hound::SampleFormat::Float => "float",
        };
        return Err(Error::UnsupportedEncoding {
            path: path.to_path_buf(),
            detail: format!("{}-bit {kind} samples", spec.bits_per_sample),
        });
    }
    if spec.channels == 0 {
        return Err(Error::MalformedWav {
            path: path.to_path_buf(),
            reason: "zero channels".into(),
        });
    }

    let channels = usize::from(spec.channels);
    let raw = reader
        .samples::<i16>()
        .collect::<std::result::Result<Vec<i16>, _>>()
        .map_err(|e| map_hound_error(path, e))?;

    let samples: Vec<f64> = if channels == 1 {
        raw.iter()
            .map(|&s| f64::from(s) / PCM16_FULL_SCALE)
            .collect()
    } else {
        raw.chunks_exact(channels)
            .map(|frame| {
                let sum: i32 = frame.iter().map(|&s| i32::from(s)).sum();
                f64::from(sum) / channels as f64 / PCM16_FULL_SCALE
            })
            .collect()
    };
    if samples.is_empty() {
        return Err(Error::InvalidSignal(format!(
            "{} contains no sample frames",
            path.display()
        )));
    }
    AudioSignal::new(samples, spec.sample_rate, path.display().to_string())
}

fn map_hound_error(path: &Path, err: hound::Error) -> Error {
    let path = path.to_path_buf();
    match err {
        hound::Error::IoError(e) if e.kind() == io::ErrorKind::NotFound => Error::MissingFile(path),
        hound::Error::IoError(e) if e.kind() == io::ErrorKind::UnexpectedEof => {
            Error::MalformedWav {
                path,
                reason: "unexpected end of file".into(),
            }
        }
        hound::Error::IoError(source) => Error::Io { path, source },
        hound::Error::FormatError(reason) => Error::MalformedWav {
            path,
            reason: reason.into(),
        },
        hound::Error::Unsupported => Error::UnsupportedEncoding {
            path,
            detail: "non-PCM or extended format".into(),
        },
        other => Error::MalformedWav {
            path,
            reason: other.to_string(),
        },
    }
}

/// Writes a mono PCM16 WAV. Samples are scaled by 32768, rounded and
/// clamped to the int16 range.
pub fn write_wav(path: impl AsRef<Path>, signal: &AudioSignal) -> Result<()> {
    let path = path.as_ref();
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: signal.sample_rate_hz(),
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let to_io = |e: hound::Error| match e {
        hound::Error::IoError(source) => Error::io(path, source),
        other => Error::io(path, io::Error::other(other.to_string())),
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(to_io)?;
    for &s in signal.samples() {
        writer.write_sample(encode_pcm16(s)).map_err(to_io)?;
    }
    writer.finalize().map_err(to_io)
}

pub(crate) fn encode_pcm16(sample: f64) -> i16 {
    (sample * PCM16_FULL_SCALE)
        .round()
        .clamp(f64::from(i16::MIN), f64::from(i16::MAX)) as i16
}

/// Unit impulse at `position`.
pub fn synth_impulse(length: usize, position: usize, sample_rate_hz: u32) -> Result<AudioSignal> {
    if position >= length {
        return Err(Error::PositionOutOfRange { position, length });
    }
    let mut samples = vec![0.0; length];
    samples[position] = 1.0;
    AudioSignal::new(samples, sample_rate_hz, format!("impulse@{position}"))
}

/// `amplitude * sin(2π f n / fs)` for `n` in `0..length`.
pub fn synth_sine(
    length: usize,
    freq_hz: f64,
    sample_rate_hz: u32,
    amplitude: f64,
) -> Result<AudioSignal> {
    if sample_rate_hz == 0 {
        return Err(Error::InvalidSignal("sample rate must be positive".into()));
    }
    if freq_hz.is_nan() || freq_hz <= 0.0 || freq_hz >= f64::from(sample_rate_hz) / 2.0 {
        return Err(Error::AboveNyquist {
            freq_hz,
            sample_rate_hz,
        });
    }
    if !(amplitude > 0.0 && amplitude <= 1.0) {
        return Err(Error::InvalidSignal(format!(
            "amplitude {amplitude} outside (0, 1]"
        )));
    }
    let step = 2.0 * PI * freq_hz / f64::from(sample_rate_hz);
    let samples = (0..length)
        .map(|n| amplitude * (step * n as f64).sin())
        .collect();
    AudioSignal::new(samples, sample_rate_hz, format!("sine@{freq_hz}Hz"))
}
