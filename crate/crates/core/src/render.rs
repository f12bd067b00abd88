//! Heatmap rendering and lossless matrix export.
//!
//! Heatmaps use linear magnitude: `|v|`, then min-max normalization over the
//! whole matrix. Row 0 (smallest scale) is drawn at the top.
//!
//! The RAW layout (all little-endian):
//!
//! ```text
//! "OCWT" | version u32 = 1 | rows u32 | cols u32 | hop u32
//!        | source_length u64 | sample_rate u32
//!        | rows × f32 scales | rows·cols × f64 values (row-major)
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::colormap::VIRIDIS;
use crate::error::{Error, Result};
use crate::transform::Scalogram;

pub const RAW_MAGIC: &[u8; 4] = b"OCWT";
pub const RAW_VERSION: u32 = 1;
pub const RAW_HEADER_LEN: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Colormap {
    Grayscale,
    Viridis,
}

impl Colormap {
    pub fn table(self) -> [[u8; 3]; 256] {
        match self {
            Colormap::Grayscale => std::array::from_fn(|i| [i as u8; 3]),
            Colormap::Viridis => VIRIDIS,
        }
    }
}

impl std::str::FromStr for Colormap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gray" | "grayscale" => Ok(Colormap::Grayscale),
            "viridis" => Ok(Colormap::Viridis),
            other => Err(Error::InvalidImage(format!("unknown colormap {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeatmapSpec {
    pub width: u32,
    pub height: u32,
    pub colormap: Colormap,
}

impl Default for HeatmapSpec {
    fn default() -> Self {
        Self {
            width: 512,
            height: 512,
            colormap: Colormap::Viridis,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    Raw,
}

/// Row-major `|v|` min-max normalized to `[0, 1]`. A constant matrix maps
/// to all zeros.
pub fn to_magnitude(scalogram: &Scalogram) -> Vec<f64> {
    normalize_magnitude(scalogram.values())
}

fn normalize_magnitude(values: &[f64]) -> Vec<f64> {
    let (lo, hi) = values
        .iter()
        .map(|v| v.abs())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if hi <= lo {
        return vec![0.0; values.len()];
    }
    let range = hi - lo;
    values.iter().map(|v| (v.abs() - lo) / range).collect()
}

/// Colormap indices of the resized heatmap, `height` rows of `width`.
pub fn heatmap_indices(scalogram: &Scalogram, width: u32, height: u32) -> Result<Vec<u8>> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidImage(format!(
            "zero-sized image {width}x{height}"
        )));
    }
    if scalogram.values().is_empty() {
        return Err(Error::InvalidImage("scalogram has no coefficients".into()));
    }
    let magnitude = to_magnitude(scalogram);
    let (rows, cols) = scalogram.shape();
    let ys: Vec<Sample> = (0..height).map(|p| Sample::new(p, height, rows)).collect();
    let xs: Vec<Sample> = (0..width).map(|p| Sample::new(p, width, cols)).collect();

    let mut out = Vec::with_capacity(width as usize * height as usize);
    for y in &ys {
        let top = &magnitude[y.lo * cols..(y.lo + 1) * cols];
        let bottom = &magnitude[y.hi * cols..(y.hi + 1) * cols];
        for x in &xs {
            let upper = lerp(top[x.lo], top[x.hi], x.frac);
            let lower = lerp(bottom[x.lo], bottom[x.hi], x.frac);
            let v = lerp(upper, lower, y.frac);
            out.push((v * 255.0).round().clamp(0.0, 255.0) as u8);
        }
    }
    Ok(out)
}

/// Bilinear source coordinate for one output pixel, pixel-centre aligned
/// and clamped to the matrix edges.
struct Sample {
    lo: usize,
    hi: usize,
    frac: f64,
}

impl Sample {
    fn new(pixel: u32, pixels: u32, cells: usize) -> Self {
        let pos = (f64::from(pixel) + 0.5) * cells as f64 / f64::from(pixels) - 0.5;
        let pos = pos.clamp(0.0, (cells - 1) as f64);
        let lo = pos.floor() as usize;
        Self {
            lo,
            hi: (lo + 1).min(cells - 1),
            frac: pos - lo as f64,
        }
    }
}

#[inline]
fn lerp(a: f64, b: f64, t: f64) -> f64 {
    if t == 0.0 {
        a
    } else {
        a + (b - a) * t
    }
}

/// Packed 8-bit RGB pixels of the heatmap.
pub fn render_rgb(scalogram: &Scalogram, spec: &HeatmapSpec) -> Result<Vec<u8>> {
    let table = spec.colormap.table();
    Ok(heatmap_indices(scalogram, spec.width, spec.height)?
        .into_iter()
        .flat_map(|i| table[usize::from(i)])
        .collect())
}

/// Encodes the heatmap as an 8-bit RGB PNG with fixed encoder settings.
pub fn render_png(scalogram: &Scalogram, spec: &HeatmapSpec) -> Result<Vec<u8>> {
    let pixels = render_rgb(scalogram, spec)?;
    let mut bytes = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut bytes, spec.width, spec.height);
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        encoder.set_compression(png::Compression::Balanced);
        encoder.set_filter(png::Filter::Sub);
        let mut writer = encoder.write_header()?;
        writer.write_image_data(&pixels)?;
        writer.finish()?;
    }
    Ok(bytes)
}

/// CSV text: a `# scales=… hop=… n=… rate=…` header, then one line per scale.
pub fn matrix_csv(scalogram: &Scalogram) -> String {
    let scales: Vec<String> = scalogram.scales().iter().map(|s| s.to_string()).collect();
    let mut out = format!(
        "# scales={} hop={} n={} rate={}\n",
        scales.join(","),
        scalogram.hop(),
        scalogram.source_length(),
        scalogram.sample_rate_hz()
    );
    for s in 0..scalogram.rows() {
        let line: Vec<String> = scalogram
            .row(s)
            .iter()
            .map(|v| format!("{v:.16e}"))
            .collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn raw_bytes(scalogram: &Scalogram) -> Result<Vec<u8>> {
    let narrow = |what: &str, v: usize| {
        u32::try_from(v).map_err(|_| Error::MalformedRaw(format!("{what} {v} exceeds u32")))
    };
    let (rows, cols) = scalogram.shape();
    let mut out = Vec::with_capacity(RAW_HEADER_LEN + 4 * rows + 8 * rows * cols);
    out.extend_from_slice(RAW_MAGIC);
    out.extend_from_slice(&RAW_VERSION.to_le_bytes());
    out.extend_from_slice(&narrow("rows", rows)?.to_le_bytes());
    out.extend_from_slice(&narrow("cols", cols)?.to_le_bytes());
    out.extend_from_slice(&narrow("hop", scalogram.hop())?.to_le_bytes());
    out.extend_from_slice(&(scalogram.source_length() as u64).to_le_bytes());
    out.extend_from_slice(&scalogram.sample_rate_hz().to_le_bytes());
    for &s in scalogram.scales() {
        out.extend_from_slice(&(s as f32).to_le_bytes());
    }
    for &v in scalogram.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn parse_raw(bytes: &[u8]) -> Result<Scalogram> {
    if bytes.len() < RAW_HEADER_LEN {
        return Err(Error::MalformedRaw(format!(
            "{} bytes is shorter than the header",
            bytes.len()
        )));
    }
    if &bytes[..4] != RAW_MAGIC {
        return Err(Error::MalformedRaw("bad magic".into()));
    }
    let u32_at = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
    let version = u32_at(4);
    if version != RAW_VERSION {
        return Err(Error::MalformedRaw(format!(
            "unsupported version {version}"
        )));
    }
    let rows = u32_at(8) as usize;
    let cols = u32_at(12) as usize;
    let hop = u32_at(16) as usize;
    let source_length = u64::from_le_bytes(bytes[20..28].try_into().unwrap()) as usize;
    let sample_rate = u32_at(28);

    let expected = RAW_HEADER_LEN + 4 * rows + 8 * rows * cols;
    if bytes.len() != expected {
        return Err(Error::MalformedRaw(format!(
            "expected {expected} bytes for {rows}x{cols}, found {}",
            bytes.len()
        )));
    }
    let (scale_bytes, value_bytes) = bytes[RAW_HEADER_LEN..].split_at(4 * rows);
    let scales = scale_bytes
        .chunks_exact(4)
        .map(|c| f64::from(f32::from_le_bytes(c.try_into().unwrap())))
        .collect();
    let values = value_bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let scalogram = Scalogram::from_parts(values, scales, hop, source_length, sample_rate)
        .map_err(|e| Error::MalformedRaw(e.to_string()))?;
    if scalogram.cols() != cols {
        return Err(Error::MalformedRaw(format!(
            "cols {cols} inconsistent with n={source_length}, hop={hop}"
        )));
    }
    Ok(scalogram)
}

pub fn export_matrix(
    scalogram: &Scalogram,
    path: impl AsRef<Path>,
    format: MatrixFormat,
) -> Result<()> {
    let bytes = match format {
        MatrixFormat::Csv => matrix_csv(scalogram).into_bytes(),
        MatrixFormat::Raw => raw_bytes(scalogram)?,
    };
    write_file(path.as_ref(), &bytes)
}

pub fn import_raw(path: impl AsRef<Path>) -> Result<Scalogram> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_raw(&bytes)
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(bytes).map_err(|e| Error::io(path, e))
}
