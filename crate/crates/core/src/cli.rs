//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O or data error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::audio_io::read_wav;
use crate::bench::{self, DEFAULT_SIGNAL_LENGTH};
use crate::error::Error;
use crate::render::{self, Colormap, HeatmapSpec, MatrixFormat};
use crate::transform::{cwt_strided, integer_scales, Backend, TransformConfig};
use crate::wavelet::{build_kernel, kernel_csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "optcwt", version, about = "Strided Morlet CWT scalograms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transform a PCM16 WAV file into a heatmap or coefficient matrix.
    Transform(TransformArgs),
    /// Dump the taps of one kernel as CSV.
    Kernel(KernelArgs),
    /// Time the baseline against the optimized configuration.
    Bench(BenchArgs),
    /// Time every (WL, H) pair of a grid.
    Grid(GridArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Png,
    Csv,
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Auto,
    Direct,
    Fft,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Auto => Backend::Auto,
            BackendArg::Direct => Backend::Direct,
            BackendArg::Fft => Backend::Fft,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ColormapArg {
    Gray,
    Viridis,
}

impl From<ColormapArg> for Colormap {
    fn from(c: ColormapArg) -> Self {
        match c {
            ColormapArg::Gray => Colormap::Grayscale,
            ColormapArg::Viridis => Colormap::Viridis,
        }
    }
}

/// Inclusive integer scale range written `lo:hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleRange {
    pub lo: u32,
    pub hi: u32,
}

impl ScaleRange {
    pub fn scales(self) -> Vec<f64> {
        integer_scales(self.lo, self.hi)
    }
}

impl std::str::FromStr for ScaleRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<u32>()
                .map_err(|e| format!("bad scale bound {v:?}: {e}"))
        };
        let (lo, hi) = (parse(lo)?, parse(hi)?);
        if lo < 1 || hi < lo {
            return Err(format!("scale range {lo}:{hi} must satisfy 1 <= lo <= hi"));
        }
        Ok(Self { lo, hi })
    }
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// Input PCM16 WAV file.
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub format: OutputFormat,
    #[arg(long, default_value = "2:129")]
    pub scales: ScaleRange,
    #[arg(long, default_value_t = 64)]
    pub wl: usize,
    #[arg(long, default_value_t = 128)]
    pub hop: usize,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    pub backend: BackendArg,
    #[arg(long, default_value_t = 512)]
    pub width: u32,
    #[arg(long, default_value_t = 512)]
    pub height: u32,
    #[arg(long, value_enum, default_value_t = ColormapArg::Viridis)]
    pub colormap: ColormapArg,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long)]
    pub scale: f64,
    #[arg(long)]
    pub wl: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = DEFAULT_SIGNAL_LENGTH)]
    pub n: usize,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also time both configurations with rows computed in parallel.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub wl: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub hop: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_SIGNAL_LENGTH)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    pub backend: BackendArg,
    #[arg(long)]
    pub out: PathBuf,
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_)
            | Error::InvalidKernel(_)
            | Error::InvalidImage(_)
            | Error::UnsupportedWavelet(_) => Failure::Usage(e.to_string()),
            other => Failure::Data(other),
        }
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            EXIT_DATA
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Transform(args) => transform(args),
        Command::Kernel(args) => kernel(args),
        Command::Bench(args) => bench(args),
        Command::Grid(args) => grid(args),
    }
}

fn transform(args: TransformArgs) -> Result<(), Failure> {
    let config = TransformConfig::new(args.scales.scales(), args.wl, args.hop)
        .with_backend(args.backend.into());
    config.validate()?;
    let spec = HeatmapSpec {
        width: args.width,
        height: args.height,
        colormap: args.colormap.into(),
    };
    if args.format == OutputFormat::Png && (spec.width == 0 || spec.height == 0) {
        return Err(Failure::Usage(format!(
            "image size {}x{} must be non-zero",
            spec.width, spec.height
        )));
    }

    let signal = read_wav(&args.input)?;
    println!(
        "read {} samples at {} Hz from {}",
        signal.len(),
        signal.sample_rate_hz(),
        args.input.display()
    );
    let scalogram = cwt_strided(&signal, &config)?;
    let (rows, cols) = scalogram.shape();
    match args.format {
        OutputFormat::Png => {
            let bytes = render::render_png(&scalogram, &spec)?;
            render::write_file(&args.out, &bytes)?;
        }
        OutputFormat::Csv => render::export_matrix(&scalogram, &args.out, MatrixFormat::Csv)?,
        OutputFormat::Raw => render::export_matrix(&scalogram, &args.out, MatrixFormat::Raw)?,
    }
    println!("wrote {rows}x{cols} scalogram to {}", args.out.display());
    Ok(())
}

fn kernel(args: KernelArgs) -> Result<(), Failure> {
    let kernel = build_kernel(args.scale, args.wl)?;
    render::write_file(&args.out, kernel_csv(&kernel).as_bytes())?;
    println!("wrote {} taps to {}", kernel.len(), args.out.display());
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    println!(
        "timing baseline and optimized transforms on {} samples, {} reps",
        args.n, args.reps
    );
    let report = bench::run_speedup_bench(args.n, args.reps, args.parallel)?;
    for e in &report.entries {
        println!(
            "{:<20} WL={:<5} H={:<4} median {:.4} s",
            e.name, e.kernel_length, e.hop, e.median_s
        );
    }
    println!(
        "speedup {:.2}x; dataset extrapolation {:.1} h baseline, {:.1} h optimized",
        report.speedup, report.baseline_extrapolation_hours, report.optimized_extrapolation_hours
    );
    if let Some(out) = &args.out {
        render::write_file(out, bench::bench_csv(&report).as_bytes())?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn grid(args: GridArgs) -> Result<(), Failure> {
    if args.wl.contains(&0) || args.hop.contains(&0) {
        return Err(Failure::Usage("WL and H values must be >= 1".into()));
    }
    let cells = bench::grid_cost(&args.wl, &args.hop, args.n, args.reps, args.backend.into())?;
    for c in &cells {
        println!(
            "WL={:<5} H={:<5} median {:.4} s",
            c.wavelet_length, c.hop, c.median_s
        );
    }
    render::write_file(&args.out, bench::grid_csv(&cells).as_bytes())?;
    println!("wrote {}", args.out.display());
    Ok(())
}
