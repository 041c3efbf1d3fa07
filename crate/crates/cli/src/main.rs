//! `strayeval`: evaluate straylight masks, repair fragmented ground truth,
//! gate measurements and generate synthetic scenes.

mod commands;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use strayeval_core::{Border, Connectivity, SmoothingConfig, DEFAULT_USABILITY_THRESHOLD};

use crate::error::{exit, CliError};

#[derive(Debug, Parser)]
#[command(name = "strayeval", version, about = "Straylight segmentation evaluation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Label connected regions of a mask.
    Label(LabelArgs),
    /// Gaussian-smooth a ground-truth mask to repair fragmentation.
    Smooth(SmoothArgs),
    /// Compute pixel and artifact metrics for a prediction against GT.
    Eval(EvalArgs),
    /// Build the validity mask, decide usability and gate measurements.
    Pipeline(PipelineArgs),
    /// Generate a synthetic flare dataset.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConnectivityArg {
    /// Edge and corner neighbours.
    #[value(name = "8", alias = "2", alias = "eight")]
    Eight,
    /// Edge neighbours only.
    #[value(name = "4", alias = "1", alias = "four")]
    Four,
}

impl From<ConnectivityArg> for Connectivity {
    fn from(c: ConnectivityArg) -> Self {
        match c {
            ConnectivityArg::Eight => Connectivity::EightNeighbor,
            ConnectivityArg::Four => Connectivity::FourNeighbor,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BorderArg {
    Reflect,
    ZeroPad,
}

impl From<BorderArg> for Border {
    fn from(b: BorderArg) -> Self {
        match b {
            BorderArg::Reflect => Border::Reflect,
            BorderArg::ZeroPad => Border::ZeroPad,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct LabelArgs {
    mask: PathBuf,
    #[arg(long, value_enum, default_value = "8")]
    connectivity: ConnectivityArg,
    /// Write the label map as a 16-bit PNG.
    #[arg(long)]
    out_labels: Option<PathBuf>,
    /// Region list destination (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
struct SmoothingArgs {
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 5.0)]
    truncate: f64,
    /// Binarization threshold on the blurred field (strictly above).
    #[arg(long, default_value_t = SmoothingConfig::DEFAULT_THRESHOLD)]
    threshold: f64,
    #[arg(long, value_enum, default_value = "reflect")]
    border: BorderArg,
}

impl SmoothingArgs {
    fn config(&self) -> SmoothingConfig {
        SmoothingConfig {
            sigma: self.sigma,
            truncate: self.truncate,
            binarize_threshold: self.threshold,
            border: self.border.into(),
        }
    }
}

#[derive(Debug, Args)]
struct SmoothArgs {
    mask: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    smoothing: SmoothingArgs,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Predicted mask, or a directory of masks with --batch.
    pred: PathBuf,
    /// Ground-truth mask, or a directory of masks with --batch.
    gt: PathBuf,
    /// Smooth the ground truth before evaluation.
    #[arg(long)]
    smooth: bool,
    #[arg(long, requires = "smooth")]
    sigma: Option<f64>,
    #[arg(long, requires = "smooth")]
    truncate: Option<f64>,
    #[arg(long, requires = "smooth")]
    threshold: Option<f64>,
    #[arg(long, value_enum, requires = "smooth")]
    border: Option<BorderArg>,
    #[arg(long, value_enum, default_value = "8")]
    connectivity: ConnectivityArg,
    /// Minimum overlap, as a fraction of the smaller region, for a
    /// prediction to count as touching a GT region.
    #[arg(long, default_value_t = 0.0)]
    min_overlap: f64,
    /// Pair files by name across the PRED and GT directories.
    #[arg(long)]
    batch: bool,
    /// Report format; defaults to json for one frame and csv for a batch.
    #[arg(long, value_enum)]
    format: Option<ReportFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl EvalArgs {
    fn smoothing(&self) -> Option<SmoothingConfig> {
        self.smooth.then(|| {
            let d = SmoothingConfig::default();
            SmoothingConfig {
                sigma: self.sigma.unwrap_or(d.sigma),
                truncate: self.truncate.unwrap_or(d.truncate),
                binarize_threshold: self.threshold.unwrap_or(d.binarize_threshold),
                border: self.border.map(Into::into).unwrap_or(d.border),
            }
        })
    }
}

#[derive(Debug, Args)]
struct PipelineArgs {
    /// Straylight segmentation mask.
    seg: PathBuf,
    /// Measurements as JSON lines: {"id": .., "row": .., "col": ..}.
    measurements: PathBuf,
    /// Invalid-pixel fraction at which the frame triggers FDIR.
    #[arg(long, default_value_t = DEFAULT_USABILITY_THRESHOLD)]
    threshold: f64,
    /// Chebyshev radius by which invalid regions are grown before gating.
    #[arg(long, default_value_t = 0)]
    margin: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Scene configuration JSON; built-in defaults when omitted.
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long)]
    out_dir: PathBuf,
    /// Write into a non-empty output directory.
    #[arg(long)]
    force: bool,
}

fn configure_threads() {
    if let Some(n) = std::env::var("STRAYEVAL_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { exit::OK as u8 });
        }
    };
    configure_threads();

    let result = match cli.command {
        Command::Label(args) => commands::label::run(&args),
        Command::Smooth(args) => commands::smooth::run(&args),
        Command::Eval(args) => commands::eval::run(&args),
        Command::Pipeline(args) => commands::pipeline::run(&args),
        Command::Gen(args) => commands::gen::run(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("strayeval: {err}");
            ExitCode::from(CliError::code(&err) as u8)
        }
    }
}
