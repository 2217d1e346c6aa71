//! `persym`: batch front end for persym-core.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

mod commands;
mod input;
mod report;

use input::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("numerical inconsistency: {0}")]
    Numerical(String),
    #[error("cannot write report: {0}")]
    Output(String),
}

impl CliError {
    pub(crate) fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Output(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    #[value(name = "S")]
    S,
    #[value(name = "E")]
    E,
    #[value(name = "L")]
    L,
    #[value(name = "I")]
    I,
    #[value(name = "bottleneck")]
    Bottleneck,
}

impl MetricArg {
    fn name(self) -> &'static str {
        match self {
            MetricArg::S => "S",
            MetricArg::E => "E",
            MetricArg::L => "L",
            MetricArg::I => "I",
            MetricArg::Bottleneck => "bottleneck",
        }
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct Flags {
    /// Point coincidence tolerance; overrides the document's.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Transport exponent.
    #[arg(long, global = true, default_value_t = 2.0)]
    p: f64,
    /// Mirror axes in the plane, or rotation axes in space.
    #[arg(long, global = true)]
    axes: Option<usize>,
    #[arg(long, global = true)]
    rotations: Option<usize>,
    /// Mirror normals in space.
    #[arg(long, global = true)]
    mirrors: Option<usize>,
    /// Rotation angles per spatial axis.
    #[arg(long, global = true)]
    angles: Option<usize>,
    #[arg(long, global = true, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    #[arg(long, global = true, value_delimiter = ',')]
    epsilons: Option<Vec<f64>>,
    #[arg(long, global = true, action = ArgAction::Set, num_args = 0..=1, default_value_t = false,
          default_missing_value = "true")]
    translation_equiv: bool,
    #[arg(long, global = true, action = ArgAction::Set, num_args = 0..=1, default_value_t = false,
          default_missing_value = "true")]
    include_identity: bool,
    #[arg(long, global = true, value_enum)]
    metric: Option<MetricArg>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads; falls back to PERSYM_THREADS, then to the machine's parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Symmetry group of every frame.
    SymGroup { input: PathBuf },
    /// Symmetry barcode of a persistence configuration.
    Barcode { input: PathBuf },
    /// Polybarcode of a persistence configuration.
    Polybarcode { input: PathBuf },
    /// Distances between the polybarcodes or barcodes of two persistence configurations.
    Metrics { first: PathBuf, second: PathBuf },
    /// Defect of sampled candidate isometries.
    DefectSweep { input: PathBuf },
    /// Symmetry measure over sampled mirrors.
    MeasureSweep { input: PathBuf },
    /// Defect feature grid over radii and thresholds, with the candidate H0 probe.
    Features { input: PathBuf },
    /// Degree of symmetry of every frame and the weighted path.
    Degrees { input: PathBuf },
    /// Cayley graph of the first frame's symmetry group.
    Cayley { input: PathBuf },
    /// Irreducible barcode of an abelian persistence representation.
    RepBarcode { input: PathBuf },
    /// Persistent Fourier spectra of a function on a cyclic tower.
    FourierDemo { input: Option<PathBuf> },
}

#[derive(Debug, Parser)]
#[command(name = "persym", version, about = "Persistent symmetry analysis of point configurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::SymGroup { .. } => "sym-group",
            Command::Barcode { .. } => "barcode",
            Command::Polybarcode { .. } => "polybarcode",
            Command::Metrics { .. } => "metrics",
            Command::DefectSweep { .. } => "defect-sweep",
            Command::MeasureSweep { .. } => "measure-sweep",
            Command::Features { .. } => "features",
            Command::Degrees { .. } => "degrees",
            Command::Cayley { .. } => "cayley",
            Command::RepBarcode { .. } => "rep-barcode",
            Command::FourierDemo { .. } => "fourier-demo",
        }
    }
}

fn parameters(f: &Flags) -> Value {
    let list = |v: &Option<Vec<f64>>| v.as_deref().map_or(Value::Null, report::nums);
    json!({
        "tolerance": f.tolerance.map_or(Value::Null, report::num),
        "p": report::num(f.p),
        "axes": f.axes,
        "rotations": f.rotations,
        "mirrors": f.mirrors,
        "angles": f.angles,
        "radii": list(&f.radii),
        "epsilons": list(&f.epsilons),
        "translation_equiv": f.translation_equiv,
        "include_identity": f.include_identity,
        "metric": f.metric.map(MetricArg::name),
        "seed": f.seed,
    })
}

fn thread_count(flags: &Flags, warnings: &mut Vec<String>) -> Option<usize> {
    if flags.threads.is_some() {
        return flags.threads;
    }
    let raw = std::env::var("PERSYM_THREADS").ok()?;
    match raw.trim().parse::<usize>() {
        Ok(n) => Some(n),
        Err(_) => {
            warnings.push(format!("ignoring PERSYM_THREADS={raw:?}: not a thread count"));
            None
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let flags = &cli.flags;
    let mut warnings = Vec::new();
    if let Some(n) = thread_count(flags, &mut warnings) {
        // results are collected in candidate order, so the thread count never changes a report
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = match &cli.command {
        Command::SymGroup { input } => commands::sym_group(input, flags),
        Command::Barcode { input } => commands::barcode(input, flags),
        Command::Polybarcode { input } => commands::polybarcode_cmd(input, flags),
        Command::Metrics { first, second } => commands::metrics(first, second, flags),
        Command::DefectSweep { input } => commands::defect_sweep(input, flags),
        Command::MeasureSweep { input } => commands::measure_sweep(input, flags),
        Command::Features { input } => commands::features(input, flags),
        Command::Degrees { input } => commands::degrees(input, flags),
        Command::Cayley { input } => commands::cayley_cmd(input, flags),
        Command::RepBarcode { input } => commands::rep_barcode(input),
        Command::FourierDemo { input } => commands::fourier_demo(input.as_deref(), flags),
    }?;
    warnings.extend(out.warnings);
    let doc = json!({
        "command": cli.command.name(),
        "inputs": out.inputs,
        "parameters": parameters(flags),
        "results": out.results,
        "warnings": warnings,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("reports serialize");
    text.push('\n');
    match &flags.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Output(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand
                | ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 64,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("persym: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
