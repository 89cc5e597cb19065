//! The `rffkit` command-line experiment runner.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a verification check outside its
//! tolerance, 3 an I/O or file-format failure.

mod commands;
pub mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{ExperimentConfig, SelectionSettings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Environment variable bounding the worker thread count.
pub const THREADS_ENV: &str = "RFFKIT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "rffkit", version, about = "Random Fourier feature kernel classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic dataset.
    Synth(SynthArgs),
    /// Train a classifier and write a run directory.
    Train(ExperimentArgs),
    /// Run feature selection only and save the selected feature map.
    Select(ExperimentArgs),
    /// Score a saved model on a dataset.
    Evaluate(EvaluateArgs),
    /// Run the kernel approximation checks.
    Verify(VerifyArgs),
    /// Approximation error against the number of features.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub(crate) enum SynthKind {
    Mixture,
    Interactions,
}

#[derive(Debug, Args)]
pub(crate) struct SynthArgs {
    #[arg(long, value_enum, default_value = "mixture")]
    kind: SynthKind,
    #[arg(long, default_value_t = 10)]
    dim: usize,
    #[arg(long, default_value_t = 3)]
    classes: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Norm of the class means (mixture).
    #[arg(long, default_value_t = 3.0)]
    separation: f64,
    /// Number of secret coordinates (interactions).
    #[arg(long, default_value_t = 2)]
    relevant: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; `.csv` writes CSV, anything else the binary container.
    #[arg(long)]
    out: PathBuf,
}

/// Every field is kept as text so that all problems are reported together
/// after merging with `--config`.
#[derive(Debug, Args)]
pub(crate) struct ExperimentArgs {
    /// Flat key=value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    train: Option<String>,
    #[arg(long)]
    heldout: Option<String>,
    #[arg(long)]
    classes: Option<String>,
    #[arg(long)]
    kernel: Option<String>,
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    sparsity: Option<String>,
    #[arg(long)]
    features: Option<String>,
    #[arg(long)]
    rank: Option<String>,
    #[arg(long = "select-iters")]
    select_iters: Option<String>,
    #[arg(long = "select-subset")]
    select_subset: Option<String>,
    #[arg(long)]
    lr: Option<String>,
    #[arg(long)]
    epochs: Option<String>,
    #[arg(long = "batch-size")]
    batch_size: Option<String>,
    /// constant, ce or erll.
    #[arg(long)]
    decay: Option<String>,
    #[arg(long)]
    patience: Option<String>,
    /// Early-stopping metric: ce, erll or err.
    #[arg(long)]
    monitor: Option<String>,
    #[arg(long = "stop-patience")]
    stop_patience: Option<String>,
    #[arg(long = "heldout-fraction")]
    heldout_fraction: Option<String>,
    #[arg(long = "weight-decay")]
    weight_decay: Option<String>,
    #[arg(long = "train-metrics")]
    train_metrics: Option<String>,
    /// nats or bits.
    #[arg(long)]
    units: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

impl ExperimentArgs {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let fields: [(&'static str, &Option<String>); 24] = [
            ("train", &self.train),
            ("heldout", &self.heldout),
            ("classes", &self.classes),
            ("kernel", &self.kernel),
            ("sigma", &self.sigma),
            ("lambda", &self.lambda),
            ("sparsity", &self.sparsity),
            ("features", &self.features),
            ("rank", &self.rank),
            ("select-iters", &self.select_iters),
            ("select-subset", &self.select_subset),
            ("lr", &self.lr),
            ("epochs", &self.epochs),
            ("batch-size", &self.batch_size),
            ("decay", &self.decay),
            ("patience", &self.patience),
            ("monitor", &self.monitor),
            ("stop-patience", &self.stop_patience),
            ("heldout-fraction", &self.heldout_fraction),
            ("weight-decay", &self.weight_decay),
            ("train-metrics", &self.train_metrics),
            ("units", &self.units),
            ("seed", &self.seed),
            ("out", &self.out),
        ];
        fields.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k, v))).collect()
    }

    fn resolve(&self) -> std::result::Result<ExperimentConfig, Failure> {
        let text = match &self.config {
            Some(path) => {
                Some(std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?)
            }
            None => None,
        };
        let file = self.config.as_deref().zip(text.as_deref());
        let map = config::merged_map(file, &self.overrides()).map_err(Failure::Validation)?;
        ExperimentConfig::from_map(&map).map_err(Failure::Validation)
    }
}

#[derive(Debug, Args)]
pub(crate) struct EvaluateArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Class count for CSV inputs; defaults to the model's.
    #[arg(long)]
    classes: Option<usize>,
    #[arg(long, default_value = "nats")]
    units: String,
}

#[derive(Debug, Args)]
pub(crate) struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for the per-check CSV tables.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub(crate) struct SweepArgs {
    #[arg(long, default_value = "gaussian")]
    kernel: String,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 2)]
    sparsity: usize,
    #[arg(long, default_value_t = 10)]
    dim: usize,
    #[arg(long, default_value_t = 200)]
    pairs: usize,
    /// Smallest feature count, as a power of two.
    #[arg(long = "min-exp", default_value_t = 6)]
    min_exp: u32,
    #[arg(long = "max-exp", default_value_t = 13)]
    max_exp: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub(crate) enum Failure {
    Validation(Vec<String>),
    Verification(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Verification(_) => EXIT_VERIFICATION,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn report(&self) {
        match self {
            Failure::Validation(errors) => {
                eprintln!("error: invalid configuration");
                for e in errors {
                    eprintln!("  - {e}");
                }
            }
            Failure::Verification(msg) => eprintln!("verification failed: {msg}"),
            Failure::Io(msg) => eprintln!("error: {msg}"),
        }
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        if e.is_io() {
            Failure::Io(e.to_string())
        } else {
            Failure::Validation(vec![e.to_string()])
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

pub(crate) type CmdResult = std::result::Result<(), Failure>;

fn configure_threads() -> CmdResult {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize =
        raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            Failure::Validation(vec![format!("{THREADS_ENV}: expected a positive integer, got {raw:?}")])
        })?;
    // A pool may already exist when called in-process more than once.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Synth(a) => commands::synth(a),
        Command::Train(a) => a.resolve().and_then(|c| commands::train(&c)),
        Command::Select(a) => a.resolve().and_then(|c| commands::select(&c)),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Verify(a) => commands::verify(a),
        Command::Sweep(a) => commands::sweep(a),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            f.report();
            f.code()
        }
    }
}
