//! Command line front end: `bench`, `verify` and `gen`.
//!
//! Exit codes: 0 success, 1 failed verification, 2 usage, 3 validation,
//! 4 I/O.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{
    run_experiment, summarize, write_records, write_summaries, write_summaries_to, Experiment,
    ExperimentConfig, DEFAULT_DENSITY, DEFAULT_MODE, DEFAULT_SEED, DEFAULT_TRIALS, NATIVE_LOOP,
};
use crate::error::Error;
use crate::synthetic::{GenKind, GenSpec, OperandFile, GENERATOR};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tenkern", version, about = "Tensor kernel benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Time one experiment and write raw records as CSV.
    Bench(BenchArgs),
    /// Run the randomized oracle suites.
    Verify {
        #[arg(long, env = "TENKERN_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Write a generated operand to a JSON file.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ExperimentArg {
    Dot,
    MatvecRows,
    MatvecCols,
    MatvecSquare,
    Ttv,
}

impl From<ExperimentArg> for Experiment {
    fn from(e: ExperimentArg) -> Self {
        match e {
            ExperimentArg::Dot => Experiment::Dot,
            ExperimentArg::MatvecRows => Experiment::MatvecRows,
            ExperimentArg::MatvecCols => Experiment::MatvecCols,
            ExperimentArg::MatvecSquare => Experiment::MatvecSquare,
            ExperimentArg::Ttv => Experiment::Ttv,
        }
    }
}

#[derive(Debug, clap::Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    experiment: ExperimentArg,
    /// Comma-separated sweep, e.g. `1000,1e4`. Defaults to the experiment's
    /// standard grid.
    #[arg(long, value_delimiter = ',', value_parser = parse_size)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Nonzero fraction (ttv only) [default: 0.01]
    #[arg(long)]
    density: Option<f64>,
    /// 1-based contraction mode (ttv only) [default: 2]
    #[arg(long)]
    mode: Option<usize>,
    #[arg(long, env = "TENKERN_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Raw record CSV. A `.meta.json` sidecar is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary CSV (mean and standard deviation per size).
    #[arg(long)]
    summary_out: Option<PathBuf>,
    /// Implementation label; repeatable.
    #[arg(long = "impl", default_values_t = [NATIVE_LOOP.to_string()])]
    impls: Vec<String>,
    /// Skip argument validation inside the timed region.
    #[arg(long)]
    unchecked: bool,
    /// Refuse sizes whose operands would exceed this many GiB.
    #[arg(long)]
    memory_cap_gib: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Vector,
    Matrix,
    Sparse3,
}

#[derive(Debug, clap::Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Comma-separated dimensions: `n`, `rows,cols` or `n1,n2,n3`.
    #[arg(long, value_delimiter = ',', value_parser = parse_size, required = true)]
    dims: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_DENSITY)]
    density: f64,
    #[arg(long, env = "TENKERN_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

/// Accepts plain integers and integral scientific notation (`1e6`).
fn parse_size(s: &str) -> std::result::Result<usize, String> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(f) if f >= 0.0 && f.fract() == 0.0 && f < 2f64.powi(53) => Ok(f as usize),
        _ => Err(format!("'{s}' is not a non-negative integer size")),
    }
}

#[derive(Serialize)]
struct RunMetadata<'a> {
    tool: &'static str,
    version: &'static str,
    generator: &'static str,
    experiment: &'a str,
    sizes: &'a [usize],
    n_trials: usize,
    density: Option<f64>,
    mode: Option<usize>,
    seed: u64,
    fresh_data_per_trial: bool,
    unchecked: bool,
    implementations: &'a [String],
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn usage_error(kind: ErrorKind, msg: impl std::fmt::Display) -> i32 {
    let _ = Cli::command().error(kind, msg).print();
    EXIT_USAGE
}

fn report(err: &Error) -> i32 {
    eprintln!("error: {err}");
    err.exit_code()
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match cli.command {
        Command::Bench(args) => bench(args),
        Command::Verify { seed } => run_verify(seed),
        Command::Gen(args) => generate(args),
    }
}

fn bench(args: BenchArgs) -> i32 {
    let experiment = Experiment::from(args.experiment);
    if experiment != Experiment::Ttv && (args.density.is_some() || args.mode.is_some()) {
        return usage_error(
            ErrorKind::ArgumentConflict,
            "--density and --mode only apply to --experiment ttv",
        );
    }
    let mut cfg = ExperimentConfig::new(experiment)
        .with_trials(args.trials)
        .with_seed(args.seed)
        .with_density(args.density.unwrap_or(DEFAULT_DENSITY))
        .with_mode(args.mode.unwrap_or(DEFAULT_MODE));
    if !args.sizes.is_empty() {
        cfg.sizes = args.sizes;
    }
    cfg.unchecked = args.unchecked;
    if let Some(gib) = args.memory_cap_gib {
        if gib.is_nan() || gib <= 0.0 {
            return usage_error(ErrorKind::InvalidValue, "--memory-cap-gib must be positive");
        }
        cfg.memory_cap_bytes = (gib * (1u64 << 30) as f64) as u64;
    }

    let labels: Vec<&str> = args.impls.iter().map(String::as_str).collect();
    let records = match run_experiment(&cfg, &labels) {
        Ok(r) => r,
        Err(e) => return report(&e),
    };
    let summaries = match summarize(&records) {
        Ok(s) => s,
        Err(e) => return report(&e),
    };

    if let Some(out) = &args.out {
        if let Err(e) = write_records(out, &records) {
            return report(&e);
        }
        let meta = RunMetadata {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            generator: GENERATOR,
            experiment: experiment.label(),
            sizes: &cfg.sizes,
            n_trials: cfg.n_trials,
            density: (experiment == Experiment::Ttv).then_some(cfg.density),
            mode: (experiment == Experiment::Ttv).then_some(cfg.mode),
            seed: cfg.seed,
            fresh_data_per_trial: cfg.fresh_data_per_trial,
            unchecked: cfg.unchecked,
            implementations: &args.impls,
        };
        let path = sidecar_path(out);
        let json = serde_json::to_string_pretty(&meta).expect("metadata serializes");
        if let Err(e) = std::fs::write(&path, json + "\n") {
            return report(&Error::Io { path, source: e });
        }
    }
    if let Some(path) = &args.summary_out {
        if let Err(e) = write_summaries(path, &summaries) {
            return report(&e);
        }
    }
    if args.out.is_none() && args.summary_out.is_none() {
        let stdout = std::io::stdout();
        if let Err(e) = write_summaries_to(stdout.lock(), &summaries) {
            eprintln!("error: {e}");
            return 4;
        }
    } else {
        for s in &summaries {
            eprintln!(
                "{} {} {}: mean {:.3e} s, sd {:.3e} s (n={})",
                s.experiment, s.implementation, s.size, s.mean_s, s.sd_s, s.n
            );
        }
    }
    EXIT_OK
}

fn run_verify(seed: u64) -> i32 {
    let outcomes = verify::run_all(seed);
    let mut out = std::io::stdout().lock();
    for o in &outcomes {
        let _ = writeln!(
            out,
            "[{}] {}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
    }
    if outcomes.iter().all(|o| o.passed) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

fn generate(args: GenArgs) -> i32 {
    let spec = match args.kind {
        KindArg::Vector => {
            if args.dims.len() != 1 {
                return usage_error(ErrorKind::WrongNumberOfValues, "vector takes one dim");
            }
            GenSpec::vector(args.seed, args.dims[0])
        }
        KindArg::Matrix => {
            if args.dims.len() != 2 {
                return usage_error(ErrorKind::WrongNumberOfValues, "matrix takes two dims");
            }
            GenSpec::matrix(args.seed, args.dims[0], args.dims[1])
        }
        KindArg::Sparse3 => {
            if args.dims.len() != 3 {
                return usage_error(ErrorKind::WrongNumberOfValues, "sparse3 takes three dims");
            }
            GenSpec {
                seed: args.seed,
                kind: GenKind::Sparse3,
                dims: args.dims,
                density: args.density,
            }
        }
    };
    match OperandFile::generate(&spec).and_then(|f| f.write(&args.out)) {
        Ok(()) => EXIT_OK,
        Err(e) => report(&e),
    }
}
