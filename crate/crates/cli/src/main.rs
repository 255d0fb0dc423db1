//! Batch front end: sweeps, exponent calculators and the acceptance suite.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use angreg::exponents::Num;
use angreg::parallel::Parallelism;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::config::RunFile;
use crate::output::{render, write_tables, Format, Table};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_TOLERANCE: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "angreg", version, about = "Per-mode constants and numerical checks for estimates with angular regularity")]
#[command(args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Trace constants per degree and their equivalence bounds.
    Trace,
    /// Morawetz ratios, exact against simulated.
    Morawetz,
    /// Weighted Strichartz ratio sweeps.
    Strichartz,
    /// Sobolev-type trace ratios.
    Sobolev,
    /// Truncated mode-constant integrals at the endpoints of the b range.
    Divergence,
    /// Critical exponents, admissibility and parameter windows.
    Exponents,
    /// The acceptance suite.
    VerifyAll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum VariantName {
    L2,
    Dual,
    Zonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightName {
    Exact,
    Bracket,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Run file of `key = value` lines; command-line options take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Dimensions.
    #[arg(long, global = true, value_delimiter = ',')]
    pub n: Vec<u32>,
    /// Weight exponents.
    #[arg(long, global = true, value_delimiter = ',')]
    pub b: Vec<f64>,
    /// Dispersion exponents (1 wave, 2 Schrödinger).
    #[arg(long, global = true, value_delimiter = ',')]
    pub a: Vec<f64>,
    /// Angular degrees.
    #[arg(long, global = true, value_delimiter = ',')]
    pub k: Vec<u32>,
    /// Largest degree for tables.
    #[arg(long = "k-max", alias = "kmax", global = true)]
    pub k_max: Option<u32>,
    /// Distance kept from the ends of the b range.
    #[arg(long, global = true, default_value_t = 0.0)]
    pub margin: f64,

    /// Space exponents (`inf` allowed).
    #[arg(long, global = true, value_delimiter = ',')]
    pub r: Vec<Num>,
    /// Time exponents.
    #[arg(long, global = true, value_delimiter = ',')]
    pub q: Vec<Num>,
    /// Nonlinearity powers.
    #[arg(long, global = true, value_delimiter = ',')]
    pub p: Vec<Num>,
    /// Angular integrability for the generalized window; defaults to `r`.
    #[arg(long = "p-ang", global = true)]
    pub p_ang: Option<Num>,
    /// Weight powers for the Morawetz-Strichartz regularities.
    #[arg(long, global = true, value_delimiter = ',')]
    pub alpha: Vec<Num>,
    /// Interpolation parameter.
    #[arg(long, global = true)]
    pub eta: Option<Num>,
    #[arg(long, global = true)]
    pub wave: bool,
    #[arg(long, global = true, alias = "schrodinger")]
    pub schro: bool,

    /// Sobolev variants.
    #[arg(long, global = true, value_delimiter = ',', value_enum)]
    pub variant: Vec<VariantName>,
    /// Angular regularity for the zonal variant; defaults to `(n-b)/2 + 1/4`.
    #[arg(long, global = true)]
    pub s: Option<f64>,
    #[arg(long = "weight-mode", global = true, value_enum, default_value = "exact")]
    pub weight_mode: WeightName,
    /// Ball radii for local smoothing.
    #[arg(long, global = true, value_delimiter = ',')]
    pub radii: Vec<f64>,
    /// Truncation points for divergence probes.
    #[arg(long, global = true, value_delimiter = ',')]
    pub cutoffs: Vec<f64>,
    /// Also evaluate trace constants by quadrature.
    #[arg(long, global = true)]
    pub quadrature: bool,

    /// Spectral function file used instead of Gaussian test data.
    #[arg(long, global = true)]
    pub data: Option<PathBuf>,
    /// Width of the Gaussian test profile `exp(-sigma rho^2)`.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub sigma: f64,
    /// Simulation horizon in dispersion times.
    #[arg(long, global = true)]
    pub horizon: Option<f64>,
    /// Simulation refinement level.
    #[arg(long, global = true)]
    pub refine: Option<u32>,
    /// Tolerance override for the command's comparisons.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Criteria to run with `verify-all`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub only: Vec<u32>,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Directory for report files; reports go to stdout otherwise.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    pub serial: bool,
    /// Worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

impl Opts {
    pub fn parallelism(&self) -> Parallelism {
        if self.serial || !Parallelism::available() {
            Parallelism::Serial
        } else {
            Parallelism::Parallel
        }
    }
}

/// What went wrong, if anything, while producing the tables.
#[derive(Debug, Default)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone)]
pub struct Failure {
    pub item: String,
    pub kind: FailureKind,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    Tolerance,
    Budget,
    Error,
}

impl FailureKind {
    fn as_str(self) -> &'static str {
        match self {
            FailureKind::Tolerance => "tolerance",
            FailureKind::Budget => "budget",
            FailureKind::Error => "error",
        }
    }

    pub fn of(err: &angreg::Error) -> Self {
        if err.is_numeric_budget() {
            FailureKind::Budget
        } else {
            FailureKind::Error
        }
    }
}

impl Outcome {
    pub fn fail(&mut self, item: impl Into<String>, kind: FailureKind, detail: impl Into<String>) {
        self.failures.push(Failure {
            item: item.into(),
            kind,
            detail: detail.into(),
        });
    }

    fn manifest(&self) -> Table {
        let mut t = Table::new("failures", &["item", "status", "detail"]);
        for f in &self.failures {
            t.push(vec![f.item.clone().into(), f.kind.as_str().into(), f.detail.clone().into()]);
        }
        t
    }

    fn exit_code(&self) -> u8 {
        if self.failures.iter().any(|f| f.kind == FailureKind::Budget) {
            EXIT_BUDGET
        } else if self.failures.is_empty() {
            0
        } else {
            EXIT_TOLERANCE
        }
    }
}

/// Invalid parameters; reported before any work is done.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn config_path(args: &[String]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

fn parse_cli(args: Vec<String>) -> Result<(Command, Opts), ExitCode> {
    let usage = |msg: String| {
        eprintln!("error: {msg}");
        ExitCode::from(EXIT_USAGE)
    };
    let exit = |e: clap::Error| {
        let code = e.exit_code();
        let _ = e.print();
        ExitCode::from(code as u8)
    };
    let mut argv = vec![args[0].clone()];
    let file = match config_path(&args[1..]) {
        Some(path) => RunFile::load(&path).map_err(|e| usage(e.to_string()))?,
        None => RunFile::default(),
    };
    argv.extend(file.to_args());
    argv.extend(args[1..].iter().cloned());
    let mut cli = Cli::try_parse_from(&argv).map_err(exit)?;
    if cli.command.is_none() {
        if let Some(name) = &file.command {
            argv.push(name.clone());
            cli = Cli::try_parse_from(&argv).map_err(exit)?;
        }
    }
    match cli.command {
        Some(c) => Ok((c, cli.opts)),
        None => {
            let _ = Cli::command().print_help();
            Err(usage("no command given".into()))
        }
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let (command, opts) = match parse_cli(args) {
        Ok(v) => v,
        Err(code) => return code,
    };
    #[cfg(feature = "parallel")]
    if let Some(t) = opts.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let outcome = match commands::run(command, &opts) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let manifest = outcome.manifest();
    match &opts.out {
        Some(dir) => {
            let mut tables = outcome.tables.clone();
            if !outcome.failures.is_empty() {
                tables.push(manifest);
            } else {
                let _ = std::fs::remove_file(dir.join(format!("failures.{}", opts.format.extension())));
            }
            if let Err(e) = write_tables(dir, &tables, opts.format) {
                eprintln!("error: writing reports to {}: {e}", dir.display());
                return ExitCode::from(EXIT_USAGE);
            }
        }
        None => {
            print!("{}", render(&outcome.tables, opts.format));
            if !outcome.failures.is_empty() {
                eprint!("{}", render(&[manifest], Format::Csv));
            }
        }
    }
    ExitCode::from(outcome.exit_code())
}
