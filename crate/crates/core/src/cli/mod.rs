//! Command-line front end: `spectrum`, `scan`, `check` and `plot`.
//!
//! Exit codes: 0 success, 1 assertion failure, 2 configuration error,
//! 3 numerical failure.

mod commands;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::config::{Format, RunConfig};
use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "nhssh", version, about = "Spectra and diagnostics of the 2D non-Hermitian SSH lattice")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Override one configuration key, e.g. `--set model.beta=0.8`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of csv, json, svg.
    #[arg(long, global = true, value_delimiter = ',')]
    pub format: Option<Vec<String>>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Print the summary JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Reality tolerance on |Im E|.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Spectra for each configured boundary condition.
    Spectrum,
    /// Alpha, theta or size sweep.
    Scan,
    /// Symmetry, winding, modular-condition and skin-effect checks.
    Check,
    /// Re-plot a spectrum CSV as SVG.
    Plot {
        /// Spectrum CSV (default: `<out>/spectrum.csv`).
        #[arg(long)]
        input: Option<PathBuf>,
        /// SVG path (default: `<out>/plot.svg`).
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Scan => "scan",
            Command::Check => "check",
            Command::Plot { .. } => "plot",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub command: String,
    pub config: RunConfig,
    pub reports: Vec<serde_json::Value>,
    pub assertions: Vec<Assertion>,
    pub versions: BTreeMap<String, String>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }
}

pub fn versions() -> BTreeMap<String, String> {
    BTreeMap::from([
        ("nhssh".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("summary_schema".to_string(), "1".to_string()),
    ])
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Numerical { .. }
        | Error::DegeneratePolynomial(_)
        | Error::PhaseAmbiguity { .. }
        | Error::NonIntegerWinding { .. }
        | Error::ReferenceOnSpectrum { .. } => EXIT_NUMERICAL,
        _ => EXIT_CONFIG,
    }
}

/// Configuration after applying flags; presets are expanded.
pub fn effective_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(cli.config.as_deref(), &cli.set)?;
    if let Some(out) = &cli.out {
        cfg.output.dir = out.to_string_lossy().into_owned();
    }
    if let Some(f) = &cli.format {
        cfg.output.formats = f.iter().map(|s| s.parse::<Format>()).collect::<Result<_>>()?;
    }
    if let Some(w) = cli.workers {
        cfg.output.workers = w;
    }
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Config(format!("--tol must be positive, got {t}")));
        }
        cfg.tolerances.reality = t;
    }
    cfg.validate()?;
    cfg.resolved()
}

pub(crate) fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

fn execute(cli: &Cli) -> Result<Summary> {
    let cfg = effective_config(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.output.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    faer::set_global_parallelism(faer::Par::Seq);
    let (reports, assertions) = pool.install(|| match &cli.command {
        Command::Spectrum => commands::spectrum(&cfg),
        Command::Scan => commands::scan(&cfg),
        Command::Check => commands::check(&cfg),
        Command::Plot { input, output } => commands::plot(&cfg, input.as_deref(), output.as_deref()),
    })?;
    let summary = Summary {
        command: cli.command.name().to_string(),
        config: cfg.clone(),
        reports,
        assertions,
        versions: versions(),
    };
    write_file(
        Path::new(&cfg.output.dir),
        &format!("{}_summary.json", summary.command),
        &serde_json::to_string_pretty(&summary)?,
    )?;
    Ok(summary)
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to stderr; with `--json` the summary is
/// the only thing written to stdout.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(summary) => {
            if cli.json {
                match serde_json::to_string_pretty(&summary) {
                    Ok(s) => println!("{s}"),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return EXIT_CONFIG;
                    }
                }
            }
            for a in summary.assertions.iter().filter(|a| !a.pass) {
                eprintln!("assertion failed: {} ({})", a.name, a.detail);
            }
            if summary.passed() {
                EXIT_OK
            } else {
                EXIT_ASSERTION
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
