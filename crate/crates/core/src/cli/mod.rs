//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 violated
//! precondition, 4 failed verification.

pub mod commands;
pub mod config;
pub mod csv;
pub mod presets;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use self::config::{ConfigError, Overrides, RunConfig, DEFAULT_SAMPLES, DEFAULT_T_MAX};
use crate::verify::{VerifyConfig, DEFAULT_DRAWS, DEFAULT_SEED, ORACLE_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Model(#[from] crate::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("verification failed: {0}")]
    Verify(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Model(crate::Error::InvalidParams(_)) => EXIT_USAGE,
            CliError::Precondition(_) | CliError::Model(_) => EXIT_PRECONDITION,
            CliError::Verify(_) => EXIT_VERIFY,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "kerrswap",
    version,
    about = "Entanglement swapping between two lossy Kerr Jaynes-Cummings cavities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// `key = value` file; flags override its entries.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Detuning Δ/g.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Kerr susceptibility χ/g.
    #[arg(long, allow_negative_numbers = true)]
    pub chi: Option<f64>,
    /// Cavity loss κ/g.
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    /// Atomic decay Γ/g.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Initial-state angle θ, e.g. "pi/4" or "1/3 pi" [default: pi/4].
    #[arg(long, allow_hyphen_values = true, value_name = "EXPR")]
    pub theta: Option<String>,
    /// Initial-state phase φ [default: 0].
    #[arg(long, allow_hyphen_values = true, value_name = "EXPR")]
    pub phi: Option<String>,
    /// Largest scaled time gt, at most 50 [default: 15].
    #[arg(long, allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    /// Grid points (time or θ) [default: 3000].
    #[arg(long)]
    pub samples: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let flags = Overrides {
            delta: self.delta,
            chi: self.chi,
            kappa: self.kappa,
            gamma: self.gamma,
            theta: self.theta.clone(),
            phi: self.phi.clone(),
            t_max: self.t_max,
            samples: self.samples,
            out: self.out.clone(),
        };
        RunConfig::resolve(self.config.as_deref(), &flags)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Swap observables along a time grid.
    Evolve(RunArgs),
    /// Bell phase Θ against θ at a maximal-entanglement time (needs κ = Γ).
    ThetaScan {
        #[command(flatten)]
        run: RunArgs,
        /// Index of the time T_n.
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Remove 2π jumps from Θ.
        #[arg(long)]
        unwrap: bool,
    },
    /// Times of maximal entanglement.
    Conditions {
        #[command(flatten)]
        run: RunArgs,
        /// Largest index n.
        #[arg(long, default_value_t = 5)]
        n: usize,
    },
    /// Seeded differential checks against the oracles.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_DRAWS)]
        draws: usize,
        /// Component tolerance of the oracle comparison.
        #[arg(long, default_value_t = ORACLE_TOL)]
        tol: f64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Write the CSV of a figure panel, or of every panel with "all".
    Figures {
        /// Panel id such as fig4a, or "all".
        id: String,
        /// Output directory.
        #[arg(long, value_name = "DIR", default_value = "figures")]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_T_MAX)]
        t_max: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => csv::write_atomic(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Evolve(run) => {
            let cfg = run.resolve()?;
            emit(cfg.out.as_deref(), commands::evolve_csv(&cfg)?.as_str())
        }
        Command::ThetaScan { run, n, unwrap } => {
            let cfg = run.resolve()?;
            emit(
                cfg.out.as_deref(),
                commands::theta_scan_csv(&cfg, n, unwrap)?.as_str(),
            )
        }
        Command::Conditions { run, n } => {
            let cfg = run.resolve()?;
            let (doc, warning) = commands::conditions_csv(&cfg, n)?;
            if let Some(w) = warning {
                eprintln!("warning: {w}");
            }
            emit(cfg.out.as_deref(), doc.as_str())
        }
        Command::Verify {
            seed,
            draws,
            tol,
            out,
        } => {
            if draws == 0 {
                return Err(CliError::Usage("--draws must be at least 1".into()));
            }
            if !(tol > 0.0) {
                return Err(CliError::Usage(format!(
                    "--tol must be positive, got {tol}"
                )));
            }
            let cfg = VerifyConfig {
                seed,
                draws,
                oracle_tol: tol,
            };
            let (doc, passed) = commands::verify_csv(&cfg);
            emit(out.as_deref(), doc.as_str())?;
            if passed {
                Ok(())
            } else {
                let first = doc
                    .as_str()
                    .lines()
                    .find(|l| l.contains(",false,"))
                    .unwrap_or("")
                    .to_string();
                Err(CliError::Verify(first))
            }
        }
        Command::Figures {
            id,
            out,
            t_max,
            samples,
        } => {
            if !(t_max > 0.0 && t_max <= config::MAX_T_MAX) || samples < 2 {
                return Err(CliError::Usage(format!(
                    "need 0 < t_max <= {} and samples >= 2",
                    config::MAX_T_MAX
                )));
            }
            for path in commands::figures(&id, &out, t_max, samples)? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

/// Parse `args`, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
