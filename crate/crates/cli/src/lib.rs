//! Command-line driver for the MAD solver: single runs, parameter sweeps and
//! a Newton cross-check on registry problems.

pub mod config;
pub mod run;
pub mod sweep;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{ConfigError, PrecondChoice, RunConfig, Settings, SweepGrid};
pub use run::{exit_code, run_single, status_line, RunError};
pub use sweep::{run_sweep, sweep_rows, write_summary, SweepRow, SUMMARY_CSV_HEADER};
pub use verify::{run_verify, verify, Verification};

/// Exit code for invalid configuration.
pub const CONFIG_ERROR: i32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "mad",
    version,
    about = "Multisecant accelerated descent solver"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem and write its convergence history
    Solve(RunArgs),
    /// Solve over a grid of comma-separated q, alpha and beta values
    Sweep(RunArgs),
    /// Compare the solve against a dense Newton oracle
    Verify(RunArgs),
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// Registry problem name
    #[arg(long)]
    pub problem: Option<String>,
    /// Secant history depth
    #[arg(long)]
    pub q: Option<String>,
    /// Preconditioner scale
    #[arg(long)]
    pub alpha: Option<String>,
    /// Secant regularization
    #[arg(long)]
    pub beta: Option<String>,
    /// Step length cap
    #[arg(long = "delta-max")]
    pub delta_max: Option<String>,
    /// Iteration budget
    #[arg(long = "max-iter")]
    pub max_iter: Option<String>,
    /// Relative convergence tolerance
    #[arg(long = "eps-rel")]
    pub eps_rel: Option<String>,
    /// Absolute convergence tolerance
    #[arg(long = "eps-abs")]
    pub eps_abs: Option<String>,
    /// Relative singular value cutoff
    #[arg(long = "svd-cutoff")]
    pub svd_cutoff: Option<String>,
    /// Relative noise magnitude applied to every evaluation
    #[arg(long)]
    pub noise: Option<String>,
    /// Noise seed
    #[arg(long)]
    pub seed: Option<String>,
    /// identity, diagonal or oracle
    #[arg(long)]
    pub precond: Option<String>,
    /// History CSV path
    #[arg(long = "history-out")]
    pub history_out: Option<PathBuf>,
    /// Sweep summary CSV path
    #[arg(long = "summary-out")]
    pub summary_out: Option<PathBuf>,
    /// File of `key = value` settings; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl RunArgs {
    /// Config file settings overlaid with the explicit flags.
    pub fn settings(&self) -> Result<Settings, ConfigError> {
        let mut settings = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::new(),
        };
        let mut flags = Settings::new();
        let pairs: [(&str, Option<String>); 14] = [
            ("problem", self.problem.clone()),
            ("q", self.q.clone()),
            ("alpha", self.alpha.clone()),
            ("beta", self.beta.clone()),
            ("delta-max", self.delta_max.clone()),
            ("max-iter", self.max_iter.clone()),
            ("eps-rel", self.eps_rel.clone()),
            ("eps-abs", self.eps_abs.clone()),
            ("svd-cutoff", self.svd_cutoff.clone()),
            ("noise", self.noise.clone()),
            ("seed", self.seed.clone()),
            ("precond", self.precond.clone()),
            (
                "history-out",
                self.history_out.as_ref().map(|p| p.display().to_string()),
            ),
            (
                "summary-out",
                self.summary_out.as_ref().map(|p| p.display().to_string()),
            ),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                flags.set(key, v)?;
            }
        }
        settings.merge(flags);
        Ok(settings)
    }
}

/// Parses `args` and runs the chosen subcommand. Returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { CONFIG_ERROR } else { 0 };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match dispatch(&cli.command, out, err) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            CONFIG_ERROR
        }
    }
}

fn dispatch(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let text = |e: &dyn std::fmt::Display| e.to_string();
    match command {
        Command::Solve(args) => {
            let config = RunConfig::from_settings(&args.settings().map_err(|e| text(&e))?)
                .map_err(|e| text(&e))?;
            run_single(&config, out, err).map_err(|e| text(&e))
        }
        Command::Sweep(args) => {
            let (config, grid) = RunConfig::with_grid(&args.settings().map_err(|e| text(&e))?)
                .map_err(|e| text(&e))?;
            run_sweep(&config, &grid, out, err).map_err(|e| text(&e))
        }
        Command::Verify(args) => {
            let config = RunConfig::from_settings(&args.settings().map_err(|e| text(&e))?)
                .map_err(|e| text(&e))?;
            run_verify(&config, out).map_err(|e| text(&e))
        }
    }
}
