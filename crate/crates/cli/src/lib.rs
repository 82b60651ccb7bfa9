//! Command-line front end: `spectrum`, `factorize`, `partner`, `verify` and
//! `gc-scan`.
//!
//! Exit codes: 0 success, 1 configuration error, 2 coalescence detected
//! (report carries `"regime": "broken-detected"`), 3 a check failed.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{Outcome, EXIT_CONFIG, EXIT_VERIFY};
use crate::config::{Format, Settings};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "ptsusy", version, about = "SUSY partner of a PT-symmetric imaginary square well in a box")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest real levels of H(+).
    Spectrum(CommonArgs),
    /// x_R1, D0, jumps and sampled W, V(-), V(+).
    Factorize(CommonArgs),
    /// Partner eigenfunctions for n = 0..N-1.
    Partner(CommonArgs),
    /// Full check battery; exit 3 if anything fails.
    Verify(CommonArgs),
    /// Critical coupling for a list of well half-widths.
    GcScan(ScanArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Box half-width.
    #[arg(long = "L", allow_hyphen_values = true)]
    pub big_l: Option<f64>,
    /// Well half-width.
    #[arg(long = "l", allow_hyphen_values = true)]
    pub l: Option<f64>,
    /// Coupling.
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
    /// Number of levels (or partner states).
    #[arg(long)]
    pub n: Option<usize>,
    /// Sample count (factorize, partner) or oracle grid (verify).
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `key=value` file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated well half-widths.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ls: Option<Vec<f64>>,
    /// Upper end of the coupling bracket.
    #[arg(long = "g-hi", allow_hyphen_values = true)]
    pub g_hi: Option<f64>,
}

impl CommonArgs {
    fn settings(&self) -> Result<Settings, CliError> {
        let base = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        Ok(base.overridden_by(Settings {
            big_l: self.big_l,
            l: self.l,
            g: self.g,
            n_levels: self.n,
            grid_points: self.grid,
            tolerance: self.tol,
            format: self.format,
            out: self.out.clone(),
            ls: None,
            g_hi: None,
        }))
    }
}

fn execute(command: &Command) -> Result<(Outcome, Format, Option<PathBuf>), CliError> {
    if let Command::GcScan(a) = command {
        let settings = a.common.settings()?.overridden_by(Settings {
            ls: a.ls.clone(),
            g_hi: a.g_hi,
            ..Settings::default()
        });
        let cfg = settings.scan_config()?;
        return Ok((commands::gc_scan(&cfg)?, cfg.output_format, cfg.output_path));
    }
    let (Command::Spectrum(a) | Command::Factorize(a) | Command::Partner(a) | Command::Verify(a)) = command else {
        unreachable!()
    };
    let cfg = a.settings()?.run_config()?;
    let outcome = match command {
        Command::Spectrum(_) => commands::spectrum(&cfg)?,
        Command::Factorize(_) => commands::factorize_cmd(&cfg)?,
        Command::Partner(_) => commands::partner_cmd(&cfg)?,
        Command::Verify(_) => commands::verify_cmd(&cfg)?,
        Command::GcScan(_) => unreachable!(),
    };
    Ok((outcome, cfg.output_format, cfg.output_path))
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Reports go to `--out` or standard output, messages to
/// standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok((outcome, format, path)) => {
            let text = outcome.rendered.render(format);
            match path {
                Some(path) => {
                    if let Err(e) = fs::write(&path, text) {
                        eprintln!("ptsusy: cannot write {}: {e}", path.display());
                        return EXIT_CONFIG;
                    }
                }
                None => print!("{text}"),
            }
            outcome.code
        }
        Err(e @ (CliError::Config(_) | CliError::Io(_) | CliError::Core(ptsusy::Error::Domain(_)))) => {
            eprintln!("ptsusy: {e}");
            EXIT_CONFIG
        }
        Err(CliError::Core(e)) => {
            eprintln!("ptsusy: {e}");
            EXIT_VERIFY
        }
    }
}
