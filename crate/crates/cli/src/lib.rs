//! Command-line driver: single-point analysis, optimization, technique
//! selection, Monte-Carlo validation and the two parameter sweeps.
//!
//! Exit codes: 0 success, 2 usage or validation, 3 numerical failure,
//! 4 insufficient Monte-Carlo data.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use crate::args::{Cli, Command, Format};
use crate::config::{Settings, D_GRID, LAMBDA_GRID};
use crate::error::{CliError, EXIT_USAGE};
use crate::output::emit;

/// Parses `args` (program name first), runs the subcommand and returns
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                return EXIT_USAGE;
            }
            let _ = stdout.write_all(text.as_bytes());
            return 0;
        }
    };
    match dispatch(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(
    command: &Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    match command {
        Command::Analytic { common, design } => {
            let settings = Settings::new(common)?;
            emit(&commands::analytic(&settings, design)?, &settings, stdout)?;
        }
        Command::Optimize { common } => {
            let settings = Settings::new(common)?;
            emit(&commands::optimize(&settings)?, &settings, stdout)?;
        }
        Command::Select { common } => {
            let settings = Settings::new(common)?;
            let report = commands::select(&settings)?;
            emit(&report, &settings, stdout)?;
            let _ = writeln!(stderr, "{}", report.verdict);
        }
        Command::McValidate { common, design, mc } => {
            let settings = Settings::new(common)?;
            let report = commands::mc_validate(&settings, design, mc)?;
            return commands::emit_validation(&report, &settings, stdout, stderr);
        }
        Command::SweepD { common, grid, mc } => {
            let settings = Settings::new(common)?;
            let grid = settings.grid(grid, D_GRID)?;
            let trials = settings.trials(mc, None)?;
            let report = sweep::sweep_distance(&settings.params, &grid, trials.as_ref())?;
            emit(&report, &settings, stdout)?;
            if settings.format == Format::Csv {
                match report.d_star {
                    Some(d) => {
                        let _ = writeln!(stderr, "d_star={d}");
                    }
                    None => {
                        let _ = writeln!(stderr, "d_star={}", report.d_star_status);
                    }
                }
            }
        }
        Command::SweepLambda { common, grid } => {
            let settings = Settings::new(common)?;
            let grid = settings.grid(grid, LAMBDA_GRID)?;
            let report = sweep::sweep_density(&settings.params, &grid)?;
            emit(&report, &settings, stdout)?;
            if !report.monotone {
                let _ = writeln!(stderr, "warning: d_star is not nondecreasing in lambda_e");
            }
        }
    }
    Ok(0)
}
