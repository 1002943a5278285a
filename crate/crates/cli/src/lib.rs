//! `mesa` command-line front end: configuration, CSV/JSON/SVG outputs and
//! the five analysis subcommands.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod input;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::commands::Report;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult, EXIT_USAGE};

/// Effective configuration and output directory for a parsed command line.
pub fn resolve(cli: &Cli) -> CliResult<(RunConfig, PathBuf)> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cli.command.apply(&mut cfg);
    cfg.validate()?;
    let out = cli
        .out_dir
        .clone()
        .or_else(|| cfg.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    Ok((cfg, out))
}

pub fn execute(cli: &Cli) -> CliResult<Report> {
    let (cfg, out) = resolve(cli)?;
    match &cli.command {
        Command::Modes(_) => commands::modes(&cfg, &out),
        Command::FieldMap(a) => commands::field(&cfg, &out, a.parity, a.m, a.r),
        Command::FitJunctions(a) => commands::fit_junctions(&cfg, &out, &a.input),
        Command::Photons(a) => commands::photons(&cfg, &out, &a.input),
        Command::LinkBudget(_) => commands::link_budget(&cfg, &out),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let _ = write!(stdout, "{}", report.summary);
            for f in &report.files {
                let _ = writeln!(stdout, "wrote {}", f.display());
            }
            0
        }
        Err(e) => report_error(&e, stderr),
    }
}

fn report_error(e: &CliError, stderr: &mut dyn Write) -> u8 {
    let _ = writeln!(stderr, "error: {e}");
    e.exit_code()
}
