//! Command-line front end for the `extbc` model library.
//!
//! PoD is read and written in percent, hazards per year and spreads in
//! basis points per year; the library itself works in fractions.

pub mod args;
pub mod commands;
pub mod dataset;
pub mod error;
pub mod output;
pub mod report;
pub mod validate;

use std::ffi::OsString;

use clap::Parser;

pub use args::{Cli, Command, Options, ReportKind};
pub use dataset::{parse_dataset, DatasetError};
pub use error::{CliError, Result};

use commands::Curve;

pub fn run(cli: Cli) -> Result<()> {
    let mut o = cli.opts;
    if let Some(path) = o.config.clone() {
        o.merge_config_file(&path)?;
    }
    let table = match cli.command {
        Command::Pod => commands::curve_table(&o, Curve::Pod)?,
        Command::Hazard => commands::curve_table(&o, Curve::Hazard)?,
        Command::Spread => commands::curve_table(&o, Curve::Spread)?,
        Command::Density => commands::density_table(&o)?,
        Command::Calibrate => commands::calibrate_table(&o)?,
        Command::Report { kind } => report::run_report(kind, &o)?,
        Command::Validate => return validate::run(&o),
    };
    table.emit(o.out.as_deref())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
