//! `temporepair`: check, ground, explain and repair temporal DL-Lite KBs.
//!
//! Exit codes: 0 consistent or success, 1 inconsistent, 2 usage or input
//! error, 3 search budget exhausted.

mod args;
mod commands;
mod error;
mod ground;
mod report;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

fn init_logging() {
    env_logger::Builder::new()
        .filter_level(log::LevelFilter::Warn)
        .parse_env("TEMPOREPAIR_LOG")
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .init();
}

fn main() -> ExitCode {
    init_logging();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Check(a) => commands::check(a),
        Command::Translate(a) => commands::translate(a),
        Command::Explain(a) => commands::explain(a),
        Command::Repair(a) => commands::repair_cmd(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Gen(a) => commands::gen(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
