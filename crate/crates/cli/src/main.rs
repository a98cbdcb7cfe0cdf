//! `depgraph`: rebuild a versioned dependency graph from metadata records
//! and report usage, popularity and timeliness metrics.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 non-convergence.

mod args;
mod pipeline;
mod report;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::Cli;

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            // clap renders help to stdout and errors to stderr
            let _ = e.print();
            return code;
        }
    };
    match pipeline::run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
