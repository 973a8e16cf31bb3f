//! The `ied` command-line harness: argument parsing, dispatch, and the
//! exit-code contract (0 success, 2 validation failure, 3 data-dependent
//! failure; errors as single-line JSON on standard error).

mod args;
mod commands;
mod experiments;
mod output;

use clap::Parser;

pub fn run() -> i32 {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            output::print_error("argument", e.to_string().trim_end());
            return 2;
        }
    };
    match commands::dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            let (kind, code) = e.classify();
            output::print_error(kind, &e.to_string());
            code
        }
    }
}
