use std::process::ExitCode;

use clap::Parser;
use fraccob_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match fraccob_cli::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
