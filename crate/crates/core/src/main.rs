use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = tradenet::cli::Cli::parse();
    ExitCode::from(tradenet::cli::run(cli))
}
