use std::process::ExitCode;

use clap::Parser;

use procstate::cli::{run, Cli, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::from(Cli::parse());
    match run(&config) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", err.diagnostic());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
