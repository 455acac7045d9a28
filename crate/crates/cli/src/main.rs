use std::process::ExitCode;

use clap::Parser;
use theta_heights::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("theta-heights: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
