use std::process::ExitCode;

use clap::Parser;
use vibronic_echo_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.execute() {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("vibronic-echo: {error}");
            ExitCode::from(error.exit_code() as u8)
        }
    }
}
