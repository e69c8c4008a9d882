use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    // Usage errors exit with status 2 via clap; domain and I/O errors
    // exit 1 with a diagnostic naming the violated precondition.
    let cli = puck_cli::Cli::parse();
    match puck_cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
