use std::process::ExitCode;

use clap::Parser;
use sharegame::cli::{configure_workers, execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_workers().and_then(|()| execute(cli)) {
        Ok(stdout) => {
            print!("{stdout}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
