use std::io;
use std::process::ExitCode;

use atiyah_lab::commands::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli, &mut io::stdout().lock()) {
        Ok(exit) => exit,
        Err(err) => {
            eprintln!("error: {}", err.message);
            err.exit
        }
    };
    ExitCode::from(code as u8)
}
