use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use rectdisc::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match rectdisc::run(&cli) {
        Ok((text, global)) => {
            let written = match &global.out {
                Some(path) => std::fs::write(path, text.as_bytes()),
                None => std::io::stdout().lock().write_all(text.as_bytes()),
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("rectdisc: cannot write output: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("rectdisc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
