use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

mod commands;
mod verify;

use commands::{Cli, Failure};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match commands::run(cli, &mut out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {}", msg);
            2
        }
        Err(Failure::Verification(msg)) => {
            if !msg.is_empty() {
                let _ = writeln!(out, "{}", msg);
            }
            1
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
