use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use seqwit_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut buf = Vec::new();
    match execute(&cli.command, &mut buf) {
        Ok(()) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(&buf).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("seqwit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
