use std::process::ExitCode;

use clap::Parser;
use edgeburst_cli::Cli;

fn main() -> ExitCode {
    // Exit 2 is reserved for runs that did not converge.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match cli.run() {
        Ok(outcome) => {
            for m in &outcome.messages {
                eprintln!("warning: {m}");
            }
            if outcome.converged {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
