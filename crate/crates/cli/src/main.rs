use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use fairmech_cli::args::Cli;
use fairmech_cli::execute;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(outcome) => {
            let written = match &cli.global.out {
                Some(path) => std::fs::write(path, &outcome.report),
                None => std::io::stdout().write_all(outcome.report.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(fairmech_cli::EXIT_USAGE);
            }
            ExitCode::from(outcome.code)
        }
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
