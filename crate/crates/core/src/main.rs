use std::process::ExitCode;

use clap::Parser;
use infoclone::cli::{render, run, Cli, RunConfig};
use infoclone::Error;

/// Exit status: 0 success, 1 scientific check failed, 2 usage or runtime
/// error.
fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("infoclone: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> Result<bool, Error> {
    let config = RunConfig::from_cli(cli)?;
    let report = run(&config)?;
    let text = render(&config, &report)?;
    match &config.output_path {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?
        }
        None => print!("{text}"),
    }
    Ok(report.passed.unwrap_or(true))
}
