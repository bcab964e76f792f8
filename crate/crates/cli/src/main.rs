use std::process::ExitCode;

use clap::Parser;
use gaborlet_cli::config::threads_from_env;
use gaborlet_cli::{run, Cli, CliResult, RunConfig};

fn execute(cli: Cli) -> CliResult<bool> {
    if let Some(n) = threads_from_env()? {
        // fails only if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cfg = RunConfig::from_cli(cli)?;
    let outcome = run(&cfg)?;
    print!("{}", outcome.report);
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("gaborlet: {e}");
            ExitCode::from(2)
        }
    }
}
