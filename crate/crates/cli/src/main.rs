mod args;
mod commands;
mod error;
mod input;
mod log;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, SbmCommand};
use error::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} threads: {e}", cli.threads)))?;
    let threads = pool.current_num_threads();
    pool.install(|| match &cli.command {
        Command::Estimate(a) => commands::estimate(a, threads),
        Command::Spectrum(a) => commands::spectrum(a, threads),
        Command::Compare(a) => commands::compare(a, threads),
        Command::Bootstrap(a) => commands::bootstrap(a, threads),
        Command::Sbm(SbmCommand::Engagement(a)) => commands::sbm_engagement(a, threads),
        Command::Sbm(SbmCommand::Imbalance(a)) => commands::sbm_imbalance(a, threads),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
