//! `opkz`: batch front end for computing, verifying and exporting results.

mod cache;
mod commands;
mod config;
mod error;
mod report;
mod suites;

use std::process::ExitCode;

use clap::Parser;

use cache::Cache;
use config::{Cli, Command, RunConfig};
use error::{CliError, Result};

fn run(cfg: &RunConfig) -> Result<report::Report> {
    if let Some(jobs) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let cache = cfg.cache_dir.as_deref().map(Cache::open).transpose()?;
    let cache = cache.as_ref();
    match &cfg.command {
        Command::Dims => commands::dims(cfg),
        Command::Homology { target, chi } => commands::homology(cfg, cache, *target, *chi),
        Command::Check { suite, m, cases } => suites::run(cfg, *suite, *m, *cases),
        Command::Omega => commands::omega(cfg, cache),
        Command::Phi => commands::phi(cfg, cache),
        Command::Psi => commands::psi(cfg, cache),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{}", e);
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{}", e);
            return ExitCode::from(3);
        }
    };
    let outcome = RunConfig::from_cli(cli).and_then(|cfg| run(&cfg).map(|rep| (cfg, rep)));
    match outcome {
        Ok((cfg, rep)) => {
            print!("{}", rep.render(cfg.out));
            if rep.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("opkz: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
