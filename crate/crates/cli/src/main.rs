use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;

use config::{Config, Flags};

/// Polyrepresentation of query context with subjective logic, plus run
/// evaluation and rank correlation.
#[derive(Debug, Parser)]
#[command(name = "polyrep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dump the sorted term set of every topic, representation and level.
    Prep,
    /// Fuse representation pairs and print the per-level probability table.
    Polyrep,
    /// Score a run against qrels (MAP, NDCG, bpref, P@10, NDCG@10, MRR).
    Evaluate,
    /// Spearman's rho between fused belief/uncertainty and per-topic scores.
    /// Plot files are written only with --out.
    Correlate,
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let config = Config::resolve(&cli.flags)?;
    match cli.command {
        Command::Prep => commands::prep(&config),
        Command::Polyrep => commands::polyrep(&config),
        Command::Evaluate => commands::evaluate_cmd(&config),
        Command::Correlate => commands::correlate(&config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
