//! `dismantle` command-line tool.
//!
//! Exit status: 0 on success, 2 for usage and input problems, 3 when the
//! library reports a broken internal invariant.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Defaults, RunArgs, DEFAULT_ENSEMBLE};

#[derive(Parser)]
#[command(name = "dismantle", version, about = "Cost-aware network dismantling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the ensemble and write the best solution
    Dismantle(RunArgs),
    /// Compare trajectories across iteration multipliers
    Variability {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated iteration multipliers
        #[arg(long, value_delimiter = ',', default_value = "1,200,500")]
        d_list: Vec<usize>,
    },
    /// Time one dismantling round by phase
    Bench(RunArgs),
    /// Print dataset statistics as JSON
    Stats {
        #[arg(long)]
        input: PathBuf,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Dismantle(args) => {
            let cfg = args.resolve(Defaults {
                ensemble: DEFAULT_ENSEMBLE,
                reinsert: true,
            })?;
            commands::dismantle(&cfg)
        }
        Command::Variability { run, d_list } => {
            let cfg = run.resolve(Defaults {
                ensemble: 10,
                reinsert: false,
            })?;
            commands::variability(&cfg, &d_list)
        }
        Command::Bench(args) => {
            let cfg = args.resolve(Defaults {
                ensemble: 1,
                reinsert: true,
            })?;
            commands::bench(&cfg)
        }
        Command::Stats { input } => commands::stats(&input),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let internal = err
        .chain()
        .filter_map(|e| e.downcast_ref::<dismantle::Error>())
        .any(dismantle::Error::is_internal);
    if internal {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
