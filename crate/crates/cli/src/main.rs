use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use effham_cli::commands::{self, Check};
use effham_cli::config::LoadedConfig;
use effham_cli::{init_threads, parse_list, CliError};

#[derive(Parser)]
#[command(name = "effham", version, about = "Effective Hamiltonians of periodic Hamilton-Jacobi equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the tables requested by the config's pipelines.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the profile's structural hypotheses and print its decomposition.
    Decompose {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run diagnostics on saved tables, or on freshly computed direct tables.
    Diagnose {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Table CSV files to analyse (repeatable).
        #[arg(long = "table")]
        tables: Vec<PathBuf>,
        #[arg(long = "check", value_enum)]
        checks: Vec<Check>,
        /// Comma-separated levels for `--check levelset`.
        #[arg(long)]
        levels: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare discounted approximations with the big-T value.
    Discount {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated decreasing rates; overrides the config.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract level curves from a 2-D table as JSON.
    Contour {
        #[arg(long)]
        table: PathBuf,
        /// Comma-separated levels.
        #[arg(long)]
        levels: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn list(s: &str) -> effham_cli::Result<Vec<f64>> {
    parse_list(s).map_err(CliError::Config)
}

fn run(cli: Cli) -> effham_cli::Result<bool> {
    init_threads()?;
    match cli.command {
        Command::Sweep { config, out } => commands::sweep_command(&LoadedConfig::from_path(&config)?, out.as_deref()),
        Command::Decompose { config, out } => {
            commands::decompose_command(&LoadedConfig::from_path(&config)?, out.as_deref())
        }
        Command::Diagnose { config, tables, checks, levels, out } => {
            let loaded = config.as_deref().map(LoadedConfig::from_path).transpose()?;
            let levels = levels.as_deref().map(list).transpose()?.unwrap_or_default();
            commands::diagnose_command(loaded.as_ref(), &tables, &checks, &levels, out.as_deref())
        }
        Command::Discount { config, lambda, out } => {
            let lambda = lambda.as_deref().map(list).transpose()?;
            commands::discount_command(&LoadedConfig::from_path(&config)?, lambda.as_deref(), out.as_deref())
        }
        Command::Contour { table, levels, out } => {
            commands::contour_command(&table, &list(&levels)?, out.as_deref()).map(|_| true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
