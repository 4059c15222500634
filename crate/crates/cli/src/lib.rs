//! Command-line front end for the `effham` toolkit: TOML run configs, CSV
//! tables, marching-squares contours and the `effham` subcommands.

pub mod commands;
pub mod config;
pub mod contour;
pub mod error;
pub mod table_io;

pub use error::{CliError, Result};

/// Builds the global worker pool from `EFFHAM_THREADS` when it is set.
/// Results do not depend on the thread count.
pub fn init_threads() -> Result<()> {
    let Ok(raw) = std::env::var("EFFHAM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Threads(format!("expected a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Threads(e.to_string()))
}

/// Parses a comma-separated list of numbers.
pub fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("not a number: '{t}'")))
        .collect()
}
