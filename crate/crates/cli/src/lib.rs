//! Command-line front end: single evaluations, τ sweeps, per-τ optimization,
//! figure datasets and the oracle audit, written as CSV or JSON.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod audit;
pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod output;

use std::ffi::OsString;

use clap::Parser;

pub use args::Cli;
pub use error::{CliError, Result};

/// Cap rayon's pool at `LGI_THREADS` when it is set.
pub fn configure_threads() -> Result<()> {
    let Some(raw) = std::env::var_os("LGI_THREADS") else { return Ok(()) };
    let n: usize = raw
        .to_str()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("LGI_THREADS must be a positive integer, got {raw:?}")))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    configure_threads()?;
    match &cli.command {
        args::Command::K3(a) => commands::cmd_k3(a),
        args::Command::Sweep(a) => commands::cmd_sweep(a),
        args::Command::Optimize(a) => commands::cmd_optimize(a),
        args::Command::Figure(a) => {
            let data = figures::build(a)?;
            output::emit(data.config.output.as_deref(), data.config.format, &data.config.provenance(), &data.table)?;
            data.failure.map_or(Ok(()), Err)
        }
        args::Command::OracleAudit(a) => commands::cmd_oracle_audit(a),
    }
}

/// Parse, run, and return the process exit code. Help and version requests exit 0.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("lgi: {e}");
            e.exit_code()
        }
    }
}
