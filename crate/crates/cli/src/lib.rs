//! Command-line front end for `ofi-core`.

pub mod args;
pub mod commands;

use std::io::Write;

use anyhow::Result;
use ofi_core::Execution;

use args::{Cli, Command};

/// Execution strategy for `--workers`: one worker means sequential.
pub fn execution_for(workers: Option<usize>) -> Execution {
    match workers {
        Some(1) => Execution::Sequential,
        _ => Execution::default(),
    }
}

/// Runs the parsed command. `Ok(false)` means a verification failed.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    let exec = execution_for(cli.workers);
    match &cli.command {
        Command::Audit(args) => commands::cmd_audit(args, exec, out),
        Command::Scenario(args) => commands::cmd_scenario(args, out),
        Command::Dist(args) => commands::cmd_dist(args, exec, out),
        Command::Verify(args) => commands::cmd_verify(args, exec, out),
    }
}
