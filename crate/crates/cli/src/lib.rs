//! Library side of the `fraccob` binary.

pub mod args;
pub mod commands;
pub mod config;
pub mod format;

use anyhow::Result;

use args::{Cli, Command};

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Table(a) => commands::cmd_table(a),
        Command::Traj(a) => commands::cmd_traj(a),
        Command::Verify(v) => commands::cmd_verify(v),
        Command::Mlf(a) => commands::cmd_mlf(a),
    }
}
