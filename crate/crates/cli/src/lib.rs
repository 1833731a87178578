//! Library side of the `dca` command: configuration, output files and the
//! three subcommands.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
