//! Library surface of the CLI: the on-disk formats and the subcommand
//! implementations, kept separate from argument parsing so tests can drive
//! them directly.

pub mod commands;
pub mod formats;
