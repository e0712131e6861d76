//! Configuration, output and subcommand drivers behind the `jetflow` binary.

pub mod commands;
pub mod config;
pub mod output;
