//! Command-line front end: document I/O, subcommands and SVG rendering.

pub mod commands;
pub mod render;

pub use commands::{run, Cli, Command};
