//! Command-line front end: argument parsing, command dispatch and output
//! formats for the `theta-heights` binary.

pub mod cli;
pub mod commands;
pub mod table;

pub use cli::{run, Cli, CliError};
pub use table::{Cell, Table};
