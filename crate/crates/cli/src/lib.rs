//! Session language and command-line driver for `pdcom`.

mod cli;
pub mod commands;
pub mod dsl;
pub mod env;

pub use cli::{run_cli, CliOutput, EXIT_FAIL, EXIT_PARSE, EXIT_PASS, EXIT_USAGE};
