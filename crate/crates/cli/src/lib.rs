//! The `orderlab` command line: argument parsing, instance loading,
//! theorem wiring and output rendering.

pub mod args;
pub mod commands;
pub mod input;
pub mod theorems;

use args::Cli;
use commands::Output;

/// Runs a parsed command line. Failures print to stderr with their code.
pub fn run(cli: &Cli) -> (Output, Option<String>) {
    match commands::run(&cli.command) {
        Ok(o) => (o, None),
        Err(f) => (Output { stdout: String::new(), code: f.code }, Some(format!("error: {f}"))),
    }
}
