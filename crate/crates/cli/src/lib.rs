//! File formats, generator, benchmark harness and subcommands behind the
//! `contact-lcp` binary.

pub mod bench;
pub mod commands;
mod error;
pub mod format;
pub mod gen;

pub use commands::{run, Cli, Outcome};
pub use error::CliError;
