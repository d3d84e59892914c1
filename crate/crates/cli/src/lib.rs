//! Library side of the `qsdc` binary: argument types, command execution,
//! and a parser for the structured output stream.

pub mod args;
pub mod parse;
pub mod run;

pub use args::{Cli, Command};
pub use parse::{parse_structured, ParsedOutput};
pub use run::execute;
