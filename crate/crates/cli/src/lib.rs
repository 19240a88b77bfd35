//! File formats, plotting and the command-line front end for `shufflesor`.

pub mod args;
pub mod commands;
pub mod error;
pub mod history;
pub mod mtx;
pub mod plot;

pub use args::Cli;
pub use commands::run;
pub use error::{CliError, CliResult};
