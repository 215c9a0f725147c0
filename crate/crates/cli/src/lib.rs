//! Batch front-end for `weylpath`: configuration files, subcommands and CSV
//! output.

pub mod config;
pub mod csv;
pub mod error;
pub mod runs;

pub use config::RunConfig;
pub use error::CliError;
