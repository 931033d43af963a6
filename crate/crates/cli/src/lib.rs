//! Library side of the `cpshield` command-line tool: configuration
//! loading, dataset serialization and the subcommand implementations.
//! The binary only parses flags and wires these together.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod error;

pub use config::{LoadedConfig, RunConfig};
pub use dataset::Dataset;
pub use error::CliError;
