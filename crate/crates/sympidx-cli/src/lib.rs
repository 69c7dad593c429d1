//! Command-line front end of `sympidx`: spec ingestion, configuration,
//! seeded trial generation, dispatch, and JSON/CSV/table reports.

pub mod cli;
pub mod config;
pub mod error;
pub mod input;
pub mod random;
pub mod render;
pub mod trials;

pub use cli::{execute, run, Cli, Command, Outcome};
pub use config::{OutputFormat, RunConfig};
pub use error::CliError;
