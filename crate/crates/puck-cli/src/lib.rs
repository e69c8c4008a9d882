//! Library half of the `puck` binary: ingestion, run configuration,
//! report emission, the demo fixture generator, and the command handlers.

pub mod cli;
pub mod commands;
pub mod config;
pub mod demo;
pub mod ingest;
pub mod report;

pub use cli::Cli;
pub use commands::run;
