//! Configuration, polar ingest, CSV telemetry, plot scripts and the command
//! line around `metamorph-core`.

pub mod app;
pub mod config;
pub mod error;
pub mod plot;
pub mod polars;
pub mod telemetry;

pub use error::CliError;
