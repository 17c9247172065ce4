//! CSV ingestion, result files and the `rmtcorr` command line on top of
//! `rmtcorr-core`.

pub mod app;
pub mod config;
pub mod io;

pub use app::{load_source, run, CliError};
