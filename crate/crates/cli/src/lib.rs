//! Library behind the `myers` command-line tool: scenario files, the four
//! workflows, sweeps and CSV output.

pub mod app;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod scenario;
pub mod sweep;

pub use app::run;
pub use error::CliError;
