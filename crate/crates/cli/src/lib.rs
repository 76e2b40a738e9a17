//! File formats, configuration parsing and the reproduction engine behind
//! the `photonstat` command-line tool.

pub mod commands;
pub mod config_io;
pub mod csv_out;
pub mod error;
pub mod manifest;
pub mod reproduce;
pub mod stream_io;
pub mod units;

pub use error::CliError;
