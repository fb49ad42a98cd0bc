//! Std companion to rcmlab-core: file formats, a rayon executor, experiment
//! drivers and the command-line interface.

pub mod cli;
pub mod config;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod io;
pub mod record;

pub use error::{CliError, CliResult};
