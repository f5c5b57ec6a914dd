//! Command-line front end for `netdyn-core`: JSON network files, analysis
//! reports and CSV trajectories.

pub mod args;
pub mod commands;
pub mod error;
pub mod format;
pub mod network;
pub mod trajectory;

pub use commands::run;
pub use error::{CliError, Result};
