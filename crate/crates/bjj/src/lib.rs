//! Command-line driver for `bjj-core`: configuration, experiment runs,
//! deterministic parameter sweeps and CSV/JSON output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod run;

mod error;

pub use error::{CliError, Result};
