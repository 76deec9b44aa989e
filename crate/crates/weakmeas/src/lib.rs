//! Command-line driver for `weakmeas-core`: JSON config handling, figure
//! sweeps, distribution CSVs and pointer simulations.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod cli;
pub mod commands;
pub mod error;
pub mod figure;
pub mod settings;
pub mod table;

pub use error::{CliError, CliResult};
