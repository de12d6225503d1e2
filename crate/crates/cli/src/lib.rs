//! Command-line harness around `batchdispatch-core`.
//!
//! - [`commands`]: bodies of `eval`, `solve`, `simulate`, `tables` and `figure2`
//! - [`verify`]: the property suite behind `verify`
//! - [`parallel`]: multi-threaded simulation
//! - [`format`], [`manifest`], [`svg`]: artifact encodings

#![deny(unsafe_code)]
#![warn(missing_docs)]

pub mod commands;
mod error;
pub mod format;
pub mod manifest;
pub mod parallel;
pub mod svg;
pub mod verify;

pub use error::{CliError, Result};
