//! Batch command-line front end for the caption diversity metrics: dataset
//! ingest, corpus evaluation with report and export writing, IDF building,
//! and correlation against human judgments.

pub mod args;
pub mod config;
pub mod correlate;
pub mod dataset;
pub mod error;
pub mod run;

pub use error::{CliError, Result};
