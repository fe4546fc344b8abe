//! Driver for the `rpm` binary: configuration, job dispatch and output.

pub mod config;
pub mod output;
pub mod run;
