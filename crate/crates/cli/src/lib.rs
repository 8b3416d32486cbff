//! Configuration, logging, snapshots, frames and log analysis for the
//! `replicon` binary.

pub mod analyze;
pub mod commands;
pub mod config;
pub mod metrics;
pub mod snapshot;
pub mod svg;

pub use config::ConfigFile;
