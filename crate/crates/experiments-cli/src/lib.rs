//! Experiment harness: configuration, runners and report output.

pub mod config;
pub mod report;
pub mod runs;
pub mod sim;

pub use config::{Experiment, ExperimentConfig};
pub use report::{ExperimentReport, Row, SlopeFit, Table, Verdict};
pub use runs::run;
