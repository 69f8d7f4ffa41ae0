//! Experiment harness around `wlmf-core`: seeded Monte Carlo runs that write
//! CSV tables, JSON summaries and a reproducibility manifest.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
mod parallel;

pub use config::{EstimationMode, ExperimentKind, ExperimentSpec};
pub use error::{LabError, LabResult};
pub use experiments::run;
pub use output::{RunManifest, RunReport};
