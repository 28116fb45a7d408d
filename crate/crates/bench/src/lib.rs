//! Experiment harness for one-bit phase retrieval: sweeps and convergence
//! studies that emit CSV plus a JSON manifest able to replay the run.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod run;
pub mod stats;

pub use config::{ExperimentConfig, ExperimentKind, Manifest, Refine};
pub use error::{BenchError, BenchResult};
pub use run::{execute, run, RunOutput};
