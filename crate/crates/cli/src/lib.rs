//! Batch experiment driver: JSON configs in, a JSONL record and a CSV summary out.
//!
//! Every number a run emits is fixed by the config and its base seed, whatever the size
//! of the worker pool.

pub mod config;
pub mod error;
pub mod record;
pub mod run;

pub use config::{Experiment, ExperimentConfig, KINDS};
pub use error::{CliError, CliResult};
pub use record::{emit, Cell, ResultRecord, Table};
pub use run::{run_experiment, run_with_workers, workers_from_env};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
