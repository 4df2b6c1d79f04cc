//! Experiment driver for the `rdlb-core` simulator: configuration files,
//! experiment matrices, CSV reports and trace files.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod io;
pub mod matrix;
pub mod scenario;
pub mod theory;

pub use config::{ExperimentConfig, RdlbMode, WorkloadChoice};
pub use error::{Error, Result};
pub use matrix::{run_matrix, MatrixReport};
pub use scenario::{FailureCount, Scenario};
