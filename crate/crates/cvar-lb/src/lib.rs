//! Experiment orchestration, report formats and the `cvar-lb` command line
//! on top of [`cvar_lb_core`].
//!
//! An [`ExperimentConfig`] is built from a flat key/value parameter map,
//! validated in one pass, run by [`run_experiment`] and written with
//! [`emit_report`].

pub mod config;
mod error;
pub mod experiment;
pub mod parallel;
pub mod report;

pub use config::{ExperimentConfig, ExperimentKind, OutputFormat, ParamValue, Problem};
pub use error::{CliError, FieldError, ValidationError};
pub use experiment::{run_experiment, ExperimentReport, ReportMetadata, ReportRow};
pub use report::{emit_report, format_number, write_csv, write_json};
