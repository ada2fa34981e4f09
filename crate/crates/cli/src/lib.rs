//! Batch driver for convergence, work-precision and phase studies of the
//! WKB marching schemes in `wkb_march`.

pub mod config;
pub mod error;
pub mod output;
pub mod problem;
pub mod run;

pub use config::{ErrorFrame, ExperimentConfig, Format, Problem};
pub use error::CliError;
pub use run::{run_convergence, run_phase_study, run_solve, run_work_precision, RunRecord, SeriesFit, Study, Table};
