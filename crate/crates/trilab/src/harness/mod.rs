//! Multi-run orchestration: seed sweeps over a grid of n, persistence,
//! terminal-exponent regression, and envelope-violation reporting.

mod config;
pub mod csv;
mod fit;
mod report;
mod sweep;

pub use config::{ConfigError, SweepConfig};
pub use csv::{read_checkpoints, write_checkpoints, CheckpointRow, CsvError, CSV_HEADER};
pub use fit::{fit_exponent, FitError, FitResult, PerSize};
pub use report::{violation_report, RunReport, TrajectoryPoint, ViolationReport};
pub use sweep::{read_summary, run_one, run_sweep, SweepError, SweepOutcome, SweepSummary, SUMMARY_FILENAME};
