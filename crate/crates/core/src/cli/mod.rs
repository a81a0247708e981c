//! File formats, the fixture catalog, run reports and command drivers.

mod app;
pub mod catalog;
pub mod format;
pub mod report;
pub mod run;

pub use app::{main_with_args, Cli, Command};
pub use format::{KnotFile, LoadedKnot, PatternFile};
pub use report::{emit_plot_data, Check, RunReport, Verdict};
pub use run::{resolve_knot, resolve_pattern, run_verify_inequality, PipelineOptions};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("invariant violated ({invariant}): {detail}")]
    Invariant { invariant: String, detail: String },
    #[error("precondition violated ({precondition}): {detail}")]
    Precondition {
        precondition: String,
        detail: String,
    },
}

/// Exit status for input and precondition errors.
pub const EXIT_INPUT_ERROR: i32 = 2;
