//! Experiment harness over the core numerics: configuration, orchestration,
//! and deterministic report emission. The binary in `main.rs` is a thin CLI
//! over this library so the acceptance suites can drive experiments
//! in-process.

// Bounds are spelled !(x > 0.0) so NaN fails closed.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiments;
pub mod report;
pub mod symbols;

use focklab_core::NumError;

/// Harness-level failure, split by the exit status it maps to: configuration
/// problems (status 2), numerical-budget refusals (status 3), and IO errors
/// (status 2). Contract violations are not errors; they are recorded in the
/// report and mapped to status 1 by the binary.
#[derive(Debug, Clone, thiserror::Error)]
pub enum HarnessError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error("budget: {0}")]
    Budget(String),
    #[error("numerics: {0}")]
    Num(NumError),
}

impl From<NumError> for HarnessError {
    fn from(e: NumError) -> Self {
        HarnessError::Num(e)
    }
}

impl HarnessError {
    /// CI contract: 2 = bad configuration, 3 = refused numerical budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::Io(_) => 2,
            HarnessError::Budget(_) => 3,
            HarnessError::Num(e) => match e {
                NumError::InvalidArgument(_) => 2,
                NumError::Budget(_) | NumError::PaperModeSymbolic => 3,
                NumError::ProjectionTail { .. } => 3,
            },
        }
    }
}
