//! File formats, reports, bundled models and the `subadj` command-line tool
//! on top of [`subadj_core`].

pub mod cli;
pub mod models;
pub mod report;
pub mod schema;
pub mod verify;

use thiserror::Error;

/// Everything the tool can fail with. Each variant has a stable code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] subadj_core::Error),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Json(String),
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Assertion(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        use subadj_core::Error as E;
        match self {
            CliError::Core(e) => match e {
                E::Parse(_) => "E_PARSE",
                E::LabelOutOfRange { .. } => "E_LABEL_RANGE",
                E::SizeMismatch { .. } => "E_SIZE",
                E::InvalidWeights(_) => "E_WEIGHTS",
                E::InvalidTree(_) => "E_TREE",
                E::InvalidInput(_) => "E_INPUT",
                E::NonIntegralMultiple { .. } => "E_NONINTEGRAL_M",
                E::DegenerateDirections(_) => "E_DEGENERATE",
                E::RankMismatch { .. } => "E_RANK",
                E::UnknownPoint(_) => "E_UNKNOWN_POINT",
                E::UnknownDivisor(_) => "E_UNKNOWN_DIVISOR",
                E::IntersectionBudget { .. } => "E_BUDGET",
                E::FiberIdentity(_) => "E_FIBER_IDENTITY",
                E::NotPullback(_) => "E_NOT_PULLBACK",
                E::FiberDegree(_) => "E_FIBER_DEGREE",
                E::PushedCoefficient { .. } => "E_PUSHED_COEFFICIENT",
                E::Singular => "E_SINGULAR",
            },
            CliError::Io(_) => "E_IO",
            CliError::Json(_) => "E_JSON",
            CliError::Schema(_) => "E_SCHEMA",
            CliError::Usage(_) => "E_USAGE",
            CliError::Assertion(_) => "E_ASSERTION",
        }
    }

    /// 1 for failed assertions, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Assertion(_) => 1,
            _ => 2,
        }
    }
}
