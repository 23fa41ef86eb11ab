// Copyright 2026 MacroQ Contributors
// SPDX-License-Identifier: Apache-2.0

//! Error type shared by every module of the crate.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {op} needs compatible shapes, got {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("mode index {mode} out of range 1..={num_modes}")]
    ModeOutOfRange { mode: usize, num_modes: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A state violates one of the density-matrix / pure-state invariants.
    #[error("invalid state: {invariant} violated ({detail})")]
    InvalidState {
        invariant: &'static str,
        detail: String,
    },

    #[error(
        "truncation too small: top Fock level holds {tail_mass:e} of the population \
         (tolerance {tolerance:e}); use truncation >= {required}"
    )]
    Truncation {
        tail_mass: f64,
        tolerance: f64,
        required: usize,
    },

    #[error("dimension {dim} exceeds the configured budget of {budget} (MACROQ_MAX_DIM)")]
    ResourceLimit { dim: usize, budget: usize },

    #[error("imaginary residue {residue:e} in {quantity} exceeds {tolerance:e}")]
    ImaginaryResidue {
        quantity: &'static str,
        residue: f64,
        tolerance: f64,
    },

    /// Two independent evaluations of the same quantity disagree.
    #[error("consistency check '{check}' failed: {left} vs {right} (|diff| = {diff:e}, tolerance {tolerance:e})")]
    Consistency {
        check: &'static str,
        left: f64,
        right: f64,
        diff: f64,
        tolerance: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("grid under-resolved: {0}")]
    Resolution(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Process exit codes of the command-line tool.
pub mod exit_code {
    pub const SUCCESS: i32 = 0;
    pub const VERIFICATION_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const TRUNCATION_OR_RESOURCE: i32 = 3;
    pub const CONSISTENCY: i32 = 4;
}

impl Error {
    /// Exit code the command-line tool reports for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Truncation { .. } | Error::ResourceLimit { .. } | Error::Resolution(_) => {
                exit_code::TRUNCATION_OR_RESOURCE
            }
            Error::Consistency { .. } | Error::ImaginaryResidue { .. } | Error::NonFinite { .. } => {
                exit_code::CONSISTENCY
            }
            Error::DimensionMismatch { .. }
            | Error::NotSquare { .. }
            | Error::ModeOutOfRange { .. }
            | Error::InvalidParameter(_)
            | Error::InvalidState { .. }
            | Error::Unsupported(_)
            | Error::Io(_)
            | Error::Json(_) => exit_code::USAGE,
        }
    }

    pub(crate) fn invalid_state(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidState {
            invariant,
            detail: detail.into(),
        }
    }

    pub(crate) fn consistency(check: &'static str, left: f64, right: f64, tolerance: f64) -> Self {
        Error::Consistency {
            check,
            left,
            right,
            diff: (left - right).abs(),
            tolerance,
        }
    }
}
