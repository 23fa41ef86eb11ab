// Copyright 2026 MacroQ Contributors
// SPDX-License-Identifier: Apache-2.0

//! Phase-space measures of macroscopic quantum coherence for bosonic states.
//!
//! Two measures are computed for density matrices on a truncated multimode
//! Fock space:
//!
//! * `I = Σₘ Tr[½ρ²a†ₘaₘ + ½ρa†ₘaₘρ − ρaₘρa†ₘ]`, which equals `(C − M·P)/2`;
//! * `χ² = 2C/P`, the phase-space structure measure,
//!
//! where `P = Tr ρ²` is the purity and
//! `C = Σₘ Tr[ρ²qₘ² + ρ²pₘ² − ρqₘρqₘ − ρpₘρpₘ]`. For single-mode states `C`
//! and `P` are also obtained from the Wigner function as
//! `C = π ∫ |∇W|² dq dp` and `P = 2π ∫ W² dq dp`, giving an independent
//! pipeline to cross-check the operator traces.

// Checks are written `!(x < tol)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod family;
pub mod fock;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod random;
pub mod states;
pub mod sweep;
pub mod verify;
pub mod wigner;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use fock::{ModeSpec, OpKind, OperatorCache};
pub use linalg::{Complex64, ComplexMatrix};
pub use measures::{measure_report, MeasureReport, Pipeline};
pub use states::{DensityMatrix, GaussianSpec, PureState};
pub use wigner::{GridSpec, PhaseSpaceGrid};
