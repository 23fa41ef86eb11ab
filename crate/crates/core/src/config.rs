// Copyright 2026 MacroQ Contributors
// SPDX-License-Identifier: Apache-2.0

//! Numerical tolerances and resource limits, kept in one place.

use serde::{Deserialize, Serialize};

/// Environment variable that caps the total Hilbert-space dimension `N^M`.
pub const MAX_DIM_ENV: &str = "MACROQ_MAX_DIM";

/// Default cap on `N^M` when [`MAX_DIM_ENV`] is unset.
pub const DEFAULT_MAX_DIM: usize = 4096;

/// Reads the dimension budget from the environment.
///
/// Unparsable or zero values fall back to [`DEFAULT_MAX_DIM`].
pub fn max_dim() -> usize {
    std::env::var(MAX_DIM_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_MAX_DIM)
}

/// Every tolerance the crate checks against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Max population allowed on the top Fock level of any mode.
    pub tail: f64,
    /// Pure-state normalization.
    pub norm: f64,
    /// Max entrywise deviation from Hermiticity.
    pub hermitian: f64,
    /// |Tr ρ - 1|.
    pub trace: f64,
    /// Smallest admissible eigenvalue of a density matrix.
    pub psd_floor: f64,
    /// Absolute imaginary residue allowed on traces that are real analytically.
    pub imag_residue: f64,
    /// Agreement between the three-term and two-term evaluations of I.
    pub i_forms: f64,
    /// |I - (C - M P)/2|.
    pub identity: f64,
    /// |I - (chi2/4 - M/2)| for pure states.
    pub pure_relation: f64,
    /// Convex weights must sum to one within this.
    pub weights: f64,
    /// Relative agreement between the operator and Wigner pipelines.
    pub cross_pipeline: f64,
    /// Estimated relative change of the Wigner C integral on halving the step.
    pub resolution: f64,
    /// Integral of a Wigner grid must be one within this.
    pub grid_normalization: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tail: 1e-12,
            norm: 1e-10,
            hermitian: 1e-10,
            trace: 1e-10,
            psd_floor: -1e-8,
            imag_residue: 1e-10,
            i_forms: 1e-10,
            identity: 1e-9,
            pure_relation: 1e-10,
            weights: 1e-12,
            cross_pipeline: 1e-3,
            resolution: 1e-4,
            grid_normalization: 1e-6,
        }
    }
}

impl Tolerances {
    /// Multiplies every tolerance by `factor` (the floor keeps its sign).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            tail: self.tail * factor,
            norm: self.norm * factor,
            hermitian: self.hermitian * factor,
            trace: self.trace * factor,
            psd_floor: self.psd_floor * factor,
            imag_residue: self.imag_residue * factor,
            i_forms: self.i_forms * factor,
            identity: self.identity * factor,
            pure_relation: self.pure_relation * factor,
            weights: self.weights * factor,
            cross_pipeline: self.cross_pipeline * factor,
            resolution: self.resolution * factor,
            grid_normalization: self.grid_normalization * factor,
        }
    }
}
