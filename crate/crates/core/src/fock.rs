// Copyright 2026 MacroQ Contributors
// SPDX-License-Identifier: Apache-2.0

//! Truncated Fock-space ladder operators and dimensionless quadratures.
//!
//! Each mode keeps levels `0..N`. Multimode operators are Kronecker products
//! with identities on the other modes, mode 1 being the slowest index. In units
//! where `[q, p] = i`:
//!
//! ```text
//! q = (a + a†)/√2        p = (a - a†)/(i√2)
//! ```
//!
//! Truncation breaks the canonical commutator on the top level only, so
//! operator identities are asserted on the block `n < N-1`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::config;
use crate::error::{Error, Result};
use crate::linalg::{expm, tensor_product, Complex64, ComplexMatrix};

/// Number of modes `M` and per-mode truncation `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeSpec {
    pub num_modes: usize,
    pub truncation: usize,
}

impl ModeSpec {
    /// Validates `M ≥ 1`, `N ≥ 2` and `N^M` against the dimension budget.
    pub fn new(num_modes: usize, truncation: usize) -> Result<Self> {
        Self::with_budget(num_modes, truncation, config::max_dim())
    }

    pub fn single(truncation: usize) -> Result<Self> {
        Self::new(1, truncation)
    }

    pub fn with_budget(num_modes: usize, truncation: usize, budget: usize) -> Result<Self> {
        if num_modes < 1 {
            return Err(Error::InvalidParameter("num_modes must be at least 1".into()));
        }
        if truncation < 2 {
            return Err(Error::InvalidParameter(format!(
                "truncation must be at least 2, got {truncation}"
            )));
        }
        let dim = (0..num_modes)
            .try_fold(1usize, |acc, _| acc.checked_mul(truncation))
            .unwrap_or(usize::MAX);
        if dim > budget {
            return Err(Error::ResourceLimit { dim, budget });
        }
        Ok(Self {
            num_modes,
            truncation,
        })
    }

    /// Total Hilbert-space dimension `N^M`.
    pub fn dim(&self) -> usize {
        self.truncation.pow(self.num_modes as u32)
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode == 0 || mode > self.num_modes {
            return Err(Error::ModeOutOfRange {
                mode,
                num_modes: self.num_modes,
            });
        }
        Ok(())
    }

    /// Per-mode Fock indices of a flat basis index (mode 1 first).
    pub fn decompose(&self, mut index: usize) -> Vec<usize> {
        let mut levels = vec![0; self.num_modes];
        for slot in levels.iter_mut().rev() {
            *slot = index % self.truncation;
            index /= self.truncation;
        }
        levels
    }

    /// Flat basis index of per-mode Fock levels.
    pub fn compose(&self, levels: &[usize]) -> usize {
        levels.iter().fold(0, |acc, &n| acc * self.truncation + n)
    }
}

impl fmt::Display for ModeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M={} N={} (dim {})", self.num_modes, self.truncation, self.dim())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OpKind {
    Annihilation,
    Creation,
    Q,
    P,
    Number,
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OpKind::Annihilation => "a",
            OpKind::Creation => "a†",
            OpKind::Q => "q",
            OpKind::P => "p",
            OpKind::Number => "n",
        };
        f.write_str(s)
    }
}

/// A mode operator embedded in the full `N^M` space.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeOperator {
    pub spec: ModeSpec,
    pub mode: usize,
    pub kind: OpKind,
    pub matrix: ComplexMatrix,
}

impl ModeOperator {
    pub fn label(&self) -> String {
        format!("{}_{}", self.kind, self.mode)
    }
}

/// Single-mode lowering matrix: `(n-1, n) = √n`.
pub fn single_annihilation(truncation: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(truncation, truncation);
    for n in 1..truncation {
        m[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    m
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` on `mode` (1-based).
pub fn embed_single_mode(op: &ComplexMatrix, spec: ModeSpec, mode: usize) -> Result<ComplexMatrix> {
    spec.check_mode(mode)?;
    if op.shape() != (spec.truncation, spec.truncation) {
        return Err(Error::DimensionMismatch {
            op: "embed_single_mode",
            left: op.shape(),
            right: (spec.truncation, spec.truncation),
        });
    }
    let before = spec.truncation.pow(mode as u32 - 1);
    let after = spec.truncation.pow((spec.num_modes - mode) as u32);
    let mut out = op.clone();
    if before > 1 {
        out = tensor_product(&ComplexMatrix::identity(before), &out);
    }
    if after > 1 {
        out = tensor_product(&out, &ComplexMatrix::identity(after));
    }
    Ok(out)
}

fn single(kind: OpKind, n: usize) -> ComplexMatrix {
    let a = single_annihilation(n);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match kind {
        OpKind::Annihilation => a,
        OpKind::Creation => a.adjoint(),
        OpKind::Q => a.add(&a.adjoint()).expect("same shape").scale_real(s),
        // (a - a†)/(i√2) = -i(a - a†)/√2
        OpKind::P => a
            .sub(&a.adjoint())
            .expect("same shape")
            .scale(Complex64::new(0.0, -s)),
        OpKind::Number => {
            let diag: Vec<f64> = (0..n).map(|k| k as f64).collect();
            ComplexMatrix::from_real_diagonal(&diag)
        }
    }
}

pub fn mode_operator(spec: ModeSpec, mode: usize, kind: OpKind) -> Result<ModeOperator> {
    spec.check_mode(mode)?;
    let matrix = embed_single_mode(&single(kind, spec.truncation), spec, mode)?;
    Ok(ModeOperator {
        spec,
        mode,
        kind,
        matrix,
    })
}

pub fn annihilation_op(spec: ModeSpec, mode: usize) -> Result<ModeOperator> {
    mode_operator(spec, mode, OpKind::Annihilation)
}

pub fn creation_op(spec: ModeSpec, mode: usize) -> Result<ModeOperator> {
    mode_operator(spec, mode, OpKind::Creation)
}

pub fn quadrature_q(spec: ModeSpec, mode: usize) -> Result<ModeOperator> {
    mode_operator(spec, mode, OpKind::Q)
}

pub fn quadrature_p(spec: ModeSpec, mode: usize) -> Result<ModeOperator> {
    mode_operator(spec, mode, OpKind::P)
}

pub fn number_op(spec: ModeSpec, mode: usize) -> Result<ModeOperator> {
    mode_operator(spec, mode, OpKind::Number)
}

/// Truncated displacement `exp(β a† - β* a)` on one mode.
///
/// The generator is anti-Hermitian in the truncated space, so the result is
/// unitary, but it only acts like a true displacement on states supported
/// well below the top level.
pub fn displacement_op(spec: ModeSpec, mode: usize, beta: Complex64) -> Result<ComplexMatrix> {
    spec.check_mode(mode)?;
    let a = single_annihilation(spec.truncation);
    let gen = a.adjoint().scale(beta).sub(&a.scale(beta.conj()))?;
    embed_single_mode(&expm(&gen)?, spec, mode)
}

/// Shared, lazily filled store of mode operators keyed by `(spec, mode, kind)`.
///
/// Safe for concurrent readers; a miss takes the write lock once.
#[derive(Debug, Default)]
pub struct OperatorCache {
    ops: RwLock<HashMap<(ModeSpec, usize, OpKind), Arc<ModeOperator>>>,
}

impl OperatorCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, spec: ModeSpec, mode: usize, kind: OpKind) -> Result<Arc<ModeOperator>> {
        let key = (spec, mode, kind);
        if let Some(op) = self.ops.read().expect("operator cache poisoned").get(&key) {
            return Ok(Arc::clone(op));
        }
        let op = Arc::new(mode_operator(spec, mode, kind)?);
        let mut guard = self.ops.write().expect("operator cache poisoned");
        Ok(Arc::clone(guard.entry(key).or_insert(op)))
    }

    pub fn len(&self) -> usize {
        self.ops.read().expect("operator cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Commutator `AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)?.sub(&b.matmul(a)?)
}

#[cfg(test)]
pub(crate) fn basis_vector(dim: usize, index: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[index] = Complex64::new(1.0, 0.0);
    v
}
