// Copyright 2026 MacroQ Contributors
// SPDX-License-Identifier: Apache-2.0

//! Operator-trace evaluation of the coherence measures.
//!
//! `I` is evaluated twice, once term by term from its three-trace definition
//! and once from the cyclically reduced form `Σₘ(Tr[ρ²nₘ] − Tr[ρaₘρa†ₘ])`.
//! `C` is evaluated from the quadrature traces without reference to `I`, so the
//! identity `I = (C − M·P)/2` is a genuine cross-check.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::fock::{OpKind, OperatorCache};
use crate::linalg::{matmul, trace_of_product, Complex64};
use crate::states::{purity, DensityMatrix, PureState};

/// Normalization followed by every reported value.
pub const CONVENTION_NOTE: &str = "Wigner function normalized to unit integral with [q,p]=i; \
C = (2pi)^M/2 * sum_m integral(|dW/dq_m|^2 + |dW/dp_m|^2) and P = (2pi)^M * integral(W^2). \
Conventions that rescale W by 2^M report values differing by that factor; they are not used here.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    Operator,
    Wigner,
}

/// All measures of one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub pipeline: Pipeline,
    #[serde(rename = "I")]
    pub i: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "P")]
    pub p: f64,
    pub chi2: f64,
    pub num_modes: usize,
    pub truncation: usize,
    /// `|I − (C − M·P)/2|` with `I` from its own traces.
    pub identity_residual: f64,
    /// `|I − (χ²/4 − M/2)|`, present for pure-state reports.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pure_relation_residual: Option<f64>,
    /// Largest population on the top Fock level of any mode.
    pub max_tail_mass: f64,
    pub convention_note: String,
}

fn real(z: Complex64, quantity: &'static str) -> Result<f64> {
    let tol = Tolerances::default().imag_residue;
    if z.im.abs() > tol {
        return Err(Error::ImaginaryResidue {
            quantity,
            residue: z.im.abs(),
            tolerance: tol,
        });
    }
    Ok(z.re)
}

/// Literal three-term evaluation of I.
pub fn measure_i_three_term(rho: &DensityMatrix, cache: &OperatorCache) -> Result<f64> {
    let spec = rho.spec();
    let r = rho.matrix();
    let r2 = matmul(r, r)?;
    let mut total = Complex64::new(0.0, 0.0);
    for m in 1..=spec.num_modes {
        let a = cache.get(spec, m, OpKind::Annihilation)?;
        let ad = cache.get(spec, m, OpKind::Creation)?;
        let ada = matmul(&ad.matrix, &a.matrix)?;
        let first = trace_of_product(&r2, &ada)? * 0.5;
        let second = trace_of_product(&matmul(r, &ada)?, r)? * 0.5;
        let third = trace_of_product(&matmul(&matmul(r, &a.matrix)?, r)?, &ad.matrix)?;
        total += first + second - third;
    }
    real(total, "I (three-term)")
}

/// Cyclically reduced two-term evaluation of I.
pub fn measure_i_two_term(rho: &DensityMatrix, cache: &OperatorCache) -> Result<f64> {
    let spec = rho.spec();
    let r = rho.matrix();
    let r2 = matmul(r, r)?;
    let mut total = Complex64::new(0.0, 0.0);
    for m in 1..=spec.num_modes {
        let n = cache.get(spec, m, OpKind::Number)?;
        let a = cache.get(spec, m, OpKind::Annihilation)?;
        let ad = cache.get(spec, m, OpKind::Creation)?;
        // Tr[ρaρa†] = Tr[(aρ)(a†ρ)]
        let cross = trace_of_product(&matmul(&a.matrix, r)?, &matmul(&ad.matrix, r)?)?;
        total += trace_of_product(&r2, &n.matrix)? - cross;
    }
    real(total, "I (two-term)")
}

/// `I`, requiring the three-term and two-term forms to agree.
pub fn measure_i_with(rho: &DensityMatrix, cache: &OperatorCache) -> Result<f64> {
    measure_i_tol(rho, cache, &Tolerances::default())
}

pub fn measure_i_tol(rho: &DensityMatrix, cache: &OperatorCache, tol: &Tolerances) -> Result<f64> {
    let three = measure_i_three_term(rho, cache)?;
    let two = measure_i_two_term(rho, cache)?;
    let tol = tol.i_forms;
    if (three - two).abs() >= tol {
        return Err(Error::consistency("I three-term vs two-term", three, two, tol));
    }
    Ok(three)
}

pub fn measure_i(rho: &DensityMatrix) -> Result<f64> {
    measure_i_with(rho, &OperatorCache::new())
}

/// `C = Σₘ Tr[ρ²qₘ² + ρ²pₘ² − ρqₘρqₘ − ρpₘρpₘ]`.
pub fn measure_c_with(rho: &DensityMatrix, cache: &OperatorCache) -> Result<f64> {
    let spec = rho.spec();
    let r = rho.matrix();
    let r2 = matmul(r, r)?;
    let mut total = Complex64::new(0.0, 0.0);
    for m in 1..=spec.num_modes {
        for kind in [OpKind::Q, OpKind::P] {
            let x = &cache.get(spec, m, kind)?.matrix;
            let x2 = matmul(x, x)?;
            let rx = matmul(r, x)?;
            total += trace_of_product(&r2, &x2)? - trace_of_product(&rx, &rx)?;
        }
    }
    real(total, "C")
}

pub fn measure_c(rho: &DensityMatrix) -> Result<f64> {
    measure_c_with(rho, &OperatorCache::new())
}

fn chi2_from(c: f64, p: f64) -> Result<f64> {
    let chi2 = 2.0 * c / p;
    if !(chi2 > 0.0) {
        return Err(Error::consistency("chi2 positivity", chi2, 0.0, 0.0));
    }
    Ok(chi2)
}

/// `χ² = 2C/P`.
pub fn measure_chi2(rho: &DensityMatrix) -> Result<f64> {
    chi2_from(measure_c(rho)?, purity(rho)?)
}

pub fn measure_report(rho: &DensityMatrix) -> Result<MeasureReport> {
    measure_report_with(rho, &OperatorCache::new())
}

/// Operator-path report. Fails when `I` and `(C − M·P)/2` disagree.
pub fn measure_report_with(rho: &DensityMatrix, cache: &OperatorCache) -> Result<MeasureReport> {
    measure_report_tol(rho, cache, &Tolerances::default())
}

pub fn measure_report_tol(rho: &DensityMatrix, cache: &OperatorCache, tol: &Tolerances) -> Result<MeasureReport> {
    let i = measure_i_tol(rho, cache, tol)?;
    let c = measure_c_with(rho, cache)?;
    let p = purity(rho)?;
    let m = rho.num_modes() as f64;
    let reconstructed = (c - m * p) / 2.0;
    let identity_residual = (i - reconstructed).abs();
    if identity_residual >= tol.identity {
        return Err(Error::consistency("I = (C - M P)/2", i, reconstructed, tol.identity));
    }
    Ok(MeasureReport {
        pipeline: Pipeline::Operator,
        i,
        c,
        p,
        chi2: chi2_from(c, p)?,
        num_modes: rho.num_modes(),
        truncation: rho.spec().truncation,
        identity_residual,
        pure_relation_residual: None,
        max_tail_mass: rho.max_tail_mass(),
        convention_note: CONVENTION_NOTE.to_string(),
    })
}

/// Report for a pure state, additionally enforcing `I = χ²/4 − M/2`.
pub fn pure_state_measures(psi: &PureState) -> Result<MeasureReport> {
    pure_state_measures_tol(psi, &OperatorCache::new(), &Tolerances::default())
}

pub fn pure_state_measures_tol(psi: &PureState, cache: &OperatorCache, tol: &Tolerances) -> Result<MeasureReport> {
    let mut report = measure_report_tol(&psi.projector(), cache, tol)?;
    let m = report.num_modes as f64;
    let predicted = report.chi2 / 4.0 - m / 2.0;
    let residual = (report.i - predicted).abs();
    let tol = tol.pure_relation;
    if residual >= tol {
        return Err(Error::consistency("I = chi2/4 - M/2", report.i, predicted, tol));
    }
    report.pure_relation_residual = Some(residual);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ModeSpec;
    use crate::states::{
        cat_mixture, coherent_state, default_coherent_truncation, default_thermal_truncation,
        fock_mixture, fock_state, thermal_state, GaussianSpec,
    };

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn single(n: usize) -> ModeSpec {
        ModeSpec::single(n).unwrap()
    }

    fn thermal(a: f64) -> DensityMatrix {
        let g = GaussianSpec::new(a).unwrap();
        thermal_state(single(default_thermal_truncation(g)), g).unwrap()
    }

    #[test]
    fn vacuum_values() {
        let r = measure_report(&fock_state(single(6), 0).unwrap().projector()).unwrap();
        assert!(r.i.abs() < 1e-15);
        assert!((r.c - 1.0).abs() < 1e-14);
        assert!((r.p - 1.0).abs() < 1e-15);
        assert!((r.chi2 - 2.0).abs() < 1e-14);
        assert_eq!(r.num_modes, 1);
    }

    #[test]
    fn fock_state_i_is_n() {
        let rho = fock_state(single(8), 2).unwrap().projector();
        assert!((measure_i(&rho).unwrap() - 2.0).abs() < 1e-10);
        let three = fock_state(single(10), 3).unwrap().projector();
        assert!((measure_i(&three).unwrap() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn thermal_root_two() {
        let rho = thermal(SQRT2);
        assert!((measure_i(&rho).unwrap() + 0.125).abs() < 1e-9);
        assert!((measure_c(&rho).unwrap() - 0.25).abs() < 1e-9);
        assert!((measure_chi2(&rho).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn thermal_two_report() {
        let r = measure_report(&thermal(2.0)).unwrap();
        assert!((r.i + 3.0 / 32.0).abs() < 1e-9);
        assert!((r.c - 1.0 / 16.0).abs() < 1e-9);
        assert!((r.p - 0.25).abs() < 1e-9);
        assert!((r.chi2 - 0.5).abs() < 1e-8);
    }

    #[test]
    fn cat_mixture_matches_overlap_closed_form() {
        // I = −|α|² e^{−4|α|²}: zero only once the two coherent states are
        // effectively orthogonal
        for alpha in [0.5f64, 1.0, 2.0, 3.0] {
            let a = Complex64::new(alpha, 0.0);
            let rho = cat_mixture(single(default_coherent_truncation(a)), a).unwrap();
            let r = measure_report(&rho).unwrap();
            let s2 = (-4.0 * alpha * alpha).exp();
            assert!((r.i + alpha * alpha * s2).abs() < 1e-12, "alpha={alpha} I={}", r.i);
            assert!((r.p - (1.0 + s2) / 2.0).abs() < 1e-12);
            assert!((r.c - r.p - 2.0 * r.i).abs() < 1e-12);
        }
    }

    #[test]
    fn fock_mixture_with_vacuum() {
        let r = measure_report(&fock_mixture(single(6), 3, true).unwrap()).unwrap();
        assert!(r.i.abs() < 1e-12);
        assert!((r.chi2 - 2.0).abs() < 1e-10);
    }

    #[test]
    fn coherent_is_minimal() {
        let a = Complex64::new(2.0, 0.0);
        let psi = coherent_state(single(default_coherent_truncation(a)), a).unwrap();
        let r = pure_state_measures(&psi).unwrap();
        assert!(r.i.abs() < 1e-9);
        assert!((r.chi2 - 2.0).abs() < 1e-8);
        assert!(r.pure_relation_residual.unwrap() < 1e-10);
    }

    #[test]
    fn pure_fock_one() {
        let r = pure_state_measures(&fock_state(single(6), 1).unwrap()).unwrap();
        assert!((r.i - 1.0).abs() < 1e-12);
        assert!((r.chi2 - 6.0).abs() < 1e-12);
    }

    #[test]
    fn report_serializes_with_upper_case_keys() {
        let r = measure_report(&fock_state(single(4), 0).unwrap().projector()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in ["I", "C", "P", "chi2", "num_modes", "truncation", "identity_residual", "convention_note"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let back: MeasureReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
