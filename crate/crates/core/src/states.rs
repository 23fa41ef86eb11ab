// Copyright 2026 MacroQ Contributors
// SPDX-License-Identifier: Apache-2.0

//! Pure states, density matrices and the constructors for every state family
//! the measures are exercised on: Fock, coherent, cat, cat mixture, uniform
//! Fock mixture and thermal (isotropic Gaussian Wigner function).
//!
//! Every constructor refuses to produce a state whose population on the top
//! Fock level of any mode reaches the tail tolerance, and reports the
//! truncation it would need instead.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::fock::{displacement_op, ModeSpec};
use crate::linalg::{tensor_product, tensor_vec, trace, trace_of_product, Complex64, ComplexMatrix, ZERO};

/// Normalized state vector on the truncated `N^M` space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    spec: ModeSpec,
    amplitudes: Vec<Complex64>,
}

/// Hermitian, unit-trace, positive semidefinite operator on `N^M`.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    spec: ModeSpec,
    matrix: ComplexMatrix,
    // lower/upper bounds on the spectrum, exact when computed by eigensolver
    spectrum: (f64, f64),
}

impl PartialEq for DensityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.matrix == other.matrix
    }
}

/// Width parameter `a` of the isotropic Gaussian Wigner function
/// `W(q,p) = exp(-(q²+p²)/a²) / (π a²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSpec {
    a: f64,
}

impl GaussianSpec {
    /// `a = 1` is the vacuum; `a > 1` are mixed thermal states.
    pub fn new(a: f64) -> Result<Self> {
        if !a.is_finite() || a < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "Gaussian width a must be a finite value >= 1, got {a}"
            )));
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Mean photon number of the matching thermal state, `(a² - 1)/2`.
    pub fn mean_occupation(&self) -> f64 {
        (self.a * self.a - 1.0) / 2.0
    }
}

/// Population on the top Fock level of each mode.
fn tail_masses(spec: ModeSpec, populations: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut tails = vec![0.0; spec.num_modes];
    for idx in 0..spec.dim() {
        let levels = spec.decompose(idx);
        let pop = populations(idx);
        for (m, &n) in levels.iter().enumerate() {
            if n == spec.truncation - 1 {
                tails[m] += pop;
            }
        }
    }
    tails
}

impl PureState {
    /// Checks normalization and the top-level tail.
    pub fn new(spec: ModeSpec, amplitudes: Vec<Complex64>) -> Result<Self> {
        let tol = Tolerances::default();
        if amplitudes.len() != spec.dim() {
            return Err(Error::InvalidParameter(format!(
                "expected {} amplitudes for {spec}, got {}",
                spec.dim(),
                amplitudes.len()
            )));
        }
        if amplitudes.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid_state("finite amplitudes", "NaN or infinite amplitude"));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > tol.norm {
            return Err(Error::invalid_state(
                "normalization",
                format!("sum |c|^2 = {norm:.17}"),
            ));
        }
        let state = Self { spec, amplitudes };
        if let Some((m, t)) = state.worst_tail() {
            if t >= tol.tail {
                return Err(Error::invalid_state(
                    "tail mass",
                    format!("mode {} holds {t:e} on its top Fock level", m + 1),
                ));
            }
        }
        Ok(state)
    }

    /// Normalizes `amplitudes` before validating.
    pub fn from_unnormalized(spec: ModeSpec, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 1e-7) || !norm.is_finite() {
            return Err(Error::invalid_state("normalization", format!("vector norm {norm:e} vanishes")));
        }
        amplitudes.iter_mut().for_each(|z| *z /= norm);
        Self::new(spec, amplitudes)
    }

    pub fn spec(&self) -> ModeSpec {
        self.spec
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn tail_masses(&self) -> Vec<f64> {
        tail_masses(self.spec, |i| self.amplitudes[i].norm_sqr())
    }

    fn worst_tail(&self) -> Option<(usize, f64)> {
        self.tail_masses()
            .into_iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.spec != other.spec {
            return Err(Error::InvalidParameter("inner product of states with different specs".into()));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |ψ⟩⟨ψ|.
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            spec: self.spec,
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
            spectrum: (0.0, 1.0),
        }
    }

    /// |self⟩ ⊗ |other⟩ with this state's modes first.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let spec = combined_spec(self.spec, other.spec)?;
        PureState::new(spec, tensor_vec(&self.amplitudes, &other.amplitudes))
    }
}

fn combined_spec(a: ModeSpec, b: ModeSpec) -> Result<ModeSpec> {
    if a.truncation != b.truncation {
        return Err(Error::InvalidParameter(format!(
            "tensor factors need the same truncation, got {} and {}",
            a.truncation, b.truncation
        )));
    }
    ModeSpec::new(a.num_modes + b.num_modes, a.truncation)
}

impl DensityMatrix {
    /// Validates every density-matrix invariant, computing the spectrum.
    pub fn new(spec: ModeSpec, matrix: ComplexMatrix) -> Result<Self> {
        Self::validated(spec, matrix, None)
    }

    /// Validates with a known spectrum bound; falls back to the eigensolver
    /// when the bound is not good enough to prove positivity.
    fn validated(spec: ModeSpec, matrix: ComplexMatrix, bound: Option<(f64, f64)>) -> Result<Self> {
        let tol = Tolerances::default();
        if matrix.shape() != (spec.dim(), spec.dim()) {
            return Err(Error::DimensionMismatch {
                op: "density matrix",
                left: matrix.shape(),
                right: (spec.dim(), spec.dim()),
            });
        }
        let herm = matrix.hermitian_deviation()?;
        if herm > tol.hermitian {
            return Err(Error::invalid_state(
                "hermiticity",
                format!("max |rho - rho^dagger| = {herm:e}"),
            ));
        }
        let tr = trace(&matrix)?;
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol.trace {
            return Err(Error::invalid_state(
                "unit trace",
                format!("trace = {:.17} {:+e}i", tr.re, tr.im),
            ));
        }
        let spectrum = match bound {
            Some(b) if b.0 >= tol.psd_floor => b,
            _ if matrix.is_diagonal() => {
                let d: Vec<f64> = matrix.diagonal().iter().map(|z| z.re).collect();
                let lo = d.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            }
            _ => {
                let ev = matrix.hermitian_eigenvalues()?;
                (ev[0], ev[ev.len() - 1])
            }
        };
        if spectrum.0 < tol.psd_floor {
            return Err(Error::invalid_state(
                "positive semidefinite",
                format!("minimum eigenvalue {:e}", spectrum.0),
            ));
        }
        let rho = Self {
            spec,
            matrix,
            spectrum,
        };
        let tails = rho.tail_masses();
        if let Some((m, &t)) = tails.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) {
            if t >= tol.tail {
                return Err(Error::invalid_state(
                    "tail mass",
                    format!("mode {} holds {t:e} on its top Fock level", m + 1),
                ));
            }
        }
        Ok(rho)
    }

    pub fn spec(&self) -> ModeSpec {
        self.spec
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn num_modes(&self) -> usize {
        self.spec.num_modes
    }

    /// Smallest eigenvalue, or a lower bound on it for composite states.
    pub fn min_eigenvalue_bound(&self) -> f64 {
        self.spectrum.0
    }

    pub fn tail_masses(&self) -> Vec<f64> {
        tail_masses(self.spec, |i| self.matrix[(i, i)].re)
    }

    pub fn max_tail_mass(&self) -> f64 {
        self.tail_masses().into_iter().fold(0.0, f64::max)
    }

    /// Population on levels `>= level` of `mode`.
    pub fn population_at_or_above(&self, mode: usize, level: usize) -> Result<f64> {
        self.spec.check_mode(mode)?;
        Ok((0..self.spec.dim())
            .filter(|&i| self.spec.decompose(i)[mode - 1] >= level)
            .map(|i| self.matrix[(i, i)].re)
            .sum())
    }

    pub fn purity(&self) -> Result<f64> {
        purity(self)
    }
}

/// `Tr[ρ²]`.
pub fn purity(rho: &DensityMatrix) -> Result<f64> {
    let tol = Tolerances::default();
    let p = trace_of_product(&rho.matrix, &rho.matrix)?;
    if p.im.abs() > tol.imag_residue {
        return Err(Error::ImaginaryResidue {
            quantity: "purity",
            residue: p.im.abs(),
            tolerance: tol.imag_residue,
        });
    }
    Ok(p.re)
}

// ---------------------------------------------------------------------------
// Truncation heuristics

/// Default truncation for coherent and cat states, `⌈|α|² + 8|α| + 10⌉`.
pub fn default_coherent_truncation(alpha: Complex64) -> usize {
    let r = alpha.norm();
    (r * r + 8.0 * r + 10.0).ceil() as usize
}

/// Default truncation for thermal states.
///
/// `⌈20 n̄ + 20⌉`, raised when needed so the top-level population of the
/// renormalized geometric distribution stays a decade below the tail tolerance.
pub fn default_thermal_truncation(g: GaussianSpec) -> usize {
    let nbar = g.mean_occupation();
    let heuristic = (20.0 * nbar + 20.0).ceil() as usize;
    if nbar == 0.0 {
        return heuristic;
    }
    let target = Tolerances::default().tail / 10.0;
    let mut n = heuristic.max(2);
    while thermal_top_population(nbar, n) >= target {
        n += 1;
    }
    n
}

fn thermal_top_population(nbar: f64, truncation: usize) -> f64 {
    let r = nbar / (1.0 + nbar);
    // ρ_{N-1} / Σ_{k<N} ρ_k with ρ_k ∝ r^k
    r.powi(truncation as i32 - 1) * (1.0 - r) / (1.0 - r.powi(truncation as i32))
}

fn require_single_mode(spec: ModeSpec, what: &str) -> Result<()> {
    if spec.num_modes != 1 {
        return Err(Error::Unsupported(format!(
            "{what} is built on one mode; combine modes with product_state"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Constructors

/// |n⟩ on a single mode; `n ≤ N-2` keeps one guard level empty.
pub fn fock_state(spec: ModeSpec, n: usize) -> Result<PureState> {
    fock_state_multi(spec, &[n])
}

/// |n₁ n₂ … n_M⟩.
pub fn fock_state_multi(spec: ModeSpec, levels: &[usize]) -> Result<PureState> {
    if levels.len() != spec.num_modes {
        return Err(Error::InvalidParameter(format!(
            "{} Fock levels given for {} modes",
            levels.len(),
            spec.num_modes
        )));
    }
    if let Some(&n) = levels.iter().find(|&&n| n + 2 > spec.truncation) {
        // the whole population sits on or beyond the top level
        return Err(Error::Truncation {
            tail_mass: 1.0,
            tolerance: Tolerances::default().tail,
            required: n + 2,
        });
    }
    let mut amps = vec![ZERO; spec.dim()];
    amps[spec.compose(levels)] = Complex64::new(1.0, 0.0);
    PureState::new(spec, amps)
}

/// Raw truncated coherent amplitudes `e^{-|α|²/2} αⁿ/√n!`.
fn coherent_amplitudes(truncation: usize, alpha: Complex64) -> Vec<Complex64> {
    let mut amps = Vec::with_capacity(truncation);
    let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    amps.push(c);
    for n in 1..truncation {
        c = c * alpha / (n as f64).sqrt();
        amps.push(c);
    }
    amps
}

fn tail_check(amps: &[Complex64], required: impl FnOnce() -> usize) -> Result<()> {
    let tol = Tolerances::default().tail;
    let total: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    let top = amps[amps.len() - 1].norm_sqr() / total;
    if !(top < tol) {
        return Err(Error::Truncation {
            tail_mass: top,
            tolerance: tol,
            required: required(),
        });
    }
    Ok(())
}

/// Smallest truncation ≥ the coherent heuristic that passes the tail check for
/// amplitudes generated by `make`.
fn required_truncation(start: usize, make: impl Fn(usize) -> Vec<Complex64>) -> usize {
    let tol = Tolerances::default().tail;
    let mut n = start.max(2);
    loop {
        let amps = make(n);
        let total: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if amps[n - 1].norm_sqr() / total < tol || n > 1 << 16 {
            return n;
        }
        n += 1;
    }
}

/// Coherent state |α⟩, renormalized after truncation.
pub fn coherent_state(spec: ModeSpec, alpha: Complex64) -> Result<PureState> {
    require_single_mode(spec, "coherent_state")?;
    check_finite_alpha(alpha)?;
    let amps = coherent_amplitudes(spec.truncation, alpha);
    tail_check(&amps, || {
        required_truncation(default_coherent_truncation(alpha), |n| coherent_amplitudes(n, alpha))
    })?;
    PureState::from_unnormalized(spec, amps)
}

fn check_finite_alpha(alpha: Complex64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha must be finite, got {alpha}")));
    }
    Ok(())
}

fn cat_amplitudes(truncation: usize, alpha: Complex64, phase: f64) -> Vec<Complex64> {
    let plus = coherent_amplitudes(truncation, alpha);
    let minus = coherent_amplitudes(truncation, -alpha);
    let w = Complex64::from_polar(1.0, phase);
    plus.iter().zip(&minus).map(|(p, m)| p + w * m).collect()
}

/// `(|α⟩ + e^{iφ}|−α⟩)` normalized in the truncated space.
pub fn cat_state(spec: ModeSpec, alpha: Complex64, relative_phase: f64) -> Result<PureState> {
    require_single_mode(spec, "cat_state")?;
    check_finite_alpha(alpha)?;
    if !relative_phase.is_finite() {
        return Err(Error::InvalidParameter("relative phase must be finite".into()));
    }
    let amps = cat_amplitudes(spec.truncation, alpha, relative_phase);
    let norm_sqr: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    // analytic norm² is 2(1 + cos φ e^{-2|α|²}); below this it is cancellation noise
    if norm_sqr < 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "cat state with alpha={alpha} and phase={relative_phase} has vanishing norm"
        )));
    }
    tail_check(&amps, || {
        required_truncation(default_coherent_truncation(alpha), |n| {
            cat_amplitudes(n, alpha, relative_phase)
        })
    })?;
    PureState::from_unnormalized(spec, amps)
}

/// `(|α⟩⟨α| + |−α⟩⟨−α|)/2`.
pub fn cat_mixture(spec: ModeSpec, alpha: Complex64) -> Result<DensityMatrix> {
    let plus = coherent_state(spec, alpha)?.projector();
    let minus = coherent_state(spec, -alpha)?.projector();
    mix(&[(0.5, plus), (0.5, minus)])
}

/// Uniform mixture of `d` consecutive Fock levels starting at 0
/// (`include_vacuum`) or at 1.
pub fn fock_mixture(spec: ModeSpec, d: usize, include_vacuum: bool) -> Result<DensityMatrix> {
    require_single_mode(spec, "fock_mixture")?;
    if d == 0 {
        return Err(Error::InvalidParameter("fock_mixture needs d >= 1".into()));
    }
    let start = usize::from(!include_vacuum);
    let highest = start + d - 1;
    if highest + 2 > spec.truncation {
        return Err(Error::Truncation {
            tail_mass: if highest + 1 == spec.truncation { 1.0 / d as f64 } else { 0.0 },
            tolerance: Tolerances::default().tail,
            required: highest + 2,
        });
    }
    let mut diag = vec![0.0; spec.truncation];
    diag[start..=highest].iter_mut().for_each(|x| *x = 1.0 / d as f64);
    DensityMatrix::validated(spec, ComplexMatrix::from_real_diagonal(&diag), Some((0.0, 1.0 / d as f64)))
}

/// Thermal state whose Wigner function is the isotropic Gaussian of width `a`.
pub fn thermal_state(spec: ModeSpec, g: GaussianSpec) -> Result<DensityMatrix> {
    require_single_mode(spec, "thermal_state")?;
    let nbar = g.mean_occupation();
    let n = spec.truncation;
    let mut diag = vec![0.0; n];
    if nbar == 0.0 {
        diag[0] = 1.0;
    } else {
        let top = thermal_top_population(nbar, n);
        let tol = Tolerances::default().tail;
        if !(top < tol) {
            return Err(Error::Truncation {
                tail_mass: top,
                tolerance: tol,
                required: default_thermal_truncation(g),
            });
        }
        let r = nbar / (1.0 + nbar);
        let mut p = 1.0 / (1.0 + nbar);
        for x in diag.iter_mut() {
            *x = p;
            p *= r;
        }
        let total: f64 = diag.iter().sum();
        diag.iter_mut().for_each(|x| *x /= total);
    }
    let lo = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = diag.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    DensityMatrix::validated(spec, ComplexMatrix::from_real_diagonal(&diag), Some((lo, hi)))
}

/// Convex combination of density matrices on the same space.
pub fn mix(components: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
    let tol = Tolerances::default();
    let (first_w, first) = components
        .first()
        .ok_or_else(|| Error::InvalidParameter("mix needs at least one component".into()))?;
    let spec = first.spec;
    let mut total = 0.0;
    for (w, rho) in components {
        if !w.is_finite() || *w < 0.0 {
            return Err(Error::InvalidParameter(format!("mixture weight {w} is negative")));
        }
        if rho.spec != spec {
            return Err(Error::InvalidParameter(format!(
                "mixture components live on different spaces: {spec} vs {}",
                rho.spec
            )));
        }
        total += w;
    }
    if (total - 1.0).abs() > tol.weights {
        return Err(Error::InvalidParameter(format!(
            "mixture weights sum to {total:.17}, expected 1"
        )));
    }
    let mut matrix = first.matrix.scale_real(*first_w);
    for (w, rho) in &components[1..] {
        matrix = matrix.add(&rho.matrix.scale_real(*w))?;
    }
    // Weyl: λ_min(Σ wᵢ ρᵢ) ≥ Σ wᵢ λ_min(ρᵢ)
    let lo: f64 = components.iter().map(|(w, r)| w * r.spectrum.0).sum();
    let hi: f64 = components.iter().map(|(w, r)| w * r.spectrum.1).sum();
    DensityMatrix::validated(spec, matrix, Some((lo, hi)))
}

/// `ρ_a ⊗ ρ_b` with `a`'s modes first.
pub fn product_state(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    let spec = combined_spec(a.spec, b.spec)?;
    let matrix = tensor_product(&a.matrix, &b.matrix);
    let corners = [
        a.spectrum.0 * b.spectrum.0,
        a.spectrum.0 * b.spectrum.1,
        a.spectrum.1 * b.spectrum.0,
        a.spectrum.1 * b.spectrum.1,
    ];
    let lo = corners.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = corners.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    DensityMatrix::validated(spec, matrix, Some((lo, hi)))
}

/// `D(β) ρ D(β)†` on one mode, using the truncated displacement.
///
/// Refuses states whose population on levels `≥ N - ⌈4|β|√N⌉` reaches 1e-10,
/// where the truncated operator stops behaving like a displacement.
pub fn displace(rho: &DensityMatrix, mode: usize, beta: Complex64) -> Result<DensityMatrix> {
    let spec = rho.spec;
    spec.check_mode(mode)?;
    let n = spec.truncation;
    let margin = (4.0 * beta.norm() * (n as f64).sqrt()).ceil() as usize;
    let guard = n.saturating_sub(margin);
    let outside = rho.population_at_or_above(mode, guard)?;
    if outside >= 1e-10 {
        return Err(Error::Truncation {
            tail_mass: outside,
            tolerance: 1e-10,
            required: n + margin,
        });
    }
    let d = displacement_op(spec, mode, beta)?;
    let out = d.matmul(&rho.matrix)?.matmul(&d.adjoint())?;
    // unitary conjugation preserves the spectrum
    DensityMatrix::validated(spec, hermitize(out), Some(rho.spectrum))
}

/// Symmetrizes away rounding-level anti-Hermitian noise.
fn hermitize(m: ComplexMatrix) -> ComplexMatrix {
    let adj = m.adjoint();
    m.add(&adj).expect("square").scale_real(0.5)
}

/// Truncated overlap ⟨α|β⟩ of two coherent states on the same space.
pub fn coherent_overlap(spec: ModeSpec, alpha: Complex64, beta: Complex64) -> Result<Complex64> {
    coherent_state(spec, alpha)?.inner(&coherent_state(spec, beta)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::number_op;
    use crate::linalg::trace_of_product;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single(n: usize) -> ModeSpec {
        ModeSpec::single(n).unwrap()
    }

    fn mean_number(rho: &DensityMatrix) -> f64 {
        let n = number_op(rho.spec(), 1).unwrap().matrix;
        trace_of_product(rho.matrix(), &n).unwrap().re
    }

    #[test]
    fn fock_basics() {
        let vac = fock_state(single(5), 0).unwrap().projector();
        assert!((purity(&vac).unwrap() - 1.0).abs() < 1e-15);
        let three = fock_state(single(10), 3).unwrap().projector();
        assert_eq!(mean_number(&three), 3.0);
        assert!(matches!(
            fock_state(single(4), 3),
            Err(Error::Truncation { required: 5, .. })
        ));
        assert!(fock_state(single(4), 2).is_ok());
    }

    #[test]
    fn coherent_basics() {
        let vac = coherent_state(single(10), ZERO).unwrap();
        assert_eq!(vac, fock_state(single(10), 0).unwrap());
        let s = coherent_state(single(40), c(2.0, 0.0)).unwrap();
        assert!((mean_number(&s.projector()) - 4.0).abs() < 1e-8);
    }

    #[test]
    fn coherent_truncation_error_names_required_n() {
        let err = coherent_state(single(12), c(2.0, 0.0)).unwrap_err();
        match err {
            Error::Truncation { required, .. } => {
                assert!(required >= default_coherent_truncation(c(2.0, 0.0)));
                assert!(coherent_state(single(required), c(2.0, 0.0)).is_ok());
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn coherent_overlap_matches_closed_form() {
        for alpha in [0.3, 1.0, 1.7] {
            let spec = single(default_coherent_truncation(c(alpha, 0.0)));
            let s = coherent_overlap(spec, c(alpha, 0.0), c(-alpha, 0.0)).unwrap();
            assert!((s.re - (-2.0 * alpha * alpha).exp()).abs() < 1e-10);
            assert!(s.im.abs() < 1e-14);
        }
    }

    #[test]
    fn cat_limits_and_errors() {
        let vac = cat_state(single(10), ZERO, 0.0).unwrap();
        assert!((vac.amplitudes()[0].re - 1.0).abs() < 1e-15);
        assert!(cat_state(single(10), ZERO, std::f64::consts::PI).is_err());
        assert!(cat_state(single(10), c(1e-9, 0.0), std::f64::consts::PI).is_err());
    }

    #[test]
    fn cat_mixture_purity_closed_form() {
        for alpha in [0.0f64, 0.5, 1.0, 2.0] {
            let a = c(alpha, 0.0);
            let rho = cat_mixture(single(default_coherent_truncation(a)), a).unwrap();
            let s = (-2.0 * alpha * alpha).exp();
            assert!((purity(&rho).unwrap() - (1.0 + s * s) / 2.0).abs() < 1e-9, "alpha={alpha}");
        }
    }

    #[test]
    fn fock_mixture_cases() {
        let vac = fock_mixture(single(4), 1, true).unwrap();
        assert_eq!(vac, fock_state(single(4), 0).unwrap().projector());
        let rho = fock_mixture(single(8), 4, true).unwrap();
        assert!((purity(&rho).unwrap() - 0.25).abs() < 1e-15);
        assert!(fock_mixture(single(6), 5, false).is_err());
        assert!(fock_mixture(single(7), 5, false).is_ok());
        assert!(fock_mixture(single(7), 0, true).is_err());
    }

    #[test]
    fn thermal_purity() {
        let vac = thermal_state(single(20), GaussianSpec::new(1.0).unwrap()).unwrap();
        assert_eq!(vac, fock_state(single(20), 0).unwrap().projector());
        for a in [std::f64::consts::SQRT_2, 2.0] {
            let g = GaussianSpec::new(a).unwrap();
            let rho = thermal_state(single(default_thermal_truncation(g)), g).unwrap();
            assert!((purity(&rho).unwrap() - 1.0 / (a * a)).abs() < 1e-9);
            assert!((mean_number(&rho) - g.mean_occupation()).abs() < 1e-9);
        }
        assert!(GaussianSpec::new(0.9).is_err());
        assert!(matches!(
            thermal_state(single(20), GaussianSpec::new(3.0).unwrap()),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn thermal_default_truncation_respects_tail_rule() {
        for a in [1.2, 2.0, 5.0] {
            let g = GaussianSpec::new(a).unwrap();
            let n = default_thermal_truncation(g);
            assert!(n >= (20.0 * g.mean_occupation() + 20.0).ceil() as usize);
            let rho = thermal_state(single(n), g).unwrap();
            assert!(rho.max_tail_mass() < 1e-12);
        }
    }

    #[test]
    fn mix_cases() {
        let spec = single(8);
        let vac = fock_state(spec, 0).unwrap().projector();
        let one = fock_state(spec, 1).unwrap().projector();
        assert_eq!(mix(&[(1.0, vac.clone())]).unwrap(), vac);
        let half = mix(&[(0.5, vac.clone()), (0.5, one.clone())]).unwrap();
        assert!((purity(&half).unwrap() - 0.5).abs() < 1e-15);
        assert!(mix(&[(0.6, vac.clone()), (0.6, one.clone())]).is_err());
        assert!(mix(&[(-0.5, vac.clone()), (1.5, one)]).is_err());
        let other = fock_state(single(9), 0).unwrap().projector();
        assert!(mix(&[(0.5, vac), (0.5, other)]).is_err());
        assert!(mix(&[]).is_err());
    }

    #[test]
    fn mix_matches_cat_mixture() {
        let a = c(1.3, 0.4);
        let spec = single(default_coherent_truncation(a));
        let plus = coherent_state(spec, a).unwrap().projector();
        let minus = coherent_state(spec, -a).unwrap().projector();
        let m = mix(&[(0.5, plus), (0.5, minus)]).unwrap();
        let cm = cat_mixture(spec, a).unwrap();
        assert!(m.matrix().max_abs_diff(cm.matrix()).unwrap() < 1e-12);
    }

    #[test]
    fn product_state_cases() {
        let spec = single(6);
        let vac = fock_state(spec, 0).unwrap().projector();
        let vv = product_state(&vac, &vac).unwrap();
        assert_eq!(vv.spec(), ModeSpec::new(2, 6).unwrap());
        assert_eq!(vv.matrix()[(0, 0)], c(1.0, 0.0));
        let m1 = fock_mixture(spec, 3, true).unwrap();
        let m2 = fock_mixture(spec, 2, false).unwrap();
        let p = product_state(&m1, &m2).unwrap();
        let expect = purity(&m1).unwrap() * purity(&m2).unwrap();
        assert!((purity(&p).unwrap() - expect).abs() < 1e-10);
        assert!(product_state(&vac, &fock_state(single(7), 0).unwrap().projector()).is_err());
    }

    #[test]
    fn product_respects_dimension_budget() {
        let spec = single(70);
        let vac = fock_state(spec, 0).unwrap().projector();
        assert!(matches!(product_state(&vac, &vac), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn density_validation_names_invariant() {
        let spec = single(4);
        let bad_trace = ComplexMatrix::from_real_diagonal(&[0.9, 0.0, 0.0, 0.0]);
        match DensityMatrix::new(spec, bad_trace) {
            Err(Error::InvalidState { invariant, .. }) => assert_eq!(invariant, "unit trace"),
            other => panic!("{other:?}"),
        }
        let mut herm = ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0, 0.0]);
        herm[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(
            DensityMatrix::new(spec, herm),
            Err(Error::InvalidState { invariant: "hermiticity", .. })
        ));
        let neg = ComplexMatrix::from_real_diagonal(&[1.2, -0.2, 0.0, 0.0]);
        assert!(matches!(
            DensityMatrix::new(spec, neg),
            Err(Error::InvalidState { invariant: "positive semidefinite", .. })
        ));
        let tail = ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]);
        assert!(matches!(
            DensityMatrix::new(spec, tail),
            Err(Error::InvalidState { invariant: "tail mass", .. })
        ));
        // off-diagonal state goes through the eigensolver
        let mut coh = ComplexMatrix::zeros(4, 4);
        for (i, j, v) in [(0, 0, 0.5), (1, 1, 0.5), (0, 1, 0.5), (1, 0, 0.5)] {
            coh[(i, j)] = c(v, 0.0);
        }
        let rho = DensityMatrix::new(spec, coh).unwrap();
        assert!(rho.min_eigenvalue_bound().abs() < 1e-12);
    }

    #[test]
    fn pure_state_validation() {
        let spec = single(3);
        assert!(PureState::new(spec, vec![c(1.0, 0.0), ZERO]).is_err());
        assert!(PureState::new(spec, vec![c(0.9, 0.0), ZERO, ZERO]).is_err());
        assert!(PureState::new(spec, vec![ZERO, ZERO, c(1.0, 0.0)]).is_err());
        assert!(PureState::from_unnormalized(spec, vec![ZERO; 3]).is_err());
    }

    #[test]
    fn displacement_moves_vacuum_to_coherent() {
        let spec = single(40);
        let vac = fock_state(spec, 0).unwrap().projector();
        let beta = c(0.8, -0.3);
        let shifted = displace(&vac, 1, beta).unwrap();
        let target = coherent_state(spec, beta).unwrap().projector();
        assert!(shifted.matrix().max_abs_diff(target.matrix()).unwrap() < 1e-10);
        let edge = fock_state(spec, 36).unwrap().projector();
        assert!(matches!(displace(&edge, 1, c(1.0, 0.0)), Err(Error::Truncation { .. })));
    }
}
