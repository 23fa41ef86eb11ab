// Copyright 2026 MacroQ Contributors
// SPDX-License-Identifier: Apache-2.0

//! Single-mode Wigner functions on rectangular phase-space grids and the
//! grid-side evaluation of `C` and `P`.
//!
//! The working transform sums closed-form Fock-basis kernels. For `|m⟩⟨m+k|`
//! with `x = 2(q² + p²)` and `θ = atan2(p, q)` the kernel is
//!
//! ```text
//! (1/π) (-1)^m e^{ikθ} h_{m,k}(x),   h_{m,k}(x) = √(m!/(m+k)!) x^{k/2} L_m^{(k)}(x) e^{-x/2}
//! ```
//!
//! and `h_{m,k}` is generated by an upward recurrence in `m` carried in
//! log-scaled form, so large truncations neither overflow nor lose the region
//! where the Laguerre factor outgrows the Gaussian.
//!
//! [`wigner_direct`] evaluates the defining integral
//! `W(q,p) = (1/2π) ∫ dη ⟨q+η/2|ρ|q−η/2⟩ e^{−iηp}` by quadrature; it is slow
//! and exists to check the kernel sum.
//!
//! Grid points are `q_i = −L + i·2L/n_q` (likewise for `p`), so the origin is
//! a grid point for even sample counts.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::Complex64;
use crate::fock::OperatorCache;
use crate::measures::{measure_report_tol, MeasureReport, Pipeline, CONVENTION_NOTE};
use crate::states::{DensityMatrix, GaussianSpec};

/// Minimum samples per axis.
pub const MIN_POINTS: usize = 32;
pub const DEFAULT_POINTS: usize = 256;

/// Square sampling domain `[−L, L)²` with `nq × np` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub half_width: f64,
    pub nq: usize,
    pub np: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, nq: usize, np: usize) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid half-width must be positive, got {half_width}"
            )));
        }
        if nq < MIN_POINTS || np < MIN_POINTS {
            return Err(Error::InvalidParameter(format!(
                "grids need at least {MIN_POINTS} points per axis, got {nq}x{np}"
            )));
        }
        Ok(Self { half_width, nq, np })
    }

    /// `L = √(2N) + 5`, square grid with `points` per axis.
    pub fn for_truncation(truncation: usize, points: usize) -> Result<Self> {
        Self::new(default_half_width(truncation), points, points)
    }

    pub fn default_for(truncation: usize) -> Self {
        Self::for_truncation(truncation, DEFAULT_POINTS).expect("default grid is valid")
    }

    pub fn dq(&self) -> f64 {
        2.0 * self.half_width / self.nq as f64
    }

    pub fn dp(&self) -> f64 {
        2.0 * self.half_width / self.np as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.dq()
    }

    pub fn p(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.dp()
    }
}

pub fn default_half_width(truncation: usize) -> f64 {
    (2.0 * truncation as f64).sqrt() + 5.0
}

/// Real Wigner samples, `values[i * np + j] = W(q_i, p_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nq: usize,
    pub np: usize,
    pub values: Vec<f64>,
}

impl PhaseSpaceGrid {
    fn from_fn(gs: &GridSpec, f: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        let mut values = vec![0.0; gs.nq * gs.np];
        values.par_chunks_mut(gs.np).enumerate().for_each(|(i, row)| {
            let q = gs.q(i);
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(q, gs.p(j));
            }
        });
        Self::from_values(gs, values)
    }

    fn from_values(gs: &GridSpec, values: Vec<f64>) -> Self {
        Self {
            q_min: gs.q(0),
            q_max: gs.q(gs.nq - 1),
            p_min: gs.p(0),
            p_max: gs.p(gs.np - 1),
            nq: gs.nq,
            np: gs.np,
            values,
        }
    }

    /// Checks shape, ordering, finiteness and minimum size.
    pub fn validate(&self) -> Result<()> {
        if self.nq < MIN_POINTS || self.np < MIN_POINTS {
            return Err(Error::InvalidParameter(format!(
                "grid has {}x{} points, need at least {MIN_POINTS} per axis",
                self.nq, self.np
            )));
        }
        if !(self.q_min < self.q_max && self.p_min < self.p_max) {
            return Err(Error::InvalidParameter("grid bounds are not ordered".into()));
        }
        if self.values.len() != self.nq * self.np {
            return Err(Error::InvalidParameter(format!(
                "grid holds {} values, expected {}",
                self.values.len(),
                self.nq * self.np
            )));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("grid contains non-finite values".into()));
        }
        Ok(())
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.nq - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        self.q_min + i as f64 * self.dq()
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p_min + j as f64 * self.dp()
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.np + j]
    }

    /// Index and value of the largest sample.
    pub fn argmax(&self) -> ((usize, usize), f64) {
        let (k, v) = self
            .values
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("grid is non-empty");
        ((k / self.np, k % self.np), v)
    }

    /// Index of the sample nearest to `(q, p)`.
    pub fn nearest(&self, q: f64, p: f64) -> (usize, usize) {
        let i = ((q - self.q_min) / self.dq()).round().clamp(0.0, (self.nq - 1) as f64);
        let j = ((p - self.p_min) / self.dp()).round().clamp(0.0, (self.np - 1) as f64);
        (i as usize, j as usize)
    }

    /// Composite trapezoidal integral of `f(W)` over the grid.
    pub fn integrate_with(&self, f: impl Fn(f64) -> f64) -> f64 {
        trapezoid_2d(self.nq, self.np, self.dq(), self.dp(), |i, j| f(self.at(i, j)))
    }

    /// `∫ W dq dp`.
    pub fn integral(&self) -> f64 {
        self.integrate_with(|w| w)
    }

    /// `∫ W(q_i, p) dp` along one row.
    pub fn marginal_q(&self, i: usize) -> f64 {
        let row = &self.values[i * self.np..(i + 1) * self.np];
        trapezoid_1d(row, self.dp())
    }

    /// Largest absolute pointwise difference to another grid of the same shape.
    pub fn max_abs_diff(&self, other: &PhaseSpaceGrid) -> Result<f64> {
        if self.nq != other.nq || self.np != other.np {
            return Err(Error::DimensionMismatch {
                op: "grid comparison",
                left: (self.nq, self.np),
                right: (other.nq, other.np),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

fn trapezoid_1d(v: &[f64], h: f64) -> f64 {
    let n = v.len();
    let inner: f64 = v[1..n - 1].iter().sum();
    h * (inner + 0.5 * (v[0] + v[n - 1]))
}

fn trapezoid_2d(nq: usize, np: usize, dq: f64, dp: f64, f: impl Fn(usize, usize) -> f64) -> f64 {
    let weight = |k: usize, n: usize| if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
    let mut total = 0.0;
    for i in 0..nq {
        let wi = weight(i, nq);
        let mut row = 0.0;
        for j in 0..np {
            row += weight(j, np) * f(i, j);
        }
        total += wi * row;
    }
    total * dq * dp
}

fn require_single_mode(rho: &DensityMatrix) -> Result<()> {
    if rho.num_modes() != 1 {
        return Err(Error::Unsupported(format!(
            "Wigner grids are single-mode; state has {} modes",
            rho.num_modes()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Fock-kernel transform

/// `ln k!` for `k < n`.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n.max(1));
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

const RESCALE: f64 = 1e150;

/// Accumulates `Σ_m c_m h_{m,k}(x)` for `m = 0..len` in log-scaled form.
fn laguerre_band_sum(
    k: usize,
    x: f64,
    len: usize,
    ln_fact: &[f64],
    coeff: impl Fn(usize) -> Complex64,
) -> Complex64 {
    if len == 0 || (k > 0 && x == 0.0) {
        return Complex64::new(0.0, 0.0);
    }
    let kf = k as f64;
    // h_{0,k} = x^{k/2} e^{-x/2} / √k!
    let mut log_scale = -x / 2.0 - 0.5 * ln_fact[k];
    if k > 0 {
        log_scale += 0.5 * kf * x.ln();
    }
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut acc = coeff(0) * cur;
    for m in 0..len - 1 {
        let mf = m as f64;
        let next = if m == 0 {
            (1.0 + kf - x) / (kf + 1.0).sqrt()
        } else {
            ((2.0 * mf + 1.0 + kf - x) * cur - (mf * (mf + kf)).sqrt() * prev)
                / ((mf + 1.0) * (mf + 1.0 + kf)).sqrt()
        };
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            acc /= RESCALE;
            log_scale += RESCALE.ln();
        }
        acc += coeff(m + 1) * cur;
    }
    let scale_re = scaled(acc.re, log_scale);
    let scale_im = scaled(acc.im, log_scale);
    Complex64::new(scale_re, scale_im)
}

fn scaled(v: f64, log_scale: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum() * (v.abs().ln() + log_scale).exp()
    }
}

/// Wigner function of a single-mode density matrix by Fock-kernel summation.
pub fn wigner_from_density(rho: &DensityMatrix, gs: &GridSpec) -> Result<PhaseSpaceGrid> {
    require_single_mode(rho)?;
    let n = rho.spec().truncation;
    let r = rho.matrix();
    let ln_fact = ln_factorials(n);
    // bands k whose entries are all zero contribute nothing
    let bands: Vec<usize> = (0..n)
        .filter(|&k| (0..n - k).any(|m| r[(m, m + k)].norm() > 0.0 || r[(m + k, m)].norm() > 0.0))
        .collect();
    let tol = Tolerances::default().imag_residue;

    let mut values = vec![0.0; gs.nq * gs.np];
    let residues: Vec<f64> = values
        .par_chunks_mut(gs.np)
        .enumerate()
        .map(|(i, row)| {
            let q = gs.q(i);
            let mut worst: f64 = 0.0;
            for (j, v) in row.iter_mut().enumerate() {
                let p = gs.p(j);
                let x = 2.0 * (q * q + p * p);
                let theta = p.atan2(q);
                let mut total = Complex64::new(0.0, 0.0);
                for &k in &bands {
                    let phase = Complex64::from_polar(1.0, k as f64 * theta);
                    let band = laguerre_band_sum(k, x, n - k, &ln_fact, |m| {
                        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                        if k == 0 {
                            r[(m, m)] * sign
                        } else {
                            (r[(m, m + k)] * phase + r[(m + k, m)] * phase.conj()) * sign
                        }
                    });
                    total += band;
                }
                total /= PI;
                worst = worst.max(total.im.abs());
                *v = total.re;
            }
            worst
        })
        .collect();
    let worst = residues.into_iter().fold(0.0, f64::max);
    if worst > tol {
        return Err(Error::ImaginaryResidue {
            quantity: "Wigner kernel sum",
            residue: worst,
            tolerance: tol,
        });
    }
    Ok(PhaseSpaceGrid::from_values(gs, values))
}

// ---------------------------------------------------------------------------
// Direct quadrature of the defining integral

/// Hermite functions `ψ_0..ψ_{n-1}` at `x`, normalized in the `[q,p] = i` units.
pub fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    // carried as mantissas with a shared log scale, like the Laguerre recurrence
    let mut out = vec![0.0; n];
    let mut log_scale = -x * x / 2.0 - 0.25 * PI.ln();
    let mut mant = vec![0.0; n];
    mant[0] = 1.0;
    if n > 1 {
        mant[1] = std::f64::consts::SQRT_2 * x;
    }
    let mut scales = vec![log_scale; n];
    for k in 1..n.saturating_sub(1) {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * mant[k] - (kf / (kf + 1.0)).sqrt() * mant[k - 1];
        mant[k + 1] = next;
        if next.abs() > RESCALE {
            mant[k] /= RESCALE;
            mant[k + 1] /= RESCALE;
            log_scale += RESCALE.ln();
        }
        scales[k] = log_scale;
        scales[k + 1] = log_scale;
    }
    for k in 0..n {
        out[k] = scaled(mant[k], scales[k]);
    }
    out
}

/// `⟨x|ρ|y⟩` from the Fock-basis matrix.
pub fn position_matrix_element(rho: &DensityMatrix, x: f64, y: f64) -> Result<Complex64> {
    require_single_mode(rho)?;
    let n = rho.spec().truncation;
    let r = rho.matrix();
    let px = hermite_functions(n, x);
    let py = hermite_functions(n, y);
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, &pa) in px.iter().enumerate() {
        if pa == 0.0 {
            continue;
        }
        let row = r.row(a);
        let inner: Complex64 = row.iter().zip(&py).map(|(z, &v)| z * v).sum();
        acc += inner * pa;
    }
    Ok(acc)
}

/// Position density `⟨q|ρ|q⟩`.
pub fn position_density(rho: &DensityMatrix, q: f64) -> Result<f64> {
    Ok(position_matrix_element(rho, q, q)?.re)
}

/// Wigner function by trapezoidal quadrature of the defining η-integral over
/// `[−2L, 2L]` with `eta_points` nodes.
pub fn wigner_direct(rho: &DensityMatrix, gs: &GridSpec, eta_points: usize) -> Result<PhaseSpaceGrid> {
    require_single_mode(rho)?;
    if eta_points < 256 {
        return Err(Error::InvalidParameter(format!(
            "wigner_direct needs at least 256 eta points, got {eta_points}"
        )));
    }
    let h = 2.0 * gs.half_width;
    let d_eta = 2.0 * h / (eta_points - 1) as f64;
    let etas: Vec<f64> = (0..eta_points).map(|k| -h + k as f64 * d_eta).collect();
    let tol = Tolerances::default().imag_residue;

    let mut values = vec![0.0; gs.nq * gs.np];
    let worst = values
        .par_chunks_mut(gs.np)
        .enumerate()
        .map(|(i, row)| -> Result<f64> {
            let q = gs.q(i);
            let kernel: Vec<Complex64> = etas
                .iter()
                .enumerate()
                .map(|(k, &eta)| {
                    let w = if k == 0 || k == eta_points - 1 { 0.5 } else { 1.0 };
                    position_matrix_element(rho, q + eta / 2.0, q - eta / 2.0).map(|z| z * w)
                })
                .collect::<Result<_>>()?;
            let mut worst: f64 = 0.0;
            for (j, v) in row.iter_mut().enumerate() {
                let p = gs.p(j);
                let s: Complex64 = kernel
                    .iter()
                    .zip(&etas)
                    .map(|(z, &eta)| z * Complex64::from_polar(1.0, -eta * p))
                    .sum();
                let w = s * d_eta / (2.0 * PI);
                worst = worst.max(w.im.abs());
                *v = w.re;
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    if worst > tol {
        return Err(Error::ImaginaryResidue {
            quantity: "Wigner eta-integral",
            residue: worst,
            tolerance: tol,
        });
    }
    Ok(PhaseSpaceGrid::from_values(gs, values))
}

/// `exp(−(q²+p²)/a²) / (π a²)` sampled on the grid.
pub fn gaussian_wigner(g: GaussianSpec, gs: &GridSpec) -> PhaseSpaceGrid {
    let a2 = g.a() * g.a();
    PhaseSpaceGrid::from_fn(gs, |q, p| (-(q * q + p * p) / a2).exp() / (PI * a2))
}

// ---------------------------------------------------------------------------
// Grid measures

/// `P = 2π ∫ W² dq dp`.
pub fn measure_p_wigner(w: &PhaseSpaceGrid) -> f64 {
    2.0 * PI * w.integrate_with(|v| v * v)
}

/// Sum of squared central differences `(W(x + sh) − W(x))/(sh)` along one
/// axis, each centred on its half-cell point `x + sh/2`, trapezoid-weighted
/// along the other axis. The staggered centring never leaves the grid.
fn staggered_sum(
    values: impl Fn(usize, usize) -> f64,
    n_along: usize,
    n_across: usize,
    s: usize,
    h: f64,
) -> f64 {
    let mut total = 0.0;
    for j in 0..n_across {
        let weight = if j == 0 || j == n_across - 1 { 0.5 } else { 1.0 };
        let mut line = 0.0;
        for k in 0..n_along.saturating_sub(s) {
            let d = (values(k + s, j) - values(k, j)) / (s as f64 * h);
            line += d * d;
        }
        total += weight * line;
    }
    total
}

/// `π ∫ |∇W|² dq dp` from second-order central differences spanning `s`
/// samples (effective step `s·h`), centred on half-cell points.
pub fn gradient_integral(w: &PhaseSpaceGrid, s: usize) -> f64 {
    let (dq, dp) = (w.dq(), w.dp());
    let along_q = staggered_sum(|k, j| w.at(k, j), w.nq, w.np, s, dq);
    let along_p = staggered_sum(|k, i| w.at(i, k), w.np, w.nq, s, dp);
    PI * (along_q + along_p) * dq * dp
}

/// Step-refinement study of the gradient integral.
///
/// The squared central-difference integral expands in even powers of the
/// step, `C(h) = C + c₁h² + c₂h⁴ + …`, so raw values at steps `h, 2h, 4h, 8h`
/// feed a Romberg table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientStudy {
    /// Raw central-difference values at steps `h`, `2h`, `4h`, `8h`.
    pub raw: [f64; 4],
    /// `(4 C_h − C_2h)/3`.
    pub richardson: f64,
    /// Second Romberg column from `h, 2h, 4h`; error `O(h⁶)`.
    pub romberg: f64,
    /// `log₂((C_4h − C_2h)/(C_2h − C_h))`.
    pub observed_order: f64,
    /// Relative change of `romberg` expected from halving `h`.
    pub halving_change: f64,
}

fn romberg2(c1: f64, c2: f64, c4: f64) -> f64 {
    let r1 = (4.0 * c1 - c2) / 3.0;
    let r2 = (4.0 * c2 - c4) / 3.0;
    (16.0 * r1 - r2) / 15.0
}

pub fn gradient_study(w: &PhaseSpaceGrid) -> GradientStudy {
    let raw = [1, 2, 4, 8].map(|s| gradient_integral(w, s));
    let romberg = romberg2(raw[0], raw[1], raw[2]);
    let coarse = romberg2(raw[1], raw[2], raw[3]);
    // coarse − fine ≈ 63 × the O(h⁶) error of the fine value, which is also
    // what halving h would remove
    let halving_change = ((coarse - romberg) / 63.0 / romberg).abs();
    GradientStudy {
        raw,
        richardson: (4.0 * raw[0] - raw[1]) / 3.0,
        romberg,
        observed_order: ((raw[2] - raw[1]) / (raw[1] - raw[0])).abs().log2(),
        halving_change,
    }
}

/// `C = π ∫ |∇W|² dq dp` from second-order central differences at steps
/// `h, 2h, 4h`, combined by Romberg extrapolation.
///
/// Fails when halving the step would still move the result by more than the
/// resolution tolerance.
pub fn measure_c_wigner(w: &PhaseSpaceGrid) -> Result<f64> {
    measure_c_wigner_tol(w, Tolerances::default().resolution)
}

pub fn measure_c_wigner_tol(w: &PhaseSpaceGrid, resolution: f64) -> Result<f64> {
    w.validate()?;
    let study = gradient_study(w);
    if !(study.halving_change < resolution) {
        return Err(Error::Resolution(format!(
            "halving the grid step would change C by {:.2e} (relative), above {resolution:.0e}; \
             use more grid points",
            study.halving_change
        )));
    }
    Ok(study.romberg)
}

/// Side-by-side operator and Wigner reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineComparison {
    pub operator: MeasureReport,
    pub wigner: MeasureReport,
    pub grid: GridSpec,
    pub normalization: f64,
    pub rel_delta_c: f64,
    pub rel_delta_p: f64,
    pub rel_delta_chi2: f64,
    /// `|I_operator − (C_wigner − P_wigner)/2|`.
    pub delta_i: f64,
}

impl PipelineComparison {
    pub fn max_rel_delta(&self) -> f64 {
        self.rel_delta_c.max(self.rel_delta_p).max(self.rel_delta_chi2)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Evaluates both pipelines without enforcing agreement.
pub fn compare_pipelines(rho: &DensityMatrix, gs: &GridSpec, tol: &Tolerances) -> Result<PipelineComparison> {
    require_single_mode(rho)?;
    let operator = measure_report_tol(rho, &OperatorCache::new(), tol)?;
    let grid = wigner_from_density(rho, gs)?;
    let c = measure_c_wigner_tol(&grid, tol.resolution)?;
    let p = measure_p_wigner(&grid);
    let i = (c - p) / 2.0;
    let wigner = MeasureReport {
        pipeline: Pipeline::Wigner,
        i,
        c,
        p,
        chi2: 2.0 * c / p,
        num_modes: 1,
        truncation: rho.spec().truncation,
        identity_residual: (operator.i - i).abs(),
        pure_relation_residual: None,
        max_tail_mass: rho.max_tail_mass(),
        convention_note: CONVENTION_NOTE.to_string(),
    };
    Ok(PipelineComparison {
        rel_delta_c: rel(wigner.c, operator.c),
        rel_delta_p: rel(wigner.p, operator.p),
        rel_delta_chi2: rel(wigner.chi2, operator.chi2),
        delta_i: wigner.identity_residual,
        normalization: grid.integral(),
        operator,
        wigner,
        grid: *gs,
    })
}

/// Wigner-path report: `C` and `P` from the grid, `I = (C − P)/2`.
///
/// The operator-path report is computed alongside; relative disagreement on
/// `C`, `P` or `χ²` beyond `cross_pipeline` is a consistency error.
/// `identity_residual` holds `|I_operator − (C − P)/2|`.
pub fn wigner_measure_report(rho: &DensityMatrix, gs: &GridSpec) -> Result<MeasureReport> {
    wigner_measure_report_tol(rho, gs, &Tolerances::default())
}

pub fn wigner_measure_report_tol(
    rho: &DensityMatrix,
    gs: &GridSpec,
    tol: &Tolerances,
) -> Result<MeasureReport> {
    let cmp = compare_pipelines(rho, gs, tol)?;
    check_comparison(&cmp, tol)?;
    Ok(cmp.wigner)
}

pub fn check_comparison(cmp: &PipelineComparison, tol: &Tolerances) -> Result<()> {
    if (cmp.normalization - 1.0).abs() > tol.grid_normalization {
        return Err(Error::consistency(
            "Wigner grid normalization",
            cmp.normalization,
            1.0,
            tol.grid_normalization,
        ));
    }
    let checks = [
        ("C wigner vs operator", cmp.wigner.c, cmp.operator.c, cmp.rel_delta_c),
        ("P wigner vs operator", cmp.wigner.p, cmp.operator.p, cmp.rel_delta_p),
        ("chi2 wigner vs operator", cmp.wigner.chi2, cmp.operator.chi2, cmp.rel_delta_chi2),
    ];
    for (name, w, o, d) in checks {
        if !(d < tol.cross_pipeline) {
            return Err(Error::consistency(name, w, o, tol.cross_pipeline * o.abs()));
        }
    }
    Ok(())
}
