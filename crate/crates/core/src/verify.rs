// Copyright 2026 MacroQ Contributors
// SPDX-License-Identifier: Apache-2.0

//! Built-in invariant suite.
//!
//! Every check compares two independently computed numbers (or a computed
//! number and a closed form) against a tolerance. Checks are grouped:
//!
//! * `gaussian` — thermal family against `I = (1 − a²)/(2a⁴)`, `χ² = 2/a²`,
//!   on both pipelines;
//! * `degeneracy` — uniform Fock mixtures and two-coherent-state mixtures;
//! * `identity` — `I = (C − M·P)/2` and `χ² > 0` on a mixed corpus including
//!   two-mode products;
//! * `pure-relation` — `I = χ²/4 − M/2` on seeded random pure states;
//! * `dual-pipeline` — Wigner-grid `C`, `P` against operator traces;
//! * `properties` — displacement invariance, tensor composition, agreement of
//!   the two trace forms of `I`;
//! * `corpus` — user-supplied state files.
//!
//! Informational entries never fail; they surface convention-dependent
//! numbers side by side.

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::Tolerances;
use crate::error::Result;
use crate::family::StateRecipe;
use crate::fock::{ModeSpec, OperatorCache};
use crate::io::{read_state_file, StateData};
use crate::linalg::Complex64;
use crate::measures::{measure_c_with, measure_i_three_term, measure_i_tol, measure_i_two_term};
use crate::random::StateSampler;
use crate::states::{
    cat_mixture, cat_state, coherent_state, displace, fock_mixture, fock_state, product_state, purity,
    thermal_state, DensityMatrix, GaussianSpec,
};
use crate::wigner::{compare_pipelines, GridSpec, DEFAULT_POINTS};

/// Cross-pipeline and resolution tolerance used below the default grid size.
pub const COARSE_GRID_TOLERANCE: f64 = 5e-3;
/// Relative agreement of operator-path values with closed forms.
pub const CLOSED_FORM_REL: f64 = 1e-9;
/// `|I|` bound for uniform Fock mixtures including the vacuum.
pub const FOCK_MIXTURE_I: f64 = 1e-12;
/// `|χ² − 2|` bound for uniform Fock mixtures including the vacuum.
pub const FOCK_MIXTURE_CHI2: f64 = 1e-10;
/// Displacement invariance bounds on `I` and `χ²`.
pub const DISPLACEMENT_I: f64 = 1e-7;
pub const DISPLACEMENT_CHI2: f64 = 1e-6;
/// Seed of the random pure-state samples.
pub const PURE_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    /// Points per axis of the Wigner grids.
    pub grid_points: usize,
    /// Factor applied to every tolerance.
    pub tol_factor: f64,
    /// Extra state files checked after the built-in suite.
    pub corpus: Vec<PathBuf>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            grid_points: DEFAULT_POINTS,
            tol_factor: 1.0,
            corpus: Vec::new(),
        }
    }
}

impl VerifyConfig {
    /// Tolerances in effect: defaults, loosened for grids coarser than the
    /// default, then multiplied by `tol_factor`.
    pub fn tolerances(&self) -> Tolerances {
        let mut tol = Tolerances::default();
        if self.grid_points < DEFAULT_POINTS {
            tol.cross_pipeline = COARSE_GRID_TOLERANCE;
            tol.resolution = COARSE_GRID_TOLERANCE;
        }
        tol.scaled(self.tol_factor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub group: &'static str,
    pub name: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub generated_at: String,
    pub grid_points: usize,
    pub tol_factor: f64,
    pub tolerances: Tolerances,
    pub passed: usize,
    pub failed: usize,
    pub informational: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifySummary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    /// One line per check, then a totals line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Info => "INFO",
            };
            let _ = writeln!(out, "{tag}  {}/{}: {}", c.group, c.name, c.detail);
        }
        let _ = writeln!(
            out,
            "{} checks: {} passed, {} failed, {} informational (grid {}x{}, tolerance factor {})",
            self.checks.len(),
            self.passed,
            self.failed,
            self.informational,
            self.grid_points,
            self.grid_points,
            self.tol_factor
        );
        out
    }
}

/// How a computed value is compared with its reference.
#[derive(Clone, Copy)]
enum Cmp {
    Abs,
    Rel,
}

struct Suite {
    checks: Vec<CheckResult>,
}

impl Suite {
    fn push(&mut self, check: CheckResult) {
        self.checks.push(check);
    }

    fn compare(&mut self, group: &'static str, name: impl Into<String>, value: f64, reference: f64, tol: f64, cmp: Cmp) {
        let dev = match cmp {
            Cmp::Abs => (value - reference).abs(),
            Cmp::Rel if reference == 0.0 => value.abs(),
            Cmp::Rel => ((value - reference) / reference).abs(),
        };
        let kind = match cmp {
            Cmp::Abs => "|diff|",
            Cmp::Rel => "rel diff",
        };
        let pass = dev < tol;
        self.push(CheckResult {
            group,
            name: name.into(),
            status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
            value: Some(value),
            reference: Some(reference),
            tolerance: Some(tol),
            detail: format!("{value:.12e} vs {reference:.12e}, {kind} {dev:.2e} (tol {tol:.0e})"),
        });
    }

    fn assert(&mut self, group: &'static str, name: impl Into<String>, pass: bool, detail: String) {
        self.push(CheckResult {
            group,
            name: name.into(),
            status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
            value: None,
            reference: None,
            tolerance: None,
            detail,
        });
    }

    fn info(&mut self, group: &'static str, name: impl Into<String>, value: Option<f64>, reference: Option<f64>, detail: String) {
        self.push(CheckResult {
            group,
            name: name.into(),
            status: CheckStatus::Info,
            value,
            reference,
            tolerance: None,
            detail,
        });
    }

    fn error(&mut self, group: &'static str, name: impl Into<String>, err: impl std::fmt::Display) {
        self.assert(group, name, false, err.to_string());
    }

    /// Runs `f`, turning an error into a failed check.
    fn guard(&mut self, group: &'static str, name: &str, f: impl FnOnce(&mut Suite) -> Result<()>) {
        if let Err(e) = f(self) {
            self.error(group, name, e);
        }
    }
}

fn single(n: usize) -> Result<ModeSpec> {
    ModeSpec::single(n)
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn recipe_state(recipe: StateRecipe) -> Result<DensityMatrix> {
    Ok(recipe.build(None)?.density())
}

/// Mixed corpus used by the identity and positivity checks: single-mode
/// states of every family plus two-mode products.
pub fn identity_corpus() -> Result<Vec<(String, DensityMatrix)>> {
    let mut out = vec![
        ("vacuum".to_string(), fock_state(single(10)?, 0)?.projector()),
        ("fock n=1".into(), recipe_state(StateRecipe::Fock { n: 1 })?),
        ("fock n=3".into(), recipe_state(StateRecipe::Fock { n: 3 })?),
        (
            "coherent alpha=1+0.5i".into(),
            recipe_state(StateRecipe::Coherent { alpha: Complex64::new(1.0, 0.5) })?,
        ),
        ("even cat alpha=2".into(), recipe_state(StateRecipe::Cat { alpha: re(2.0), phase: 0.0 })?),
        ("odd cat alpha=1.5".into(), recipe_state(StateRecipe::Cat { alpha: re(1.5), phase: PI })?),
        ("cat mixture alpha=1".into(), recipe_state(StateRecipe::CatMixture { alpha: re(1.0) })?),
        (
            "fock mixture d=3 with vacuum".into(),
            recipe_state(StateRecipe::FockMixture { d: 3, include_vacuum: true })?,
        ),
        (
            "fock mixture d=4 without vacuum".into(),
            recipe_state(StateRecipe::FockMixture { d: 4, include_vacuum: false })?,
        ),
        ("thermal a=sqrt2".into(), recipe_state(StateRecipe::Thermal { a: SQRT_2 })?),
        ("thermal a=2".into(), recipe_state(StateRecipe::Thermal { a: 2.0 })?),
        ("random mixed N=10".into(), StateSampler::new(PURE_SEED + 1).mixed(single(10)?)?),
    ];
    let s20 = single(20)?;
    out.push((
        "thermal a=1.2 x cat mixture alpha=1".into(),
        product_state(
            &thermal_state(s20, GaussianSpec::new(1.2)?)?,
            &cat_mixture(s20, re(1.0))?,
        )?,
    ));
    let s12 = single(12)?;
    out.push((
        "fock n=1 x coherent alpha=0.5".into(),
        product_state(&fock_state(s12, 1)?.projector(), &coherent_state(s12, re(0.5))?.projector())?,
    ));
    Ok(out)
}

/// Single-mode states compared across the two pipelines.
pub fn dual_pipeline_corpus() -> Result<Vec<(String, DensityMatrix)>> {
    Ok(vec![
        ("vacuum".to_string(), fock_state(single(10)?, 0)?.projector()),
        ("fock n=1".into(), recipe_state(StateRecipe::Fock { n: 1 })?),
        ("coherent alpha=1".into(), recipe_state(StateRecipe::Coherent { alpha: re(1.0) })?),
        ("cat alpha=1.5".into(), recipe_state(StateRecipe::Cat { alpha: re(1.5), phase: 0.0 })?),
        ("cat mixture alpha=1".into(), recipe_state(StateRecipe::CatMixture { alpha: re(1.0) })?),
        ("thermal a=sqrt2".into(), recipe_state(StateRecipe::Thermal { a: SQRT_2 })?),
    ])
}

/// `I` of a diagonal state from its populations alone:
/// `Σₙ pₙ² n − Σₙ pₙ pₙ₋₁ n`.
pub fn diagonal_i_oracle(populations: &[f64]) -> f64 {
    let n = populations.len();
    let mut total = 0.0;
    for k in 1..n {
        total += k as f64 * (populations[k] * populations[k] - populations[k] * populations[k - 1]);
    }
    total
}

/// `I` of `(|α⟩⟨α| + |−α⟩⟨−α|)/2` in infinite dimension.
pub fn cat_mixture_i_closed_form(alpha: f64) -> f64 {
    -alpha * alpha * (-4.0 * alpha * alpha).exp()
}

struct Operator {
    i: f64,
    c: f64,
    p: f64,
}

impl Operator {
    fn chi2(&self) -> f64 {
        2.0 * self.c / self.p
    }
}

/// Operator-path values without internal consistency gating, so that the
/// suite can report disagreements instead of stopping at them.
fn operator_values(rho: &DensityMatrix, cache: &OperatorCache, tol: &Tolerances) -> Result<Operator> {
    Ok(Operator {
        i: measure_i_tol(rho, cache, tol)?,
        c: measure_c_with(rho, cache)?,
        p: purity(rho)?,
    })
}

fn gaussian_checks(s: &mut Suite, cfg: &VerifyConfig, tol: &Tolerances, cache: &OperatorCache) {
    const G: &str = "gaussian";
    for (label, a) in [("1", 1.0), ("sqrt2", SQRT_2), ("2", 2.0), ("5", 5.0)] {
        s.guard(G, &format!("a={label}"), |s| {
            let rho = recipe_state(StateRecipe::Thermal { a })?;
            let op = operator_values(&rho, cache, tol)?;
            let i_ref = (1.0 - a * a) / (2.0 * a.powi(4));
            let chi2_ref = 2.0 / (a * a);
            let rel = CLOSED_FORM_REL * cfg.tol_factor;
            s.compare(G, format!("a={label} I operator"), op.i, i_ref, rel, Cmp::Rel);
            s.compare(G, format!("a={label} chi2 operator"), op.chi2(), chi2_ref, rel, Cmp::Rel);
            if a > 1.0 {
                s.assert(G, format!("a={label} I < 0"), op.i < 0.0, format!("I = {:.6e}", op.i));
                s.assert(
                    G,
                    format!("a={label} 0 < chi2 < 2"),
                    op.chi2() > 0.0 && op.chi2() < 2.0,
                    format!("chi2 = {:.6e}", op.chi2()),
                );
            }
            let gs = GridSpec::for_truncation(rho.spec().truncation, cfg.grid_points)?;
            let cmp = compare_pipelines(&rho, &gs, tol)?;
            let w = &cmp.wigner;
            s.compare(G, format!("a={label} C wigner"), w.c, 1.0 / a.powi(4), tol.cross_pipeline, Cmp::Rel);
            s.compare(G, format!("a={label} P wigner"), w.p, 1.0 / (a * a), tol.cross_pipeline, Cmp::Rel);
            s.compare(G, format!("a={label} chi2 wigner"), w.chi2, chi2_ref, tol.cross_pipeline, Cmp::Rel);
            s.compare(G, format!("a={label} I wigner"), w.i, i_ref, tol.cross_pipeline, Cmp::Abs);
            Ok(())
        });
    }
}

fn degeneracy_checks(s: &mut Suite, cfg: &VerifyConfig, tol: &Tolerances, cache: &OperatorCache) {
    const G: &str = "degeneracy";
    let f = cfg.tol_factor;
    for d in [1usize, 2, 3, 5, 8] {
        s.guard(G, &format!("fock mixture d={d}"), |s| {
            let with_vac = recipe_state(StateRecipe::FockMixture { d, include_vacuum: true })?;
            let op = operator_values(&with_vac, cache, tol)?;
            s.compare(G, format!("d={d} with vacuum I = 0"), op.i, 0.0, FOCK_MIXTURE_I * f, Cmp::Abs);
            s.compare(G, format!("d={d} with vacuum chi2 = 2"), op.chi2(), 2.0, FOCK_MIXTURE_CHI2 * f, Cmp::Abs);

            // the n = 1..d reading of the uniform mixture
            let without = recipe_state(StateRecipe::FockMixture { d, include_vacuum: false })?;
            let op_without = operator_values(&without, cache, tol)?;
            let oracle = diagonal_i_oracle(&without.matrix().diagonal().iter().map(|z| z.re).collect::<Vec<_>>());
            s.compare(G, format!("d={d} without vacuum I vs population oracle"), op_without.i, oracle, tol.identity, Cmp::Abs);
            s.info(
                G,
                format!("d={d} vacuum convention"),
                Some(op_without.i),
                Some(op.i),
                format!(
                    "uniform mixture over n=0..{}: I = {:.3e}; over n=1..{d}: I = {:.12e} (1/d^2 = {:.12e}); \
                     only the former gives I = 0",
                    d - 1,
                    op.i,
                    op_without.i,
                    1.0 / (d * d) as f64
                ),
            );
            Ok(())
        });
    }
    for alpha in [0.5, 1.0, 2.0, 3.0] {
        s.guard(G, &format!("cat mixture alpha={alpha}"), |s| {
            let rho = recipe_state(StateRecipe::CatMixture { alpha: re(alpha) })?;
            let op = operator_values(&rho, cache, tol)?;
            let overlap2 = (-4.0 * alpha * alpha).exp();
            let i_ref = cat_mixture_i_closed_form(alpha);
            let p_ref = (1.0 + overlap2) / 2.0;
            let chi2_ref = 2.0 + 4.0 * i_ref / p_ref;
            s.compare(G, format!("alpha={alpha} I closed form"), op.i, i_ref, tol.identity, Cmp::Abs);
            s.compare(G, format!("alpha={alpha} P closed form"), op.p, p_ref, tol.identity, Cmp::Abs);
            s.compare(G, format!("alpha={alpha} chi2 closed form"), op.chi2(), chi2_ref, tol.identity, Cmp::Abs);
            s.info(
                G,
                format!("alpha={alpha} overlap correction"),
                Some(op.i),
                Some(0.0),
                format!(
                    "I = -|alpha|^2 exp(-4|alpha|^2) = {:.6e}, chi2 - 2 = {:.6e}; I = 0 and chi2 = 2 hold only \
                     once the coherent-state overlap exp(-2|alpha|^2) is negligible",
                    op.i,
                    op.chi2() - 2.0
                ),
            );
            Ok(())
        });
    }
}

fn identity_checks(s: &mut Suite, tol: &Tolerances, cache: &OperatorCache, corpus: &[(String, DensityMatrix)]) {
    const G: &str = "identity";
    for (name, rho) in corpus {
        s.guard(G, name, |s| {
            let op = operator_values(rho, cache, tol)?;
            let m = rho.num_modes() as f64;
            s.compare(G, format!("{name}: I = (C - M P)/2"), op.i, (op.c - m * op.p) / 2.0, tol.identity, Cmp::Abs);
            s.assert(G, format!("{name}: chi2 > 0"), op.chi2() > 0.0, format!("chi2 = {:.6e}", op.chi2()));
            Ok(())
        });
    }
}

fn pure_relation_checks(s: &mut Suite, tol: &Tolerances, cache: &OperatorCache) {
    const G: &str = "pure-relation";
    let mut sampler = StateSampler::new(PURE_SEED);
    let cases = (0..50).map(|k| (format!("random N=12 #{k}"), ModeSpec::single(12)))
        .chain((0..10).map(|k| (format!("random two-mode N=8 #{k}"), ModeSpec::new(2, 8))));
    for (name, spec) in cases {
        s.guard(G, &name, |s| {
            let psi = sampler.pure(spec?)?;
            let rho = psi.projector();
            let op = operator_values(&rho, cache, tol)?;
            let m = rho.num_modes() as f64;
            s.compare(G, format!("{name}: I = chi2/4 - M/2"), op.i, op.chi2() / 4.0 - m / 2.0, tol.pure_relation, Cmp::Abs);
            Ok(())
        });
    }
}

fn dual_pipeline_checks(s: &mut Suite, cfg: &VerifyConfig, tol: &Tolerances, name: &str, rho: &DensityMatrix) {
    const G: &str = "dual-pipeline";
    s.guard(G, name, |s| {
        let gs = GridSpec::for_truncation(rho.spec().truncation, cfg.grid_points)?;
        let cmp = compare_pipelines(rho, &gs, tol)?;
        let (w, o) = (&cmp.wigner, &cmp.operator);
        s.compare(G, format!("{name}: grid normalization"), cmp.normalization, 1.0, tol.grid_normalization, Cmp::Abs);
        s.compare(G, format!("{name}: C"), w.c, o.c, tol.cross_pipeline, Cmp::Rel);
        s.compare(G, format!("{name}: P"), w.p, o.p, tol.cross_pipeline, Cmp::Rel);
        s.compare(G, format!("{name}: chi2"), w.chi2, o.chi2, tol.cross_pipeline, Cmp::Rel);
        s.compare(G, format!("{name}: (C - P)/2 vs operator I"), w.i, o.i, tol.cross_pipeline, Cmp::Abs);
        Ok(())
    });
}

fn property_checks(s: &mut Suite, cfg: &VerifyConfig, tol: &Tolerances, cache: &OperatorCache, corpus: &[(String, DensityMatrix)]) {
    const G: &str = "properties";
    let f = cfg.tol_factor;
    s.guard(G, "displacement invariance", |s| {
        let s40 = single(40)?;
        let states = [
            ("fock n=1".to_string(), fock_state(s40, 1)?.projector()),
            ("cat mixture alpha=0.7".into(), cat_mixture(s40, re(0.7))?),
            ("fock mixture d=3".into(), fock_mixture(s40, 3, true)?),
            ("odd cat alpha=0.7".into(), cat_state(s40, re(0.7), PI)?.projector()),
            ("thermal a=1.2".into(), thermal_state(single(60)?, GaussianSpec::new(1.2)?)?),
        ];
        let betas = [re(0.5), Complex64::new(0.6, -0.8), Complex64::new(0.0, 0.3)];
        for (name, rho) in &states {
            let before = operator_values(rho, cache, tol)?;
            for beta in betas {
                let after = operator_values(&displace(rho, 1, beta)?, cache, tol)?;
                let label = format!("{name}, beta={}{:+}i", beta.re, beta.im);
                s.compare(G, format!("{label}: I"), after.i, before.i, DISPLACEMENT_I * f, Cmp::Abs);
                s.compare(G, format!("{label}: chi2"), after.chi2(), before.chi2(), DISPLACEMENT_CHI2 * f, Cmp::Abs);
            }
        }
        Ok(())
    });
    s.guard(G, "tensor composition", |s| {
        let s20 = single(20)?;
        let s16 = single(16)?;
        let pairs = [
            (
                "thermal a=1.2 x cat mixture alpha=1",
                thermal_state(s20, GaussianSpec::new(1.2)?)?,
                cat_mixture(s20, re(1.0))?,
            ),
            (
                "fock n=1 x odd cat alpha=0.7",
                fock_state(s16, 1)?.projector(),
                cat_state(s16, re(0.7), PI)?.projector(),
            ),
        ];
        for (name, r1, r2) in &pairs {
            let a = operator_values(r1, cache, tol)?;
            let b = operator_values(r2, cache, tol)?;
            let joint = operator_values(&product_state(r1, r2)?, cache, tol)?;
            s.compare(G, format!("{name}: I(r1 x r2) = P2 I1 + P1 I2"), joint.i, b.p * a.i + a.p * b.i, tol.identity, Cmp::Abs);
        }
        Ok(())
    });
    for (name, rho) in corpus {
        s.guard(G, name, |s| {
            let three = measure_i_three_term(rho, cache)?;
            let two = measure_i_two_term(rho, cache)?;
            s.compare(G, format!("{name}: three-term vs two-term I"), three, two, tol.i_forms, Cmp::Abs);
            Ok(())
        });
    }
}

fn corpus_file_checks(s: &mut Suite, cfg: &VerifyConfig, tol: &Tolerances, cache: &OperatorCache, path: &Path) {
    const G: &str = "corpus";
    let name = path.display().to_string();
    let state = match read_state_file(path) {
        Ok((state, _)) => state,
        Err(e) => {
            s.error(G, format!("{name}: load"), e);
            return;
        }
    };
    s.assert(G, format!("{name}: load"), true, format!("valid state on {}", state.spec()));
    let rho = state.density();
    s.guard(G, &name, |s| {
        let op = operator_values(&rho, cache, tol)?;
        let m = rho.num_modes() as f64;
        s.compare(G, format!("{name}: I = (C - M P)/2"), op.i, (op.c - m * op.p) / 2.0, tol.identity, Cmp::Abs);
        s.assert(G, format!("{name}: chi2 > 0"), op.chi2() > 0.0, format!("chi2 = {:.6e}", op.chi2()));
        if let StateData::Pure(_) = state {
            s.compare(G, format!("{name}: I = chi2/4 - M/2"), op.i, op.chi2() / 4.0 - m / 2.0, tol.pure_relation, Cmp::Abs);
        }
        Ok(())
    });
    if rho.num_modes() == 1 {
        dual_pipeline_checks(s, cfg, tol, &name, &rho);
    }
}

/// Runs the whole suite. `generated_at` is stored verbatim so that callers
/// control the only wall-clock field.
pub fn run_verify(cfg: &VerifyConfig, generated_at: &str) -> VerifySummary {
    let tol = cfg.tolerances();
    let cache = OperatorCache::new();
    let mut s = Suite { checks: Vec::new() };

    gaussian_checks(&mut s, cfg, &tol, &cache);
    degeneracy_checks(&mut s, cfg, &tol, &cache);
    match identity_corpus() {
        Ok(corpus) => {
            identity_checks(&mut s, &tol, &cache, &corpus);
            property_checks(&mut s, cfg, &tol, &cache, &corpus);
        }
        Err(e) => s.error("identity", "corpus construction", e),
    }
    pure_relation_checks(&mut s, &tol, &cache);
    match dual_pipeline_corpus() {
        Ok(corpus) => {
            for (name, rho) in &corpus {
                dual_pipeline_checks(&mut s, cfg, &tol, name, rho);
            }
        }
        Err(e) => s.error("dual-pipeline", "corpus construction", e),
    }
    for path in &cfg.corpus {
        corpus_file_checks(&mut s, cfg, &tol, &cache, path);
    }

    let count = |st| s.checks.iter().filter(|c| c.status == st).count();
    VerifySummary {
        generated_at: generated_at.to_string(),
        grid_points: cfg.grid_points,
        tol_factor: cfg.tol_factor,
        tolerances: tol,
        passed: count(CheckStatus::Pass),
        failed: count(CheckStatus::Fail),
        informational: count(CheckStatus::Info),
        checks: s.checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_oracle_values() {
        // uniform over n = 1..3: 1/d²
        let p = [0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0];
        assert!((diagonal_i_oracle(&p) - 1.0 / 9.0).abs() < 1e-15);
        // uniform over n = 0..2: 0
        let p = [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0];
        assert!(diagonal_i_oracle(&p).abs() < 1e-15);
        // Fock |n⟩: n
        assert_eq!(diagonal_i_oracle(&[0.0, 0.0, 1.0, 0.0]), 2.0);
    }

    #[test]
    fn coarse_grid_loosens_pipeline_tolerances() {
        let cfg = VerifyConfig { grid_points: 128, ..VerifyConfig::default() };
        assert_eq!(cfg.tolerances().cross_pipeline, COARSE_GRID_TOLERANCE);
        let cfg = VerifyConfig { tol_factor: 2.0, ..VerifyConfig::default() };
        assert_eq!(cfg.tolerances().identity, 2e-9);
        assert_eq!(cfg.tolerances().cross_pipeline, 2e-3);
    }

    #[test]
    fn corpus_sizes() {
        let corpus = identity_corpus().unwrap();
        assert!(corpus.len() >= 12);
        assert!(corpus.iter().any(|(_, r)| r.num_modes() == 2));
        assert_eq!(dual_pipeline_corpus().unwrap().len(), 6);
    }
}
