// Copyright 2026 MacroQ Contributors
// SPDX-License-Identifier: Apache-2.0

//! Parameter sweeps over one state family.
//!
//! Points are evaluated concurrently; rows always come back ordered by
//! parameter value. A failing point records its error instead of aborting the
//! sweep.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::family::{StateRecipe, SweepParameter};
use crate::fock::OperatorCache;
use crate::io::sig17;
use crate::measures::{measure_report_tol, MeasureReport};

/// Values taken by the swept parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepValues {
    /// `steps` evenly spaced values from `start` to `stop` inclusive.
    Range { start: f64, stop: f64, steps: usize },
    List(Vec<f64>),
}

impl SweepValues {
    pub fn expand(&self) -> Result<Vec<f64>> {
        let values = match *self {
            SweepValues::Range { start, stop, steps } => {
                if steps < 1 {
                    return Err(Error::InvalidParameter("sweep needs steps >= 1".into()));
                }
                if !start.is_finite() || !stop.is_finite() {
                    return Err(Error::InvalidParameter("sweep bounds must be finite".into()));
                }
                if steps == 1 {
                    vec![start]
                } else {
                    let h = (stop - start) / (steps - 1) as f64;
                    // endpoint taken verbatim so `stop` is hit exactly
                    (0..steps)
                        .map(|k| if k == steps - 1 { stop } else { start + k as f64 * h })
                        .collect()
                }
            }
            SweepValues::List(ref v) => {
                if v.is_empty() {
                    return Err(Error::InvalidParameter("sweep value list is empty".into()));
                }
                v.clone()
            }
        };
        Ok(values)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: SweepValues,
    /// Family and fixed parameters; the swept one is overwritten per point.
    pub base: StateRecipe,
    pub truncation: Option<usize>,
    pub output: PathBuf,
}

impl SweepSpec {
    /// Checks family/parameter compatibility and expands the value list,
    /// sorted ascending.
    pub fn points(&self) -> Result<Vec<f64>> {
        let mut values = self.values.expand()?;
        for &v in &values {
            if self.parameter.is_integer() && (v < 0.0 || v.fract() != 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "parameter {} takes non-negative integers, got {v}",
                    self.parameter
                )));
            }
        }
        self.base.with_parameter(self.parameter, values[0])?;
        values.sort_by(f64::total_cmp);
        Ok(values)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<MeasureReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Exit code class of `error`.
    #[serde(skip)]
    pub error_code: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub parameter: String,
    pub family: String,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn succeeded(&self) -> usize {
        self.rows.iter().filter(|r| r.report.is_some()).count()
    }

    /// Table with columns `parameter,I,C,P,chi2,errors`; failed points leave
    /// the measure columns empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("parameter,I,C,P,chi2,errors\n");
        for row in &self.rows {
            out.push_str(&sig17(row.parameter));
            match (&row.report, &row.error) {
                (Some(r), _) => {
                    for v in [r.i, r.c, r.p, r.chi2] {
                        out.push(',');
                        out.push_str(&sig17(v));
                    }
                    out.push(',');
                }
                (None, err) => {
                    out.push_str(",,,,,");
                    out.push_str(&csv_field(err.as_deref().unwrap_or("unknown error")));
                }
            }
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn evaluate(spec: &SweepSpec, value: f64, cache: &OperatorCache, tol: &Tolerances) -> Result<MeasureReport> {
    let recipe = spec.base.with_parameter(spec.parameter, value)?;
    let rho = recipe.build(spec.truncation)?.density();
    measure_report_tol(&rho, cache, tol)
}

/// Evaluates every point of the sweep (operator path).
pub fn run_sweep(spec: &SweepSpec, tol: &Tolerances) -> Result<SweepResult> {
    let points = spec.points()?;
    let cache = OperatorCache::new();
    let rows = points
        .par_iter()
        .map(|&v| match evaluate(spec, v, &cache, tol) {
            Ok(report) => SweepRow { parameter: v, report: Some(report), error: None, error_code: None },
            Err(e) => SweepRow {
                parameter: v,
                report: None,
                error: Some(e.to_string()),
                error_code: Some(e.exit_code()),
            },
        })
        .collect();
    Ok(SweepResult {
        parameter: spec.parameter.name().to_string(),
        family: spec.base.family().name().to_string(),
        rows,
    })
}

/// Path of the JSON sidecar written next to a sweep table.
pub fn sidecar_path(output: &Path) -> PathBuf {
    output.with_extension("reports.json")
}

/// Writes the CSV table and its JSON sidecar of full reports.
///
/// The sidecar carries `generated_at`; the CSV has no wall-clock content.
pub fn write_sweep(result: &SweepResult, output: &Path, generated_at: &str) -> Result<PathBuf> {
    fs::write(output, result.to_csv())?;
    #[derive(Serialize)]
    struct Sidecar<'a> {
        generated_at: &'a str,
        #[serde(flatten)]
        result: &'a SweepResult,
    }
    let sidecar = sidecar_path(output);
    let text = serde_json::to_string_pretty(&Sidecar { generated_at, result })?;
    fs::write(&sidecar, text)?;
    Ok(sidecar)
}
