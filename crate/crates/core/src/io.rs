// Copyright 2026 MacroQ Contributors
// SPDX-License-Identifier: Apache-2.0

//! File formats: JSON state files, Wigner grid CSV/JSON exports.
//!
//! State file:
//!
//! ```json
//! {"format_version": 1,
//!  "spec": {"num_modes": 1, "truncation": 10},
//!  "kind": "pure" | "mixed",
//!  "data": [[re, im], ...]            // pure: amplitudes
//!        | [[[re, im], ...], ...],    // mixed: matrix rows
//!  "metadata": {...}}
//! ```
//!
//! Floats are written with the shortest representation that round-trips, so
//! reading a file back reproduces every value bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::fock::ModeSpec;
use crate::linalg::{Complex64, ComplexMatrix};
use crate::states::{DensityMatrix, PureState};
use crate::wigner::{GridSpec, PhaseSpaceGrid};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

/// A state as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub enum StateData {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl StateData {
    pub fn spec(&self) -> ModeSpec {
        match self {
            StateData::Pure(s) => s.spec(),
            StateData::Mixed(r) => r.spec(),
        }
    }

    pub fn kind(&self) -> StateKind {
        match self {
            StateData::Pure(_) => StateKind::Pure,
            StateData::Mixed(_) => StateKind::Mixed,
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            StateData::Pure(s) => s.projector(),
            StateData::Mixed(r) => r.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct StateFile {
    format_version: u32,
    spec: ModeSpec,
    kind: StateKind,
    data: Value,
    #[serde(default)]
    metadata: Map<String, Value>,
}

fn pair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Serializes a state and its free-form metadata.
pub fn state_to_json(state: &StateData, metadata: &Map<String, Value>) -> Result<String> {
    let data = match state {
        StateData::Pure(s) => serde_json::to_value(s.amplitudes().iter().map(pair).collect::<Vec<_>>())?,
        StateData::Mixed(r) => {
            let m = r.matrix();
            let rows: Vec<Vec<[f64; 2]>> = (0..m.rows()).map(|i| m.row(i).iter().map(pair).collect()).collect();
            serde_json::to_value(rows)?
        }
    };
    let file = StateFile {
        format_version: FORMAT_VERSION,
        spec: state.spec(),
        kind: state.kind(),
        data,
        metadata: metadata.clone(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

/// Parses and validates a state file, returning the state and its metadata.
pub fn state_from_json(text: &str) -> Result<(StateData, Map<String, Value>)> {
    let file: StateFile = serde_json::from_str(text)?;
    if file.format_version != FORMAT_VERSION {
        return Err(Error::InvalidParameter(format!(
            "unsupported state format_version {}",
            file.format_version
        )));
    }
    let spec = ModeSpec::new(file.spec.num_modes, file.spec.truncation)?;
    let to_c = |p: [f64; 2]| Complex64::new(p[0], p[1]);
    let state = match file.kind {
        StateKind::Pure => {
            let amps: Vec<[f64; 2]> = serde_json::from_value(file.data)?;
            StateData::Pure(PureState::new(spec, amps.into_iter().map(to_c).collect())?)
        }
        StateKind::Mixed => {
            let rows: Vec<Vec<[f64; 2]>> = serde_json::from_value(file.data)?;
            let dim = spec.dim();
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(Error::InvalidParameter(format!(
                    "mixed state data must be a {dim}x{dim} matrix"
                )));
            }
            let flat = rows.into_iter().flatten().map(to_c).collect();
            StateData::Mixed(DensityMatrix::new(spec, ComplexMatrix::new(dim, dim, flat)?)?)
        }
    };
    Ok((state, file.metadata))
}

pub fn write_state_file(path: &Path, state: &StateData, metadata: &Map<String, Value>) -> Result<()> {
    fs::write(path, state_to_json(state, metadata)?)?;
    Ok(())
}

pub fn read_state_file(path: &Path) -> Result<(StateData, Map<String, Value>)> {
    state_from_json(&fs::read_to_string(path)?)
}

/// Formats a float with 17 significant digits.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with header `q,p,w`, one row per sample, `q` varying slowest.
pub fn grid_to_csv(grid: &PhaseSpaceGrid) -> String {
    let mut out = String::with_capacity(grid.values.len() * 72);
    out.push_str("q,p,w\n");
    for i in 0..grid.nq {
        let q = sig17(grid.q(i));
        for j in 0..grid.np {
            let _ = writeln!(out, "{q},{},{}", sig17(grid.p(j)), sig17(grid.at(i, j)));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEnvelope {
    pub format_version: u32,
    pub grid_spec: GridSpec,
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    /// `values[i][j] = W(q_i, p_j)`.
    pub values: Vec<Vec<f64>>,
    #[serde(default)]
    pub metadata: Map<String, Value>,
}

pub fn grid_to_json(grid: &PhaseSpaceGrid, gs: &GridSpec, metadata: &Map<String, Value>) -> Result<String> {
    let env = GridEnvelope {
        format_version: FORMAT_VERSION,
        grid_spec: *gs,
        q_min: grid.q_min,
        q_max: grid.q_max,
        p_min: grid.p_min,
        p_max: grid.p_max,
        values: grid.values.chunks(grid.np).map(<[f64]>::to_vec).collect(),
        metadata: metadata.clone(),
    };
    Ok(serde_json::to_string(&env)?)
}

pub fn grid_from_json(text: &str) -> Result<(PhaseSpaceGrid, GridSpec)> {
    let env: GridEnvelope = serde_json::from_str(text)?;
    let nq = env.values.len();
    let np = env.values.first().map_or(0, Vec::len);
    let grid = PhaseSpaceGrid {
        q_min: env.q_min,
        q_max: env.q_max,
        p_min: env.p_min,
        p_max: env.p_max,
        nq,
        np,
        values: env.values.into_iter().flatten().collect(),
    };
    grid.validate()?;
    Ok((grid, env.grid_spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{cat_mixture, coherent_state, fock_state};
    use crate::wigner::wigner_from_density;
    use proptest::prelude::*;

    fn meta() -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("family".into(), Value::from("test"));
        m
    }

    proptest! {
        #[test]
        fn pure_state_round_trip_is_exact(re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let alpha = Complex64::new(re, im);
            let spec = ModeSpec::single(crate::states::default_coherent_truncation(alpha)).unwrap();
            let state = StateData::Pure(coherent_state(spec, alpha).unwrap());
            let text = state_to_json(&state, &meta()).unwrap();
            let (back, m) = state_from_json(&text).unwrap();
            prop_assert_eq!(back, state);
            prop_assert_eq!(m, meta());
        }
    }

    #[test]
    fn mixed_state_round_trip_is_exact() {
        let a = Complex64::new(0.7, 0.2);
        let rho = cat_mixture(ModeSpec::single(16).unwrap(), a).unwrap();
        let state = StateData::Mixed(rho);
        let (back, _) = state_from_json(&state_to_json(&state, &Map::new()).unwrap()).unwrap();
        assert_eq!(back, state);
    }

    #[test]
    fn corrupted_trace_is_rejected() {
        let text = r#"{"format_version":1,"spec":{"num_modes":1,"truncation":3},"kind":"mixed",
            "data":[[[0.9,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]]}"#;
        match state_from_json(text) {
            Err(Error::InvalidState { invariant, .. }) => assert_eq!(invariant, "unit trace"),
            other => panic!("{other:?}"),
        }
        let wrong_shape = r#"{"format_version":1,"spec":{"num_modes":1,"truncation":3},"kind":"mixed","data":[[[1,0]]]}"#;
        assert!(state_from_json(wrong_shape).is_err());
        let bad_version = r#"{"format_version":9,"spec":{"num_modes":1,"truncation":3},"kind":"pure","data":[[1,0],[0,0],[0,0]]}"#;
        assert!(state_from_json(bad_version).is_err());
    }

    #[test]
    fn grid_exports() {
        let rho = fock_state(ModeSpec::single(4).unwrap(), 1).unwrap().projector();
        let gs = GridSpec::new(5.0, 32, 32).unwrap();
        let grid = wigner_from_density(&rho, &gs).unwrap();
        let csv = grid_to_csv(&grid);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("q,p,w"));
        assert_eq!(csv.lines().count(), 1 + 32 * 32);
        let first: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(first, vec![grid.q(0), grid.p(0), grid.at(0, 0)]);
        let (back, spec) = grid_from_json(&grid_to_json(&grid, &gs, &Map::new()).unwrap()).unwrap();
        assert_eq!(back, grid);
        assert_eq!(spec, gs);
    }

    #[test]
    fn sig17_round_trips() {
        for x in [1.0 / 3.0, std::f64::consts::PI, -2.5e-300, 0.0] {
            assert_eq!(sig17(x).parse::<f64>().unwrap(), x);
        }
    }
}
