// Copyright 2026 MacroQ Contributors
// SPDX-License-Identifier: Apache-2.0

//! Named single-mode state families with their default truncations.

use std::fmt;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::fock::ModeSpec;
use crate::io::StateData;
use crate::linalg::Complex64;
use crate::states::{
    cat_mixture, cat_state, coherent_state, default_coherent_truncation, default_thermal_truncation,
    fock_mixture, fock_state, thermal_state, GaussianSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Fock,
    Coherent,
    Cat,
    CatMixture,
    FockMixture,
    Thermal,
    Product,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Fock,
        Family::Coherent,
        Family::Cat,
        Family::CatMixture,
        Family::FockMixture,
        Family::Thermal,
        Family::Product,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Fock => "fock",
            Family::Coherent => "coherent",
            Family::Cat => "cat",
            Family::CatMixture => "cat-mixture",
            Family::FockMixture => "fock-mixture",
            Family::Thermal => "thermal",
            Family::Product => "product",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Family::ALL.iter().map(Family::name).collect();
                Error::InvalidParameter(format!("unknown family '{s}', expected one of {}", names.join(", ")))
            })
    }
}

/// A fully parameterized single-mode state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateRecipe {
    Fock { n: usize },
    Coherent { alpha: Complex64 },
    Cat { alpha: Complex64, phase: f64 },
    CatMixture { alpha: Complex64 },
    FockMixture { d: usize, include_vacuum: bool },
    Thermal { a: f64 },
}

/// Guard levels kept above the highest occupied Fock level by default.
const FOCK_HEADROOM: usize = 10;

impl StateRecipe {
    pub fn family(&self) -> Family {
        match self {
            StateRecipe::Fock { .. } => Family::Fock,
            StateRecipe::Coherent { .. } => Family::Coherent,
            StateRecipe::Cat { .. } => Family::Cat,
            StateRecipe::CatMixture { .. } => Family::CatMixture,
            StateRecipe::FockMixture { .. } => Family::FockMixture,
            StateRecipe::Thermal { .. } => Family::Thermal,
        }
    }

    pub fn default_truncation(&self) -> Result<usize> {
        Ok(match *self {
            StateRecipe::Fock { n } => n + FOCK_HEADROOM,
            StateRecipe::Coherent { alpha }
            | StateRecipe::Cat { alpha, .. }
            | StateRecipe::CatMixture { alpha } => default_coherent_truncation(alpha),
            StateRecipe::FockMixture { d, include_vacuum } => {
                d + usize::from(!include_vacuum) + FOCK_HEADROOM - 1
            }
            StateRecipe::Thermal { a } => default_thermal_truncation(GaussianSpec::new(a)?),
        })
    }

    pub fn build(&self, truncation: Option<usize>) -> Result<StateData> {
        let n = match truncation {
            Some(n) => n,
            None => self.default_truncation()?,
        };
        let spec = ModeSpec::single(n)?;
        Ok(match *self {
            StateRecipe::Fock { n } => StateData::Pure(fock_state(spec, n)?),
            StateRecipe::Coherent { alpha } => StateData::Pure(coherent_state(spec, alpha)?),
            StateRecipe::Cat { alpha, phase } => StateData::Pure(cat_state(spec, alpha, phase)?),
            StateRecipe::CatMixture { alpha } => StateData::Mixed(cat_mixture(spec, alpha)?),
            StateRecipe::FockMixture { d, include_vacuum } => {
                StateData::Mixed(fock_mixture(spec, d, include_vacuum)?)
            }
            StateRecipe::Thermal { a } => StateData::Mixed(thermal_state(spec, GaussianSpec::new(a)?)?),
        })
    }

    /// Builds a recipe from `key=value` parameters.
    ///
    /// Keys: `n` (fock), `alpha` (coherent, cat, cat-mixture; complex values
    /// such as `1+0.5i` accepted), `phase` or `parity=even|odd` (cat, default
    /// even), `d` and `include_vacuum` (fock-mixture, default true), `a`
    /// (thermal). The product family is assembled from state files and has no
    /// recipe.
    pub fn from_params(family: Family, params: &[(String, String)]) -> Result<StateRecipe> {
        let allowed: &[&str] = match family {
            Family::Fock => &["n"],
            Family::Coherent | Family::CatMixture => &["alpha"],
            Family::Cat => &["alpha", "phase", "parity"],
            Family::FockMixture => &["d", "include_vacuum"],
            Family::Thermal => &["a"],
            Family::Product => {
                return Err(Error::InvalidParameter(
                    "the product family is built from two state files".into(),
                ))
            }
        };
        for (k, _) in params {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::InvalidParameter(format!(
                    "family {family} takes {}; got '{k}'",
                    allowed.join(", ")
                )));
            }
        }
        let get = |key: &str| params.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let need = |key: &str| {
            get(key).ok_or_else(|| Error::InvalidParameter(format!("family {family} needs {key}=...")))
        };
        let bad = |key: &str, v: &str| Error::InvalidParameter(format!("cannot parse {key}={v}"));
        let count = |key: &str| -> Result<usize> {
            let v = need(key)?;
            v.parse().map_err(|_| bad(key, v))
        };
        let real = |key: &str| -> Result<f64> {
            let v = need(key)?;
            v.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| bad(key, v))
        };
        let complex = |key: &str| -> Result<Complex64> {
            let v = need(key)?;
            v.parse::<Complex64>()
                .ok()
                .filter(|z| z.is_finite())
                .ok_or_else(|| bad(key, v))
        };
        Ok(match family {
            Family::Fock => StateRecipe::Fock { n: count("n")? },
            Family::Coherent => StateRecipe::Coherent { alpha: complex("alpha")? },
            Family::CatMixture => StateRecipe::CatMixture { alpha: complex("alpha")? },
            Family::Cat => {
                let phase = match (get("phase"), get("parity")) {
                    (Some(_), Some(_)) => {
                        return Err(Error::InvalidParameter("give either phase or parity, not both".into()))
                    }
                    (Some(_), None) => real("phase")?,
                    (None, Some("even")) | (None, None) => 0.0,
                    (None, Some("odd")) => std::f64::consts::PI,
                    (None, Some(v)) => return Err(bad("parity", v)),
                };
                StateRecipe::Cat { alpha: complex("alpha")?, phase }
            }
            Family::FockMixture => {
                let include_vacuum = match get("include_vacuum") {
                    None => true,
                    Some(v) => v.parse().map_err(|_| bad("include_vacuum", v))?,
                };
                StateRecipe::FockMixture { d: count("d")?, include_vacuum }
            }
            Family::Thermal => StateRecipe::Thermal { a: real("a")? },
            Family::Product => unreachable!("rejected above"),
        })
    }

    /// Provenance record stored alongside the state.
    pub fn metadata(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("family".into(), Value::from(self.family().name()));
        let mut put = |k: &str, v: Value| {
            m.insert(k.into(), v);
        };
        match *self {
            StateRecipe::Fock { n } => put("n", n.into()),
            StateRecipe::Coherent { alpha } | StateRecipe::CatMixture { alpha } => {
                put("alpha", Value::from(vec![alpha.re, alpha.im]))
            }
            StateRecipe::Cat { alpha, phase } => {
                put("alpha", Value::from(vec![alpha.re, alpha.im]));
                put("phase", phase.into());
            }
            StateRecipe::FockMixture { d, include_vacuum } => {
                put("d", d.into());
                put("include_vacuum", include_vacuum.into());
            }
            StateRecipe::Thermal { a } => put("a", a.into()),
        }
        m
    }

    /// Same family with its sweep parameter replaced.
    pub fn with_parameter(&self, param: SweepParameter, value: f64) -> Result<StateRecipe> {
        let as_count = |v: f64| -> Result<usize> {
            if v < 0.0 || v.fract() != 0.0 || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "parameter {param} needs non-negative integers, got {v}"
                )));
            }
            Ok(v as usize)
        };
        Ok(match (*self, param) {
            (StateRecipe::Fock { .. }, SweepParameter::N) => StateRecipe::Fock { n: as_count(value)? },
            (StateRecipe::Coherent { .. }, SweepParameter::Alpha) => StateRecipe::Coherent {
                alpha: Complex64::new(value, 0.0),
            },
            (StateRecipe::Cat { phase, .. }, SweepParameter::Alpha) => StateRecipe::Cat {
                alpha: Complex64::new(value, 0.0),
                phase,
            },
            (StateRecipe::CatMixture { .. }, SweepParameter::Alpha) => StateRecipe::CatMixture {
                alpha: Complex64::new(value, 0.0),
            },
            (StateRecipe::FockMixture { include_vacuum, .. }, SweepParameter::D) => StateRecipe::FockMixture {
                d: as_count(value)?,
                include_vacuum,
            },
            (StateRecipe::Thermal { .. }, SweepParameter::A) => StateRecipe::Thermal { a: value },
            (recipe, param) => {
                return Err(Error::InvalidParameter(format!(
                    "parameter {param} does not apply to family {}",
                    recipe.family()
                )))
            }
        })
    }
}

/// Parameter swept by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    Alpha,
    A,
    D,
    N,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::Alpha => "alpha",
            SweepParameter::A => "a",
            SweepParameter::D => "d",
            SweepParameter::N => "n",
        }
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, SweepParameter::D | SweepParameter::N)
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(SweepParameter::Alpha),
            "a" => Ok(SweepParameter::A),
            "d" => Ok(SweepParameter::D),
            "n" => Ok(SweepParameter::N),
            _ => Err(Error::InvalidParameter(format!(
                "unknown sweep parameter '{s}', expected alpha, a, d or n"
            ))),
        }
    }
}
