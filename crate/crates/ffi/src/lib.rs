// Copyright 2026 MacroQ Contributors
// SPDX-License-Identifier: Apache-2.0

//! C ABI for macroq.
//!
//! States live behind the opaque `MqState` handle: constructors return a
//! status code and write a handle through an out-pointer; `mq_state_free`
//! releases it. Every function returns `MqStatus`; on failure a description
//! is available from `mq_last_error_message` on the same thread until the
//! next failing call. Strings returned to the caller are freed with
//! `mq_string_free`. No function unwinds across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use macroq::family::StateRecipe;
use macroq::io::{state_from_json, state_to_json, StateData};
use macroq::measures::{measure_report_tol, pure_state_measures_tol};
use macroq::states::product_state;
use macroq::wigner::{check_comparison, compare_pipelines, GridSpec, DEFAULT_POINTS};
use macroq::{Complex64, Error, MeasureReport, OperatorCache, Tolerances};
use serde_json::{json, Map, Value};

/// Status code returned by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MqStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Malformed or out-of-range argument (including invalid UTF-8 / JSON).
    InvalidArgument = 2,
    /// State data violates a density-matrix invariant.
    InvalidState = 3,
    /// Fock truncation too small for the requested state.
    Truncation = 4,
    /// Dimension exceeds the configured budget.
    ResourceLimit = 5,
    /// Two independent evaluations disagreed beyond tolerance.
    Consistency = 6,
    /// Wigner grid too coarse for the gradient integral.
    Resolution = 7,
    /// Operation not available for this state (e.g. multimode Wigner grid).
    Unsupported = 8,
    /// Internal panic caught at the boundary.
    Panic = 9,
}

/// Opaque state handle.
pub struct MqState {
    data: StateData,
    metadata: Map<String, Value>,
}

/// Complex number passed by value.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MqComplex {
    pub re: f64,
    pub im: f64,
}

/// Measures of one state.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MqMeasures {
    pub i: f64,
    pub c: f64,
    pub p: f64,
    pub chi2: f64,
    /// `|I − (C − M·P)/2|`.
    pub identity_residual: f64,
    pub num_modes: u32,
    pub truncation: u32,
}

/// Which evaluation `mq_report_json` performs.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MqMethod {
    Operator = 0,
    Wigner = 1,
    Both = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(MqStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Truncation { .. } => MqStatus::Truncation,
            Error::ResourceLimit { .. } => MqStatus::ResourceLimit,
            Error::Consistency { .. } | Error::ImaginaryResidue { .. } | Error::NonFinite { .. } => {
                MqStatus::Consistency
            }
            Error::Resolution(_) => MqStatus::Resolution,
            Error::Unsupported(_) => MqStatus::Unsupported,
            Error::InvalidState { .. } => MqStatus::InvalidState,
            _ => MqStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Error::from(e).into()
    }
}

fn null(what: &str) -> Failure {
    Failure(MqStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> MqStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MqStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            MqStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or valid for writes.
unsafe fn write_out<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and valid per the caller contract.
    unsafe { p.write(value) };
    Ok(())
}

/// # Safety
/// `p` must be null or point to a live handle.
unsafe fn state_ref<'a>(p: *const MqState, what: &str) -> Result<&'a MqState, Failure> {
    // SAFETY: null or a live handle per the caller contract.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

fn truncation_arg(t: u32) -> Option<usize> {
    (t != 0).then_some(t as usize)
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn construct(out: *mut *mut MqState, recipe: StateRecipe, truncation: u32) -> MqStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let data = recipe.build(truncation_arg(truncation))?;
        let handle = Box::into_raw(Box::new(MqState { data, metadata: recipe.metadata() }));
        // SAFETY: checked non-null above.
        unsafe { out.write(handle) };
        Ok(())
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Fock state |n⟩. `truncation` 0 selects the default.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mq_state_fock(n: u32, truncation: u32, out: *mut *mut MqState) -> MqStatus {
    unsafe { construct(out, StateRecipe::Fock { n: n as usize }, truncation) }
}

/// Coherent state |α⟩.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mq_state_coherent(alpha: MqComplex, truncation: u32, out: *mut *mut MqState) -> MqStatus {
    let alpha = Complex64::new(alpha.re, alpha.im);
    unsafe { construct(out, StateRecipe::Coherent { alpha }, truncation) }
}

/// Cat state ∝ |α⟩ + e^{iφ}|−α⟩.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mq_state_cat(
    alpha: MqComplex,
    phase: f64,
    truncation: u32,
    out: *mut *mut MqState,
) -> MqStatus {
    let alpha = Complex64::new(alpha.re, alpha.im);
    unsafe { construct(out, StateRecipe::Cat { alpha, phase }, truncation) }
}

/// (|α⟩⟨α| + |−α⟩⟨−α|)/2.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mq_state_cat_mixture(alpha: MqComplex, truncation: u32, out: *mut *mut MqState) -> MqStatus {
    let alpha = Complex64::new(alpha.re, alpha.im);
    unsafe { construct(out, StateRecipe::CatMixture { alpha }, truncation) }
}

/// Uniform mixture of `d` Fock projectors starting at 0 (`include_vacuum`)
/// or at 1.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mq_state_fock_mixture(
    d: u32,
    include_vacuum: bool,
    truncation: u32,
    out: *mut *mut MqState,
) -> MqStatus {
    unsafe { construct(out, StateRecipe::FockMixture { d: d as usize, include_vacuum }, truncation) }
}

/// Thermal state with Gaussian Wigner width `a ≥ 1`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mq_state_thermal(a: f64, truncation: u32, out: *mut *mut MqState) -> MqStatus {
    unsafe { construct(out, StateRecipe::Thermal { a }, truncation) }
}

/// `left ⊗ right`; both handles remain owned by the caller.
///
/// # Safety
/// `left` and `right` must be live handles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mq_state_product(
    left: *const MqState,
    right: *const MqState,
    out: *mut *mut MqState,
) -> MqStatus {
    guard(|| {
        let (a, b) = unsafe { (state_ref(left, "left")?, state_ref(right, "right")?) };
        let data = match (&a.data, &b.data) {
            (StateData::Pure(x), StateData::Pure(y)) => StateData::Pure(x.tensor(y)?),
            _ => StateData::Mixed(product_state(&a.data.density(), &b.data.density())?),
        };
        let mut metadata = Map::new();
        metadata.insert("family".into(), Value::from("product"));
        metadata.insert("left".into(), Value::Object(a.metadata.clone()));
        metadata.insert("right".into(), Value::Object(b.metadata.clone()));
        let handle = Box::into_raw(Box::new(MqState { data, metadata }));
        unsafe { write_out(out, handle, "out") }.inspect_err(|_| {
            // SAFETY: just allocated and not yet shared.
            drop(unsafe { Box::from_raw(handle) });
        })
    })
}

/// Parses and validates a JSON state document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mq_state_from_json(json: *const c_char, out: *mut *mut MqState) -> MqStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: non-null, NUL-terminated per the caller contract.
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|e| Failure(MqStatus::InvalidArgument, format!("json is not UTF-8: {e}")))?;
        let (data, metadata) = state_from_json(text)?;
        let handle = Box::into_raw(Box::new(MqState { data, metadata }));
        unsafe { out.write(handle) };
        Ok(())
    })
}

fn export_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure(MqStatus::InvalidArgument, e.to_string()))?;
    let raw = c.into_raw();
    // SAFETY: `out` validity is the caller's contract; on null we reclaim.
    unsafe { write_out(out, raw, "out") }.inspect_err(|_| drop(unsafe { CString::from_raw(raw) }))
}

/// Serializes a state to the JSON state-file format. Free the result with
/// `mq_string_free`.
///
/// # Safety
/// `state` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mq_state_to_json(state: *const MqState, out: *mut *mut c_char) -> MqStatus {
    guard(|| {
        let s = unsafe { state_ref(state, "state")? };
        export_string(state_to_json(&s.data, &s.metadata)?, out)
    })
}

/// Number of modes and per-mode truncation of a state.
///
/// # Safety
/// `state` must be a live handle; outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mq_state_shape(state: *const MqState, num_modes: *mut u32, truncation: *mut u32) -> MqStatus {
    guard(|| {
        let spec = unsafe { state_ref(state, "state")? }.data.spec();
        unsafe {
            write_out(num_modes, spec.num_modes as u32, "num_modes")?;
            write_out(truncation, spec.truncation as u32, "truncation")
        }
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `state` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mq_state_free(state: *mut MqState) {
    if !state.is_null() {
        // SAFETY: handle created by Box::into_raw and freed once.
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mq_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by CString::into_raw and freed once.
        drop(unsafe { CString::from_raw(s) });
    }
}

fn to_measures(r: &MeasureReport) -> MqMeasures {
    MqMeasures {
        i: r.i,
        c: r.c,
        p: r.p,
        chi2: r.chi2,
        identity_residual: r.identity_residual,
        num_modes: r.num_modes as u32,
        truncation: r.truncation as u32,
    }
}

fn operator_report(s: &MqState) -> Result<MeasureReport, Failure> {
    let tol = Tolerances::default();
    let cache = OperatorCache::new();
    Ok(match &s.data {
        StateData::Pure(psi) => pure_state_measures_tol(psi, &cache, &tol)?,
        StateData::Mixed(rho) => measure_report_tol(rho, &cache, &tol)?,
    })
}

fn grid_for(s: &MqState, grid_points: u32) -> Result<GridSpec, Failure> {
    let points = if grid_points == 0 { DEFAULT_POINTS } else { grid_points as usize };
    Ok(GridSpec::for_truncation(s.data.spec().truncation, points)?)
}

/// Operator-path measures.
///
/// # Safety
/// `state` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mq_measure(state: *const MqState, out: *mut MqMeasures) -> MqStatus {
    guard(|| {
        let s = unsafe { state_ref(state, "state")? };
        let m = to_measures(&operator_report(s)?);
        unsafe { write_out(out, m, "out") }
    })
}

/// Wigner-grid measures of a single-mode state on a square grid with
/// `grid_points` per axis (0 selects 256). Fails with `Consistency` when the
/// grid values disagree with the operator path beyond tolerance.
///
/// # Safety
/// `state` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mq_measure_wigner(state: *const MqState, grid_points: u32, out: *mut MqMeasures) -> MqStatus {
    guard(|| {
        let s = unsafe { state_ref(state, "state")? };
        let tol = Tolerances::default();
        let cmp = compare_pipelines(&s.data.density(), &grid_for(s, grid_points)?, &tol)?;
        check_comparison(&cmp, &tol)?;
        unsafe { write_out(out, to_measures(&cmp.wigner), "out") }
    })
}

/// Full JSON report (same layout as the command-line `measure`). Free the
/// result with `mq_string_free`.
///
/// # Safety
/// `state` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mq_report_json(
    state: *const MqState,
    method: MqMethod,
    grid_points: u32,
    out: *mut *mut c_char,
) -> MqStatus {
    guard(|| {
        let s = unsafe { state_ref(state, "state")? };
        let value = match method {
            MqMethod::Operator => serde_json::to_value(operator_report(s)?)?,
            MqMethod::Wigner | MqMethod::Both => {
                let tol = Tolerances::default();
                let cmp = compare_pipelines(&s.data.density(), &grid_for(s, grid_points)?, &tol)?;
                check_comparison(&cmp, &tol)?;
                if method == MqMethod::Wigner {
                    serde_json::to_value(&cmp.wigner)?
                } else {
                    json!({
                        "operator": cmp.operator,
                        "wigner": cmp.wigner,
                        "grid": cmp.grid,
                        "normalization": cmp.normalization,
                        "deltas": {
                            "C": cmp.rel_delta_c,
                            "P": cmp.rel_delta_p,
                            "chi2": cmp.rel_delta_chi2,
                            "I": cmp.delta_i,
                        },
                    })
                }
            }
        };
        export_string(serde_json::to_string_pretty(&value)?, out)
    })
}
