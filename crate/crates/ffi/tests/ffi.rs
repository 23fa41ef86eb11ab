// Copyright 2026 MacroQ Contributors
// SPDX-License-Identifier: Apache-2.0

//! Exercises the C ABI from Rust and from a C program built against the
//! generated header.

use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use macroq_ffi::*;

fn last_error() -> String {
    let p = mq_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn re(x: f64) -> MqComplex {
    MqComplex { re: x, im: 0.0 }
}

fn measure(state: *const MqState) -> MqMeasures {
    let mut m = MqMeasures { i: 0.0, c: 0.0, p: 0.0, chi2: 0.0, identity_residual: 0.0, num_modes: 0, truncation: 0 };
    assert_eq!(unsafe { mq_measure(state, &mut m) }, MqStatus::Ok, "{}", last_error());
    m
}

#[test]
fn thermal_row_through_abi() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mq_state_thermal(2f64.sqrt(), 0, &mut s) }, MqStatus::Ok);
    let m = measure(s);
    assert!((m.i + 0.125).abs() < 1e-12);
    assert!((m.c - 0.25).abs() < 1e-12);
    assert!((m.p - 0.5).abs() < 1e-12);
    assert!((m.chi2 - 1.0).abs() < 1e-12);
    assert_eq!(m.num_modes, 1);

    let mut w = m;
    assert_eq!(unsafe { mq_measure_wigner(s, 0, &mut w) }, MqStatus::Ok, "{}", last_error());
    assert!((w.chi2 - 1.0).abs() < 1e-3);
    unsafe { mq_state_free(s) };
}

#[test]
fn every_constructor_and_product() {
    let mut handles = Vec::new();
    let mut push = |status: MqStatus, h: *mut MqState| {
        assert_eq!(status, MqStatus::Ok, "{}", last_error());
        handles.push(h);
    };
    let mut h = ptr::null_mut();
    push(unsafe { mq_state_fock(2, 0, &mut h) }, h);
    push(unsafe { mq_state_coherent(MqComplex { re: 1.0, im: 0.5 }, 0, &mut h) }, h);
    push(unsafe { mq_state_cat(re(1.5), std::f64::consts::PI, 0, &mut h) }, h);
    push(unsafe { mq_state_cat_mixture(re(1.0), 0, &mut h) }, h);
    push(unsafe { mq_state_fock_mixture(3, true, 0, &mut h) }, h);
    let ms: Vec<MqMeasures> = handles.iter().map(|&h| measure(h)).collect();
    assert!((ms[0].i - 2.0).abs() < 1e-10);
    assert!(ms[4].i.abs() < 1e-12);
    assert!((ms[4].chi2 - 2.0).abs() < 1e-10);

    // product of fock |2⟩ (N=12) and the fock mixture (N=12)
    let mut prod = ptr::null_mut();
    assert_eq!(unsafe { mq_state_product(handles[0], handles[4], &mut prod) }, MqStatus::Ok, "{}", last_error());
    let (mut modes, mut n) = (0u32, 0u32);
    assert_eq!(unsafe { mq_state_shape(prod, &mut modes, &mut n) }, MqStatus::Ok);
    assert_eq!((modes, n), (2, 12));
    let pm = measure(prod);
    let expected = ms[4].p * ms[0].i + ms[0].p * ms[4].i;
    assert!((pm.i - expected).abs() < 1e-9);
    // multimode states have no Wigner grid
    let mut w = pm;
    assert_eq!(unsafe { mq_measure_wigner(prod, 0, &mut w) }, MqStatus::Unsupported);
    unsafe { mq_state_free(prod) };
    for h in handles {
        unsafe { mq_state_free(h) };
    }
}

#[test]
fn json_round_trip_and_report() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mq_state_cat(re(1.0), 0.0, 0, &mut s) }, MqStatus::Ok);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { mq_state_to_json(s, &mut text) }, MqStatus::Ok);
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { mq_state_from_json(text, &mut back) }, MqStatus::Ok, "{}", last_error());
    assert_eq!(measure(s), measure(back));

    let mut report = ptr::null_mut();
    assert_eq!(unsafe { mq_report_json(back, MqMethod::Both, 0, &mut report) }, MqStatus::Ok, "{}", last_error());
    let json: serde_json::Value =
        serde_json::from_str(unsafe { CStr::from_ptr(report) }.to_str().unwrap()).unwrap();
    assert!(json["deltas"]["C"].as_f64().unwrap() < 1e-3);
    assert_eq!(json["operator"]["pipeline"], "operator");
    unsafe {
        mq_string_free(report);
        mq_string_free(text);
        mq_state_free(back);
        mq_state_free(s);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mq_state_fock(20, 10, &mut s) }, MqStatus::Truncation);
    assert!(s.is_null());
    assert!(last_error().contains("truncation >= 22"));

    assert_eq!(unsafe { mq_state_thermal(0.5, 0, &mut s) }, MqStatus::InvalidArgument);
    assert_eq!(unsafe { mq_state_fock(1, 0, ptr::null_mut()) }, MqStatus::NullPointer);
    assert_eq!(unsafe { mq_measure(ptr::null(), ptr::null_mut()) }, MqStatus::NullPointer);

    let bad = CString::new("{\"format_version\": 1}").unwrap();
    assert_eq!(unsafe { mq_state_from_json(bad.as_ptr(), &mut s) }, MqStatus::InvalidArgument);

    let mut good = ptr::null_mut();
    assert_eq!(unsafe { mq_state_fock_mixture(2, true, 0, &mut good) }, MqStatus::Ok);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { mq_state_to_json(good, &mut text) }, MqStatus::Ok);
    let corrupted = unsafe { CStr::from_ptr(text) }.to_str().unwrap().replacen("0.5", "0.45", 1);
    let corrupted = CString::new(corrupted).unwrap();
    assert_eq!(unsafe { mq_state_from_json(corrupted.as_ptr(), &mut s) }, MqStatus::InvalidState);
    assert!(last_error().contains("trace"));
    unsafe {
        mq_string_free(text);
        mq_state_free(good);
        mq_state_free(ptr::null_mut());
        mq_string_free(ptr::null_mut());
    }
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(mq_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn header_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(header_dir().join("macroq.h")).unwrap();
    for name in [
        "mq_version",
        "mq_last_error_message",
        "mq_state_fock",
        "mq_state_coherent",
        "mq_state_cat",
        "mq_state_cat_mixture",
        "mq_state_fock_mixture",
        "mq_state_thermal",
        "mq_state_product",
        "mq_state_from_json",
        "mq_state_to_json",
        "mq_state_shape",
        "mq_state_free",
        "mq_string_free",
        "mq_measure",
        "mq_measure_wigner",
        "mq_report_json",
        "typedef struct MqState MqState",
        "MQ_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

/// Compiles `tests/c/smoke.c` against the header and the static library and
/// runs it. Skipped when no C compiler is on PATH.
#[test]
fn c_program_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler ({cc})");
        return;
    }
    // tests run from target/<profile>/deps; the static library sits one up
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libmacroq_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let out = std::env::temp_dir().join(format!("macroq_smoke_{}", std::process::id()));
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/c/smoke.c");
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("I=-0.125"));
}
