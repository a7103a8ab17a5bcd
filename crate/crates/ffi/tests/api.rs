use std::ffi::{CStr, CString};
use std::ptr;

use podles_ffi::*;

fn new_triple(cfg: &PodlesConfig) -> *mut PodlesTriple {
    let mut t = ptr::null_mut();
    let s = unsafe { podles_triple_new(cfg, &mut t) };
    assert_eq!(s, PodlesStatus::Ok, "{}", last_error());
    t
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(podles_last_error()) }.to_string_lossy().into_owned()
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { podles_string_free(s) };
    out
}

#[test]
fn q_number_and_version() {
    let mut v = 0.0;
    assert_eq!(unsafe { podles_q_number(0.5, 2.0, &mut v) }, PodlesStatus::Ok);
    assert!((v - 2.5).abs() < 1e-15);
    assert_eq!(unsafe { podles_q_number(1.5, 2.0, &mut v) }, PodlesStatus::InvalidConfig);
    assert!(last_error().contains("1.5"));
    assert_eq!(unsafe { podles_q_number(0.01, 500.0, &mut v) }, PodlesStatus::Overflow);
    assert_eq!(unsafe { podles_q_number(0.5, 1.0, ptr::null_mut()) }, PodlesStatus::NullPointer);
    let version = unsafe { CStr::from_ptr(podles_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn verify_default_configuration() {
    let mut cfg = podles_config_default();
    cfg.shells = 6;
    let t = new_triple(&cfg);
    assert_eq!(unsafe { podles_triple_dim(t) }, 84);
    let (mut passed, mut failed) = (0usize, 0usize);
    assert_eq!(unsafe { podles_triple_verify(t, &mut passed, &mut failed) }, PodlesStatus::Ok);
    assert!(passed > 50);
    assert_eq!(failed, 0);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { podles_triple_report_json(t, &mut json) }, PodlesStatus::Ok);
    let reports: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), passed);
    unsafe { podles_triple_free(t) };
}

#[test]
fn non_equivariant_reality_operator_fails() {
    let mut cfg = podles_config_default();
    cfg.shells = 5;
    cfg.p = 1.0;
    let t = new_triple(&cfg);
    let mut failed = 0usize;
    assert_eq!(unsafe { podles_triple_verify(t, ptr::null_mut(), &mut failed) }, PodlesStatus::CheckFailed);
    assert!(failed > 0);
    assert!(last_error().contains("reality.j_equivariance"));
    unsafe { podles_triple_free(t) };
}

#[test]
fn spectrum_buffer_protocol() {
    let mut cfg = podles_config_default();
    cfg.q = 1.0;
    cfg.p = 1.0;
    cfg.shells = 3;
    cfg.margin = 0;
    let t = new_triple(&cfg);
    let mut len = 0usize;
    assert_eq!(unsafe { podles_triple_spectrum(t, ptr::null_mut(), 0, &mut len) }, PodlesStatus::BufferTooSmall);
    assert_eq!(len, 24);
    let mut buf = vec![0.0; len];
    assert_eq!(unsafe { podles_triple_spectrum(t, buf.as_mut_ptr(), buf.len(), &mut len) }, PodlesStatus::Ok);
    assert_eq!(buf[0], -3.0);
    assert_eq!(buf[23], 3.0);
    assert_eq!(buf.iter().filter(|&&v| v == 1.0).count(), 2);
    unsafe { podles_triple_free(t) };
}

#[test]
fn export_operators() {
    let mut cfg = podles_config_default();
    cfg.q = 1.0;
    cfg.shells = 1;
    cfg.margin = 0;
    let t = new_triple(&cfg);
    let name = CString::new("D").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { podles_triple_export(t, name.as_ptr(), &mut out) }, PodlesStatus::Ok);
    assert_eq!(take(out).lines().count(), 4);
    let bad = CString::new("X").unwrap();
    assert_eq!(unsafe { podles_triple_export(t, bad.as_ptr(), &mut out) }, PodlesStatus::InvalidArgument);
    unsafe { podles_triple_free(t) };
}

#[test]
fn configuration_errors() {
    let mut t = ptr::null_mut();
    let mut cfg = podles_config_default();
    cfg.shells = 2;
    assert_eq!(unsafe { podles_triple_new(&cfg, &mut t) }, PodlesStatus::InvalidConfig);
    assert!(t.is_null());
    cfg = podles_config_default();
    cfg.z_re = 0.0;
    assert_eq!(unsafe { podles_triple_new(&cfg, &mut t) }, PodlesStatus::InvalidConfig);
    cfg = podles_config_default();
    cfg.q = 0.01;
    cfg.shells = 200;
    assert_eq!(unsafe { podles_triple_new(&cfg, &mut t) }, PodlesStatus::Overflow);
    assert!(last_error().contains("0.01"));
    assert_eq!(unsafe { podles_triple_new(ptr::null(), &mut t) }, PodlesStatus::NullPointer);
    assert_eq!(unsafe { podles_triple_dim(ptr::null()) }, 0);
    unsafe { podles_triple_free(ptr::null_mut()) };
    unsafe { podles_string_free(ptr::null_mut()) };
}
