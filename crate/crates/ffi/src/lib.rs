//! C ABI over the `podles` library.
//!
//! Triples are opaque heap handles created by [`podles_triple_new`] and
//! released with [`podles_triple_free`]. Every fallible call returns a
//! [`PodlesStatus`]; the message for the most recent failure on the calling
//! thread is available from [`podles_last_error`]. Strings handed out by the
//! library must be released with [`podles_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use podles::axioms::{CheckReport, Verifier};
use podles::hilbert::Truncation;
use podles::operators::{DiracParams, TripleConfig};
use podles::qnum::QContext;

/// Result code of every fallible call. The first four match the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PodlesStatus {
    Ok = 0,
    CheckFailed = 1,
    InvalidConfig = 2,
    Overflow = 3,
    NullPointer = 4,
    BufferTooSmall = 5,
    InvalidArgument = 6,
    Panic = 7,
}

/// Parameters of one truncated triple.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PodlesConfig {
    /// Deformation parameter, `0 < q <= 1`.
    pub q: f64,
    /// Number of spin shells `l = 1/2 .. shells - 1/2`.
    pub shells: u32,
    /// Shells excluded from the top of the truncation when checking.
    pub margin: u32,
    /// Reality parameter; `p = q` is the equivariant choice.
    pub p: f64,
    pub z_re: f64,
    pub z_im: f64,
    /// Residual tolerance for identity checks.
    pub tolerance: f64,
}

/// Opaque handle.
pub struct PodlesTriple {
    verifier: Verifier,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn fail(status: PodlesStatus, msg: impl Into<String>) -> PodlesStatus {
    set_error(msg);
    status
}

fn from_error(e: podles::Error) -> PodlesStatus {
    let status = if e.is_overflow() { PodlesStatus::Overflow } else { PodlesStatus::InvalidConfig };
    fail(status, e.to_string())
}

fn guarded(f: impl FnOnce() -> PodlesStatus) -> PodlesStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(PodlesStatus::Panic, "internal panic"),
    }
}

fn into_c_string(s: String, out: *mut *mut c_char) -> PodlesStatus {
    match CString::new(s) {
        Ok(c) => {
            // SAFETY: caller checked `out` is non-null.
            unsafe { *out = c.into_raw() };
            PodlesStatus::Ok
        }
        Err(_) => fail(PodlesStatus::Panic, "interior NUL in output"),
    }
}

/// Defaults: `q = 0.5`, 12 shells, margin 2, `p = q`, `z = 1`, tolerance `1e-9`.
#[no_mangle]
pub extern "C" fn podles_config_default() -> PodlesConfig {
    PodlesConfig { q: 0.5, shells: 12, margin: 2, p: 0.5, z_re: 1.0, z_im: 0.0, tolerance: 1e-9 }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn podles_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread; valid until the next failing call.
#[no_mangle]
pub extern "C" fn podles_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Writes the q-number `[x]` to `out`.
///
/// # Safety
/// `out` must be null or valid for a write of one `double`.
#[no_mangle]
pub unsafe extern "C" fn podles_q_number(q: f64, x: f64, out: *mut f64) -> PodlesStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PodlesStatus::NullPointer, "out is null");
        }
        let ctx = match QContext::new(q) {
            Ok(c) => c,
            Err(e) => return from_error(e.into()),
        };
        match ctx.q_number(x) {
            Ok(v) => {
                *out = v;
                PodlesStatus::Ok
            }
            Err(e) => from_error(e.into()),
        }
    })
}

fn build(cfg: &PodlesConfig) -> Result<Verifier, PodlesStatus> {
    if !(cfg.tolerance.is_finite() && cfg.tolerance > 0.0) {
        return Err(fail(PodlesStatus::InvalidConfig, format!("tolerance = {} must be positive", cfg.tolerance)));
    }
    if !(cfg.p.is_finite() && cfg.p > 0.0) {
        return Err(fail(PodlesStatus::InvalidConfig, format!("p = {} must be positive", cfg.p)));
    }
    let ctx = QContext::new(cfg.q).map_err(|e| from_error(e.into()))?;
    ctx.preflight(cfg.shells).map_err(|e| from_error(e.into()))?;
    let trunc = Truncation::new(cfg.shells, cfg.margin).map_err(|e| from_error(e.into()))?;
    let dirac = DiracParams::new(Complex64::new(cfg.z_re, cfg.z_im)).map_err(from_error)?;
    let config = TripleConfig::new(ctx, trunc).with_p(cfg.p).with_z(dirac);
    Verifier::new(config, cfg.tolerance).map_err(from_error)
}

/// Builds a triple and stores its handle in `*out`.
///
/// # Safety
/// `cfg` must be null or point to a valid config; `out` must be null or
/// valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn podles_triple_new(cfg: *const PodlesConfig, out: *mut *mut PodlesTriple) -> PodlesStatus {
    guarded(|| {
        if cfg.is_null() || out.is_null() {
            return fail(PodlesStatus::NullPointer, "cfg or out is null");
        }
        *out = ptr::null_mut();
        match build(&*cfg) {
            Ok(verifier) => {
                *out = Box::into_raw(Box::new(PodlesTriple { verifier }));
                PodlesStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `triple` must be null or a handle from [`podles_triple_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn podles_triple_free(triple: *mut PodlesTriple) {
    if !triple.is_null() {
        drop(Box::from_raw(triple));
    }
}

/// Hilbert space dimension `2 shells (shells + 1)`, or 0 for a null handle.
///
/// # Safety
/// `triple` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn podles_triple_dim(triple: *const PodlesTriple) -> usize {
    triple.as_ref().map_or(0, |t| t.verifier.triple().dim())
}

fn run_checks(t: &PodlesTriple) -> Result<Vec<CheckReport>, PodlesStatus> {
    t.verifier.run_all().map_err(from_error)
}

/// Runs the full check suite; returns `CHECK_FAILED` when any check fails.
///
/// # Safety
/// `triple` must be a live handle; `passed` and `failed` must each be null
/// or valid for a `size_t` write.
#[no_mangle]
pub unsafe extern "C" fn podles_triple_verify(
    triple: *const PodlesTriple,
    passed: *mut usize,
    failed: *mut usize,
) -> PodlesStatus {
    guarded(|| {
        let Some(t) = triple.as_ref() else {
            return fail(PodlesStatus::NullPointer, "triple is null");
        };
        let reports = match run_checks(t) {
            Ok(r) => r,
            Err(s) => return s,
        };
        let ok = reports.iter().filter(|r| r.passed).count();
        if !passed.is_null() {
            *passed = ok;
        }
        if !failed.is_null() {
            *failed = reports.len() - ok;
        }
        if ok == reports.len() {
            PodlesStatus::Ok
        } else {
            let names: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.check.as_str()).collect();
            fail(PodlesStatus::CheckFailed, format!("failed checks: {}", names.join(", ")))
        }
    })
}

/// Stores the per-check report as a JSON array in `*out`.
///
/// # Safety
/// `triple` must be a live handle; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn podles_triple_report_json(triple: *const PodlesTriple, out: *mut *mut c_char) -> PodlesStatus {
    guarded(|| {
        let Some(t) = triple.as_ref() else {
            return fail(PodlesStatus::NullPointer, "triple is null");
        };
        if out.is_null() {
            return fail(PodlesStatus::NullPointer, "out is null");
        }
        match run_checks(t) {
            Ok(r) => into_c_string(serde_json::to_string(&r).expect("reports serialize"), out),
            Err(s) => s,
        }
    })
}

/// Writes the ascending eigenvalues of `D` into `buf`.
///
/// `*out_len` always receives the dimension; when `len` is smaller the call
/// returns `BUFFER_TOO_SMALL` and writes nothing.
///
/// # Safety
/// `triple` must be a live handle, `buf` valid for `len` writes, `out_len`
/// valid for one write.
#[no_mangle]
pub unsafe extern "C" fn podles_triple_spectrum(
    triple: *const PodlesTriple,
    buf: *mut f64,
    len: usize,
    out_len: *mut usize,
) -> PodlesStatus {
    guarded(|| {
        let Some(t) = triple.as_ref() else {
            return fail(PodlesStatus::NullPointer, "triple is null");
        };
        if out_len.is_null() {
            return fail(PodlesStatus::NullPointer, "out_len is null");
        }
        let dim = t.verifier.triple().dim();
        *out_len = dim;
        if len < dim {
            return fail(PodlesStatus::BufferTooSmall, format!("need {dim} entries, got {len}"));
        }
        if buf.is_null() {
            return fail(PodlesStatus::NullPointer, "buf is null");
        }
        match t.verifier.triple().d.eigenvalues() {
            Ok(ev) => {
                std::slice::from_raw_parts_mut(buf, dim).copy_from_slice(&ev);
                PodlesStatus::Ok
            }
            Err(e) => from_error(e.into()),
        }
    })
}

/// Stores operator `name` as `row col re im` lines in `*out`. Names are
/// `A`, `B`, `Bstar`, `e`, `f`, `k`, `kinv`, `gamma`, `J`, `D`; `J` is
/// exported as the matrix `M` of `psi -> M conj(psi)`.
///
/// # Safety
/// `triple` must be a live handle, `name` a NUL-terminated string, `out`
/// valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn podles_triple_export(
    triple: *const PodlesTriple,
    name: *const c_char,
    out: *mut *mut c_char,
) -> PodlesStatus {
    guarded(|| {
        let Some(t) = triple.as_ref() else {
            return fail(PodlesStatus::NullPointer, "triple is null");
        };
        if name.is_null() || out.is_null() {
            return fail(PodlesStatus::NullPointer, "name or out is null");
        }
        let Ok(name) = CStr::from_ptr(name).to_str() else {
            return fail(PodlesStatus::InvalidArgument, "operator name is not UTF-8");
        };
        let Some(op) = t.verifier.triple().named(name) else {
            return fail(PodlesStatus::InvalidArgument, format!("unknown operator {name:?}"));
        };
        let mut buf = Vec::new();
        op.write_triplets(&mut buf).expect("writing to memory");
        into_c_string(String::from_utf8(buf).expect("ascii"), out)
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn podles_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
