//! C ABI over `torus_mirror`.
//!
//! Every function returns a [`TmStatus`]. On failure the message is kept in
//! a thread-local slot readable with [`tm_last_error`]. Objects are opaque
//! handles created by `*_new`/`*_parse`/`*_builtin` and released by the
//! matching `*_free`; strings returned through `char **` are released with
//! [`tm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use torus_mirror::families::{
    verify_hesse, verify_jseries, verify_kummer, verify_p123_veronese, verify_quasihomogeneous, verify_sklyanin,
};
use torus_mirror::report::Report;
use torus_mirror::ring::{find_relations, standard_generators};
use torus_mirror::theta::structure_coefficient;
use torus_mirror::{basis_classes, builtin, invariant_basis, validate, Complex64, Error, FukayaRing, RelationSet, SeriesParams, TorusSpec};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TmStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    Input = 3,
    Validation = 4,
    Convergence = 5,
    Precision = 6,
    Misuse = 7,
    Unsupported = 8,
    Singular = 9,
    Degenerate = 10,
    /// An output buffer is too small; the required length has been written.
    BufferTooSmall = 11,
    /// An internal panic was caught at the boundary.
    Panic = 12,
}

/// Series truncation controls.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct TmParams {
    pub tol: f64,
    pub max_radius: u32,
}

/// A parsed torus specification.
pub struct TmSpec(TorusSpec);

/// A graded ring with cached structure constants.
pub struct TmRing(FukayaRing);

/// Relations found in one degree.
pub struct TmRelationSet(RelationSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TmStatus {
    match e {
        Error::Input(_) => TmStatus::Input,
        Error::Validation(_) => TmStatus::Validation,
        Error::Convergence(_) => TmStatus::Convergence,
        Error::Precision(_) => TmStatus::Precision,
        Error::Misuse(_) => TmStatus::Misuse,
        Error::Unsupported(_) => TmStatus::Unsupported,
        Error::Singular(_) => TmStatus::Singular,
        Error::Degenerate(_) => TmStatus::Degenerate,
    }
}

enum Fail {
    Lib(Error),
    Status(TmStatus, String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            TmStatus::Ok
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            TmStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(TmStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Status(TmStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

fn params_of(p: TmParams) -> Result<SeriesParams, Fail> {
    Ok(SeriesParams::new(p.tol, p.max_radius)?)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn tm_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Default truncation: `tol = 1e-14`, `max_radius = 64`.
#[no_mangle]
pub extern "C" fn tm_params_default() -> TmParams {
    let d = SeriesParams::default();
    TmParams { tol: d.tol, max_radius: d.max_radius }
}

/// Releases a string returned by the library.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library.
#[no_mangle]
pub unsafe extern "C" fn tm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses spec text in the `key = value` grammar.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_spec_parse(text: *const c_char, out: *mut *mut TmSpec) -> TmStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let spec: TorusSpec = str_arg(text, "text")?.parse()?;
        *out = Box::into_raw(Box::new(TmSpec(spec)));
        Ok(())
    })
}

/// Loads a built-in spec by name.
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_spec_builtin(name: *const c_char, out: *mut *mut TmSpec) -> TmStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let spec = builtin::builtin(str_arg(name, "name")?)?;
        *out = Box::into_raw(Box::new(TmSpec(spec)));
        Ok(())
    })
}

/// # Safety
/// `spec` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tm_spec_free(spec: *mut TmSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_spec_dim(spec: *const TmSpec, out: *mut usize) -> TmStatus {
    guard(|| {
        *out_arg(out, "out")? = ref_arg(spec, "spec")?.0.dim();
        Ok(())
    })
}

/// Writes 1 to `passed` if every required torus condition holds, else 0.
/// A newline-separated summary is available through `summary` when it is
/// not null.
///
/// # Safety
/// `spec` must be a live handle; `passed` must be writable; `summary` may be null.
#[no_mangle]
pub unsafe extern "C" fn tm_spec_validate(spec: *const TmSpec, passed: *mut c_int, summary: *mut *mut c_char) -> TmStatus {
    guard(|| {
        let report = validate(&ref_arg(spec, "spec")?.0);
        *out_arg(passed, "passed")? = c_int::from(report.passed());
        if let Some(s) = summary.as_mut() {
            *s = into_c_string(report.to_string());
        }
        Ok(())
    })
}

/// SHA-256 fingerprint of the canonical spec text, as hex.
///
/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_spec_fingerprint(spec: *const TmSpec, out: *mut *mut c_char) -> TmStatus {
    guard(|| {
        let fp = ref_arg(spec, "spec")?.0.fingerprint();
        *out_arg(out, "out")? = into_c_string(fp);
        Ok(())
    })
}

/// Number of level-`k` classes, or of involution orbits when `invariant` is nonzero.
///
/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_basis_count(spec: *const TmSpec, k: u32, invariant: c_int, out: *mut usize) -> TmStatus {
    guard(|| {
        let spec = &ref_arg(spec, "spec")?.0;
        let n = if invariant != 0 { invariant_basis(spec, k)?.len() } else { basis_classes(spec, k)?.len() };
        *out_arg(out, "out")? = n;
        Ok(())
    })
}

/// `A^[kappa]_c` for a class vector `c` of length `len`.
///
/// # Safety
/// `spec` must be a live handle; `c` must point to `len` doubles; `re`, `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_structure_coefficient(
    spec: *const TmSpec,
    kappa: f64,
    c: *const f64,
    len: usize,
    params: TmParams,
    re: *mut f64,
    im: *mut f64,
) -> TmStatus {
    guard(|| {
        let spec = &ref_arg(spec, "spec")?.0;
        if c.is_null() && len > 0 {
            return Err(null("c"));
        }
        let cs = if len == 0 { &[][..] } else { std::slice::from_raw_parts(c, len) };
        let z = structure_coefficient(spec, kappa, cs, &params_of(params)?)?;
        *out_arg(re, "re")? = z.re;
        *out_arg(im, "im")? = z.im;
        Ok(())
    })
}

/// Builds the ring of a validated spec. The spec handle is not consumed.
///
/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_ring_new(spec: *const TmSpec, params: TmParams, out: *mut *mut TmRing) -> TmStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let ring = FukayaRing::new(ref_arg(spec, "spec")?.0.clone(), params_of(params)?)?;
        *out = Box::into_raw(Box::new(TmRing(ring)));
        Ok(())
    })
}

/// # Safety
/// `ring` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tm_ring_free(ring: *mut TmRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Number of classes at level `k`, the length of product outputs at that level.
///
/// # Safety
/// `ring` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_ring_class_count(ring: *const TmRing, k: u32, out: *mut usize) -> TmStatus {
    guard(|| {
        let n = ref_arg(ring, "ring")?.0.classes(k)?.len();
        *out_arg(out, "out")? = n;
        Ok(())
    })
}

/// Product of basis class `i` at level `k1` with basis class `j` at level
/// `k2`. Writes the `n` class coefficients at level `k1 + k2` into `out` as
/// interleaved `(re, im)` pairs; `out_len` is the buffer length in doubles
/// and must be at least `2 n`. `written` receives `2 n` in all cases where
/// the product was computed.
///
/// # Safety
/// `ring` must be a live handle; `out` must point to `out_len` doubles; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_ring_product(
    ring: *const TmRing,
    k1: u32,
    i: usize,
    k2: u32,
    j: usize,
    out: *mut f64,
    out_len: usize,
    written: *mut usize,
) -> TmStatus {
    guard(|| {
        let ring = &ref_arg(ring, "ring")?.0;
        let written = out_arg(written, "written")?;
        let x = ring.basis_element(k1, i)?;
        let y = ring.basis_element(k2, j)?;
        let product = ring.to_classes(&ring.compose(&x, &y)?)?;
        let coeffs: &[Complex64] = product.coeffs();
        *written = 2 * coeffs.len();
        if out_len < *written {
            return Err(Fail::Status(TmStatus::BufferTooSmall, format!("product needs {} doubles, buffer holds {out_len}", *written)));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let buf = std::slice::from_raw_parts_mut(out, out_len);
        for (k, z) in coeffs.iter().enumerate() {
            buf[2 * k] = z.re;
            buf[2 * k + 1] = z.im;
        }
        Ok(())
    })
}

/// Relations of degree `degree` among the degree-one generators.
///
/// # Safety
/// `ring` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_ring_relations(
    ring: *const TmRing,
    degree: u32,
    commutative: c_int,
    svd_tol: f64,
    out: *mut *mut TmRelationSet,
) -> TmStatus {
    guard(|| {
        let ring = &ref_arg(ring, "ring")?.0;
        let out = out_arg(out, "out")?;
        let gens = standard_generators(ring)?;
        let set = find_relations(ring, degree, &gens, commutative != 0, svd_tol)?;
        *out = Box::into_raw(Box::new(TmRelationSet(set)));
        Ok(())
    })
}

/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_relations_count(set: *const TmRelationSet, out: *mut usize) -> TmStatus {
    guard(|| {
        *out_arg(out, "out")? = ref_arg(set, "set")?.0.len();
        Ok(())
    })
}

/// The relation set as JSON.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_relations_to_json(set: *const TmRelationSet, out: *mut *mut c_char) -> TmStatus {
    guard(|| {
        let json = serde_json::to_string_pretty(&ref_arg(set, "set")?.0.to_json()).expect("relations serialize");
        *out_arg(out, "out")? = into_c_string(json);
        Ok(())
    })
}

/// # Safety
/// `set` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tm_relations_free(set: *mut TmRelationSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Runs one verification suite with its default parameters (`tau = i`,
/// `b = 0.3` for sklyanin, `(i, 1.3i, 0.1i)` for kummer, six terms for
/// jseries) and returns the JSON report. `passed` receives 1 if every check
/// passed.
///
/// Families: `hesse`, `sklyanin`, `quasihomogeneous`, `veronese`, `kummer`,
/// `jseries`.
///
/// # Safety
/// `family` must be a nul-terminated string; `json` and `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_verify_family(
    family: *const c_char,
    params: TmParams,
    svd_tol: f64,
    json: *mut *mut c_char,
    passed: *mut c_int,
) -> TmStatus {
    guard(|| {
        let family = str_arg(family, "family")?;
        let json = out_arg(json, "json")?;
        let passed = out_arg(passed, "passed")?;
        let p = params_of(params)?;
        let i = Complex64::new(0.0, 1.0);
        let report: Report = match family {
            "hesse" => verify_hesse(i, svd_tol, &p)?,
            "sklyanin" => verify_sklyanin(i, 0.3, svd_tol, &p)?,
            "quasihomogeneous" => verify_quasihomogeneous(i, svd_tol, &p)?,
            "veronese" => verify_p123_veronese(i, &p)?,
            "kummer" => verify_kummer(i, Complex64::new(0.0, 1.3), Complex64::new(0.0, 0.1), svd_tol, &p)?,
            "jseries" => verify_jseries(6, &p)?,
            other => return Err(Error::Input(format!("unknown family {other:?}")).into()),
        };
        *passed = c_int::from(report.passed());
        *json = into_c_string(report.to_json_string());
        Ok(())
    })
}
