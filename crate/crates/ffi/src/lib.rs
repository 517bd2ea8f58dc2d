//! C ABI for `curvlab`.
//!
//! Objects cross the boundary as opaque handles (`CurvStructure`,
//! `CurvOperator`) created by `*_new`-style functions and released with the
//! matching `*_free`. Every fallible function returns a [`CurvStatus`] and
//! writes its result through an out-pointer; on failure a message is
//! available from [`curv_last_error_message`] on the same thread. Panics are
//! caught at the boundary and reported as `CURV_STATUS_PANIC`.
//!
//! Matrices are passed row-major as `N * N` doubles, `N = n(n-1)/2`, in the
//! lexicographic `(i<j)` basis.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use curvlab::cone::{self, ConeSpec};
use curvlab::flow::{self, FlowStatus, IntegratorConfig, Normalization};
use curvlab::lie::basis_len;
use curvlab::sharp;
use curvlab::workbench::io::{operator_from_json, operator_to_json};
use curvlab::{CurvatureOperator, Error, LieStructure};
use nalgebra::DMatrix;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    NotSymmetric = 4,
    Bianchi = 5,
    Precondition = 6,
    NotPinched = 7,
    CertificationFailed = 8,
    Parse = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Terminal state of an integration.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurvFlowStatus {
    Horizon = 0,
    BlowUp = 1,
    Error = 2,
}

/// so(n) structure constants.
pub struct CurvStructure(LieStructure);

/// A symmetric curvature operator.
pub struct CurvOperator(CurvatureOperator);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct CurvDecomposition {
    pub scal: f64,
    pub lambda_bar: f64,
    pub norm_scalar: f64,
    pub norm_ricci: f64,
    pub norm_weyl: f64,
    pub anisotropy: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct CurvConeMargin {
    pub margin: f64,
    pub normalized: f64,
    /// 1 when inside at the requested tolerance, else 0.
    pub inside: i32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct CurvFamilyParams {
    pub b: f64,
    pub a: f64,
    pub p: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct CurvCertificate {
    pub b: f64,
    pub a: f64,
    pub p: f64,
    pub margin: f64,
    pub reverified_margin: f64,
}

/// Integrator settings; zero or negative fields fall back to the defaults.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct CurvFlowConfig {
    pub horizon: f64,
    pub rtol: f64,
    pub atol: f64,
    pub initial_step: f64,
    pub max_step: f64,
    pub blowup_norm: f64,
    /// Nonzero follows the flow on the unit sphere.
    pub unit_norm: i32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct CurvFlowResult {
    pub status: CurvFlowStatus,
    pub final_time: f64,
    /// Estimated blow-up time, or NaN when the run did not blow up.
    pub blowup_time: f64,
    pub accepted_steps: u64,
    pub rejected_steps: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(CurvStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::DimensionOutOfRange { .. } | Error::DimensionMismatch { .. } | Error::SizeMismatch { .. } => {
                CurvStatus::Dimension
            }
            Error::NotSymmetric { .. } => CurvStatus::NotSymmetric,
            Error::BianchiDefect { .. } => CurvStatus::Bianchi,
            Error::Precondition(_) | Error::NonPositiveScalar { .. } => CurvStatus::Precondition,
            Error::NotPinched { .. } => CurvStatus::NotPinched,
            Error::CertificationFailed { .. } => CurvStatus::CertificationFailed,
            Error::Parse(_) | Error::Json(_) | Error::Csv(_) => CurvStatus::Parse,
            _ => CurvStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CurvStatus::NullPointer, format!("{what} is null"))
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CurvStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CurvStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            CurvStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_operator(out: *mut *mut CurvOperator, r: CurvatureOperator) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(CurvOperator(r))), "out")
}

unsafe fn write_slice(out: *mut f64, len: usize, values: impl ExactSizeIterator<Item = f64>) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    if len < values.len() {
        return Err(Failure(
            CurvStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", values.len()),
        ));
    }
    for (k, v) in values.enumerate() {
        out.add(k).write(v);
    }
    Ok(())
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(CurvStatus::Parse, format!("{what} is not valid UTF-8")))
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn curv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Basis length `N = n(n-1)/2`.
#[no_mangle]
pub extern "C" fn curv_basis_len(n: usize) -> usize {
    basis_len(n)
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn curv_structure_new(n: usize, out: *mut *mut CurvStructure) -> CurvStatus {
    guard(|| {
        let s = LieStructure::new(n)?;
        put(out, Box::into_raw(Box::new(CurvStructure(s))), "out")
    })
}

/// # Safety
/// `s` must be NULL or a handle from [`curv_structure_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn curv_structure_free(s: *mut CurvStructure) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of nonzero structure constants `c_abg` (ordered triples).
///
/// # Safety
/// `s` must be a live structure handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn curv_structure_nnz(s: *const CurvStructure, out: *mut usize) -> CurvStatus {
    guard(|| put(out, get(s, "structure")?.0.nnz(), "out"))
}

/// Operator from `len = N * N` row-major coefficients; symmetry is checked.
///
/// # Safety
/// `coeffs` must point to `len` readable doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn curv_operator_new(
    n: usize,
    coeffs: *const f64,
    len: usize,
    out: *mut *mut CurvOperator,
) -> CurvStatus {
    guard(|| {
        if coeffs.is_null() {
            return Err(null("coeffs"));
        }
        let size = basis_len(n);
        if len != size * size {
            return Err(Failure(CurvStatus::Dimension, format!("expected {} coefficients, got {len}", size * size)));
        }
        let data = std::slice::from_raw_parts(coeffs, len);
        let r = CurvatureOperator::new(n, DMatrix::from_row_slice(size, size, data))?;
        put_operator(out, r)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn curv_operator_identity(n: usize, out: *mut *mut CurvOperator) -> CurvStatus {
    guard(|| {
        if n < 2 {
            return Err(Failure(CurvStatus::Dimension, format!("dimension {n} is below 2")));
        }
        put_operator(out, CurvatureOperator::identity(n))
    })
}

/// # Safety
/// `r` must be NULL or an operator handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn curv_operator_free(r: *mut CurvOperator) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be a live operator handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn curv_operator_dim(r: *const CurvOperator, out: *mut usize) -> CurvStatus {
    guard(|| put(out, get(r, "operator")?.0.dim(), "out"))
}

/// Copies the `N * N` coefficients row-major into `out` (capacity `len`).
///
/// # Safety
/// `r` must be a live operator handle; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn curv_operator_coeffs(r: *const CurvOperator, out: *mut f64, len: usize) -> CurvStatus {
    guard(|| {
        let m = get(r, "operator")?.0.coeffs();
        let rows: Vec<f64> = m.transpose().iter().copied().collect();
        write_slice(out, len, rows.into_iter())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn curv_operator_from_json(json: *const c_char, out: *mut *mut CurvOperator) -> CurvStatus {
    guard(|| put_operator(out, operator_from_json(c_str(json, "json")?)?))
}

/// Newly allocated JSON text; release it with [`curv_string_free`].
///
/// # Safety
/// `r` must be a live operator handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn curv_operator_to_json(r: *const CurvOperator, out: *mut *mut c_char) -> CurvStatus {
    guard(|| {
        let text = operator_to_json(&get(r, "operator")?.0);
        let c = CString::new(text).map_err(|e| Failure(CurvStatus::Parse, e.to_string()))?;
        put(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn curv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `A # B`.
///
/// # Safety
/// All handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn curv_sharp(
    s: *const CurvStructure,
    a: *const CurvOperator,
    b: *const CurvOperator,
    out: *mut *mut CurvOperator,
) -> CurvStatus {
    guard(|| {
        let r = sharp::sharp(&get(s, "structure")?.0, &get(a, "a")?.0, &get(b, "b")?.0)?;
        put_operator(out, r)
    })
}

/// The reaction term `2(R^2 + R^#)`.
///
/// # Safety
/// All handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn curv_q_vector_field(
    s: *const CurvStructure,
    r: *const CurvOperator,
    out: *mut *mut CurvOperator,
) -> CurvStatus {
    guard(|| put_operator(out, sharp::q_vector_field(&get(s, "structure")?.0, &get(r, "operator")?.0)?))
}

/// Ascending eigenvalues into `out` (capacity `len >= N`).
///
/// # Safety
/// `r` must be a live operator handle; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn curv_spectrum(r: *const CurvOperator, out: *mut f64, len: usize) -> CurvStatus {
    guard(|| write_slice(out, len, get(r, "operator")?.0.spectrum().values.into_iter()))
}

/// # Safety
/// `r` must be a live operator handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn curv_decompose(r: *const CurvOperator, out: *mut CurvDecomposition) -> CurvStatus {
    guard(|| {
        let p = get(r, "operator")?.0.decompose()?;
        let d = CurvDecomposition {
            scal: p.scal,
            lambda_bar: p.lambda_bar,
            norm_scalar: p.norm_scalar,
            norm_ricci: p.norm_ricci,
            norm_weyl: p.norm_weyl,
            anisotropy: p.anisotropy(),
        };
        put(out, d, "out")
    })
}

/// # Safety
/// `r` must be a live operator handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn curv_bianchi_defect(r: *const CurvOperator, out: *mut f64) -> CurvStatus {
    guard(|| put(out, get(r, "operator")?.0.bianchi_defect(), "out"))
}

/// # Safety
/// `r` must be a live operator handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn curv_project_bianchi(r: *const CurvOperator, out: *mut *mut CurvOperator) -> CurvStatus {
    guard(|| put_operator(out, get(r, "operator")?.0.project_bianchi()))
}

/// `|R + R # I - Ric ^ id|` for a Bianchi operator.
///
/// # Safety
/// All handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn curv_ric_wedge_residual(
    s: *const CurvStructure,
    r: *const CurvOperator,
    out: *mut f64,
) -> CurvStatus {
    guard(|| put(out, sharp::verify_ric_wedge_identity(&get(s, "structure")?.0, &get(r, "operator")?.0)?, "out"))
}

/// Membership in the cone named by `spec` (`"psd"`, `"2nn"`, `"cb:0.25"`,
/// `"labcb:0.25"`, `"pinch:0.3"`, `"chenzhu:0.1:tensor"`).
///
/// # Safety
/// `r` must be a live operator handle, `spec` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn curv_cone_margin(
    r: *const CurvOperator,
    spec: *const c_char,
    tol: f64,
    out: *mut CurvConeMargin,
) -> CurvStatus {
    guard(|| {
        let spec: ConeSpec = c_str(spec, "spec")?.parse()?;
        let m = cone::contains(&spec, &get(r, "operator")?.0, tol)?;
        put(out, CurvConeMargin { margin: m.margin, normalized: m.normalized, inside: m.inside as i32 }, "out")
    })
}

/// # Safety
/// `r` must be a live operator handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn curv_delta_max(r: *const CurvOperator, out: *mut f64) -> CurvStatus {
    guard(|| put(out, cone::delta_max(&get(r, "operator")?.0)?, "out"))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn curv_family_params(n: usize, b: f64, out: *mut CurvFamilyParams) -> CurvStatus {
    guard(|| {
        let fp = cone::family_params(n, b)?;
        put(out, CurvFamilyParams { b: fp.b, a: fp.a, p: fp.p }, "out")
    })
}

/// # Safety
/// `r` must be a live operator handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn curv_l_transform(
    r: *const CurvOperator,
    a: f64,
    b: f64,
    out: *mut *mut CurvOperator,
) -> CurvStatus {
    guard(|| put_operator(out, cone::l_transform(&get(r, "operator")?.0, a, b)?))
}

/// # Safety
/// `r` must be a live operator handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn curv_l_inverse(
    r: *const CurvOperator,
    a: f64,
    b: f64,
    out: *mut *mut CurvOperator,
) -> CurvStatus {
    guard(|| put_operator(out, cone::l_inverse(&get(r, "operator")?.0, a, b)?))
}

/// Largest `b` on the default grid with `l_ab^-1(R)` in `C(b)`.
///
/// # Safety
/// `r` must be a live operator handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn curv_certify(r: *const CurvOperator, tol: f64, out: *mut CurvCertificate) -> CurvStatus {
    guard(|| {
        let c = cone::certify_cone_entry(&get(r, "operator")?.0, &cone::default_grid(), tol)?;
        let cert = CurvCertificate {
            b: c.params.b,
            a: c.params.a,
            p: c.params.p,
            margin: c.margin,
            reverified_margin: c.reverified_margin,
        };
        put(out, cert, "out")
    })
}

fn flow_config(cfg: Option<&CurvFlowConfig>) -> IntegratorConfig {
    let mut out = IntegratorConfig::default();
    let Some(c) = cfg else { return out };
    let pick = |v: f64, default: f64| if v > 0.0 { v } else { default };
    out.horizon = pick(c.horizon, out.horizon);
    out.rtol = pick(c.rtol, out.rtol);
    out.atol = pick(c.atol, out.atol);
    out.initial_step = pick(c.initial_step, out.initial_step);
    out.max_step = pick(c.max_step, out.max_step);
    out.blowup_norm = pick(c.blowup_norm, out.blowup_norm);
    if c.unit_norm != 0 {
        out.normalization = Normalization::UnitNorm;
    }
    out
}

/// Integrates `dR/dt = 2(R^2 + R^#)` from `r0`. `cfg` may be NULL for the
/// defaults. The final state is returned through `final_state` when it is
/// not NULL.
///
/// # Safety
/// Handles must be live; `cfg` NULL or readable; `out` writable;
/// `final_state` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn curv_integrate(
    s: *const CurvStructure,
    r0: *const CurvOperator,
    cfg: *const CurvFlowConfig,
    out: *mut CurvFlowResult,
    final_state: *mut *mut CurvOperator,
) -> CurvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let traj = flow::integrate(&get(s, "structure")?.0, &get(r0, "operator")?.0, &flow_config(cfg.as_ref()))?;
        let (status, blowup_time) = match traj.status {
            FlowStatus::Horizon => (CurvFlowStatus::Horizon, f64::NAN),
            FlowStatus::BlowUp { t_est } => (CurvFlowStatus::BlowUp, t_est),
            FlowStatus::Error { message } => {
                set_error(message);
                (CurvFlowStatus::Error, f64::NAN)
            }
        };
        let result = CurvFlowResult {
            status,
            final_time: traj.final_time,
            blowup_time,
            accepted_steps: traj.accepted_steps as u64,
            rejected_steps: traj.rejected_steps as u64,
        };
        put(out, result, "out")?;
        if !final_state.is_null() {
            put_operator(final_state, traj.final_state)?;
        }
        Ok(())
    })
}
