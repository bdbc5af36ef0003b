//! C ABI over `static_vacua`.
//!
//! Every function returns an [`SvacStatus`]; results come back through out-pointers. On
//! failure the message is available from [`svac_last_error_message`] on the same thread.
//! Models are opaque [`SvacModel`] handles released with [`svac_model_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use static_vacua::horizon::{default_classification_tol, HorizonType, RegionKind};
use static_vacua::{Error, ModelData, ModelKind, ModelTriple};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvacStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    NoRoot = 4,
    Unsupported = 5,
    Numerical = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvacModelKind {
    Minkowski = 0,
    Schwarzschild = 1,
    DeSitter = 2,
    SchwarzschildDeSitter = 3,
    Nariai = 4,
    AntiDeSitter = 5,
    SchwarzschildAds = 6,
    KottlerFlat = 7,
    KottlerHyperbolic = 8,
    AntiNariai = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvacHorizonType {
    Cosmological = 0,
    Cylindrical = 1,
    BlackHole = 2,
    /// Not classified (`Λ ≤ 0`).
    Unclassified = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvacRegionKind {
    Outer = 0,
    Inner = 1,
    Cylindrical = 2,
}

/// One horizon of a model.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvacHorizon {
    pub radius: f64,
    pub grad_norm: f64,
    pub kappa: f64,
    pub horizon_type: SvacHorizonType,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvacVirtualMass {
    pub mass: f64,
    pub kappa_max: f64,
    pub region_kind: SvacRegionKind,
    pub extrapolated: bool,
}

/// Opaque handle to a built catalog model.
pub struct SvacModel {
    inner: ModelData,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).unwrap_or_default());
}

fn status_of(err: &Error) -> SvacStatus {
    use Error::*;
    match err {
        InvalidParameter(_) | UnknownHorizon(_) | StepUnderflow(_) => SvacStatus::InvalidArgument,
        OutsideDomain { .. }
        | NonPositiveProfile { .. }
        | KappaOutOfRange { .. }
        | SubDeSitterSurfaceGravity(_)
        | LevelOutOfRange { .. }
        | EmptyBranch(_) => SvacStatus::Domain,
        NoRealRoot(_) | RootFinding(_) => SvacStatus::NoRoot,
        UnsupportedKind { .. } => SvacStatus::Unsupported,
        HorizonCrossing { .. } | ConstraintDrift { .. } => SvacStatus::Numerical,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SvacStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SvacStatus::Ok,
        Ok(Err(Failure::Null(name))) => {
            set_error(format!("null pointer passed for `{name}`"));
            SvacStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            SvacStatus::Panic
        }
    }
}

/// Writes through `out` after checking it.
unsafe fn put<T>(out: *mut T, name: &'static str, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn model_ref<'a>(model: *const SvacModel) -> Result<&'a ModelData, Failure> {
    model.as_ref().map(|m| &m.inner).ok_or(Failure::Null("model"))
}

fn kind_from(kind: u32) -> Result<ModelKind, Failure> {
    ModelKind::ALL
        .get(kind as usize)
        .copied()
        .ok_or_else(|| Failure::Lib(Error::InvalidParameter(format!("unknown model kind {kind}"))))
}

fn horizon_type_to_c(t: Option<HorizonType>) -> SvacHorizonType {
    match t {
        Some(HorizonType::Cosmological) => SvacHorizonType::Cosmological,
        Some(HorizonType::Cylindrical) => SvacHorizonType::Cylindrical,
        Some(HorizonType::BlackHole) => SvacHorizonType::BlackHole,
        None => SvacHorizonType::Unclassified,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn svac_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn svac_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a catalog model. `kind` is an [`SvacModelKind`] value; `mass` is read only when
/// `has_mass` is true and `genus` only when it is positive. Release the handle with
/// [`svac_model_free`].
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn svac_model_new(
    kind: u32,
    n: usize,
    has_mass: bool,
    mass: f64,
    genus: u32,
    out: *mut *mut SvacModel,
) -> SvacStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let mut triple = ModelTriple::new(kind_from(kind)?, n);
        if has_mass {
            triple.mass = Some(mass);
        }
        if genus > 0 {
            triple.genus = Some(genus);
        }
        let inner = static_vacua::build(triple)?;
        out.write(Box::into_raw(Box::new(SvacModel { inner })));
        Ok(())
    })
}

/// Releases a model; null is ignored.
///
/// # Safety
/// `model` must come from [`svac_model_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn svac_model_free(model: *mut SvacModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn svac_model_horizon_count(model: *const SvacModel, out: *mut usize) -> SvacStatus {
    guard(|| put(out, "out", model_ref(model)?.horizons.len()))
}

/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn svac_model_horizon(
    model: *const SvacModel,
    index: usize,
    out: *mut SvacHorizon,
) -> SvacStatus {
    guard(|| {
        let m = model_ref(model)?;
        let reports = static_vacua::horizon::horizon_report(m);
        let h = reports.get(index).ok_or_else(|| {
            Error::InvalidParameter(format!("horizon index {index} out of range ({})", reports.len()))
        })?;
        put(
            out,
            "out",
            SvacHorizon {
                radius: h.radius,
                grad_norm: h.grad_norm,
                kappa: h.kappa,
                horizon_type: horizon_type_to_c(h.horizon_type),
            },
        )
    })
}

/// Value of `max u`, `min u`, `sup u` or `inf u`, whichever the model has.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn svac_model_u_extremum(model: *const SvacModel, out: *mut f64) -> SvacStatus {
    guard(|| put(out, "out", model_ref(model)?.extremum.value))
}

/// Potential at a point of the model coordinate.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn svac_model_u(model: *const SvacModel, x: f64, out: *mut f64) -> SvacStatus {
    guard(|| {
        let m = model_ref(model)?;
        m.static_residual(x)?;
        put(out, "out", m.u(x))
    })
}

/// Largest of the static-equation residuals at `x`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn svac_model_static_residual(
    model: *const SvacModel,
    x: f64,
    out: *mut f64,
) -> SvacStatus {
    guard(|| put(out, "out", model_ref(model)?.static_residual(x)?.max_abs()))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn svac_m_max(n: usize, out: *mut f64) -> SvacStatus {
    guard(|| put(out, "out", static_vacua::m_max(n)?))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn svac_k_plus(n: usize, m: f64, out: *mut f64) -> SvacStatus {
    guard(|| put(out, "out", static_vacua::k_plus(n, m)?))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn svac_k_minus(n: usize, m: f64, out: *mut f64) -> SvacStatus {
    guard(|| put(out, "out", static_vacua::k_minus(n, m)?))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn svac_invert_k_plus(n: usize, kappa: f64, out: *mut f64) -> SvacStatus {
    guard(|| put(out, "out", static_vacua::invert_k_plus(n, kappa)?))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn svac_invert_k_minus(n: usize, kappa: f64, out: *mut f64) -> SvacStatus {
    guard(|| put(out, "out", static_vacua::invert_k_minus(n, kappa)?))
}

/// Horizon type with the default tolerance `1e-9 √n`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn svac_classify(kappa: f64, n: usize, out: *mut SvacHorizonType) -> SvacStatus {
    guard(|| {
        let t = static_vacua::classify(kappa, n, default_classification_tol(n));
        put(out, "out", horizon_type_to_c(Some(t)))
    })
}

/// # Safety
/// `kappas` must point to `len` readable doubles and `out` be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn svac_virtual_mass(
    kappas: *const f64,
    len: usize,
    n: usize,
    out: *mut SvacVirtualMass,
) -> SvacStatus {
    guard(|| {
        if kappas.is_null() {
            return Err(Failure::Null("kappas"));
        }
        let slice = std::slice::from_raw_parts(kappas, len);
        let r = static_vacua::virtual_mass(slice, n)?;
        let region_kind = match r.region_kind {
            RegionKind::Outer => SvacRegionKind::Outer,
            RegionKind::Inner => SvacRegionKind::Inner,
            RegionKind::Cylindrical => SvacRegionKind::Cylindrical,
        };
        put(
            out,
            "out",
            SvacVirtualMass { mass: r.mass, kappa_max: r.kappa_max, region_kind, extrapolated: r.extrapolated },
        )
    })
}

/// Fills `out[0..points*3]` with rows `(m, k_plus, k_minus)` over `[0, m_max]`; the `m = 0`
/// inner value is `+inf`.
///
/// # Safety
/// `out` must be valid for `3 * points` writes.
#[no_mangle]
pub unsafe extern "C" fn svac_surface_gravity_curve(n: usize, points: usize, out: *mut f64) -> SvacStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let rows = static_vacua::surface_gravity_curve(n, points)?;
        ptr::copy_nonoverlapping(rows.as_ptr().cast::<f64>(), out, rows.len() * 3);
        Ok(())
    })
}
