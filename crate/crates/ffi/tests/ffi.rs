use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use static_vacua_ffi::*;

const SQRT3: f64 = 1.7320508075688772;

fn last_error() -> String {
    unsafe { CStr::from_ptr(svac_last_error_message()) }.to_string_lossy().into_owned()
}

fn new_model(kind: SvacModelKind, n: usize, mass: Option<f64>, genus: u32) -> *mut SvacModel {
    let mut model = ptr::null_mut();
    let status =
        unsafe { svac_model_new(kind as u32, n, mass.is_some(), mass.unwrap_or(0.0), genus, &mut model) };
    assert_eq!(status, SvacStatus::Ok, "{}", last_error());
    model
}

#[test]
fn scalar_functions() {
    let mut out = 0.0;
    unsafe {
        assert_eq!(svac_m_max(3, &mut out), SvacStatus::Ok);
        assert_eq!(out, 0.19245008972987526);
        assert_eq!(svac_k_plus(3, 0.0, &mut out), SvacStatus::Ok);
        assert_eq!(out, 1.0);
        assert_eq!(svac_k_minus(3, 0.1, &mut out), SvacStatus::Ok);
        assert!((out - 3.4923729816373391).abs() < 1e-12);
        assert_eq!(svac_invert_k_minus(3, out, &mut out), SvacStatus::Ok);
        assert!((out - 0.1).abs() < 1e-12);
        assert_eq!(svac_invert_k_plus(3, 1.2601705164785538, &mut out), SvacStatus::Ok);
        assert!((out - 0.1).abs() < 1e-12);
        let mut ty = SvacHorizonType::Unclassified;
        assert_eq!(svac_classify(SQRT3, 3, &mut ty), SvacStatus::Ok);
        assert_eq!(ty, SvacHorizonType::Cylindrical);
    }
}

#[test]
fn error_codes_and_messages() {
    let mut out = 0.0;
    unsafe {
        assert_eq!(svac_k_plus(3, 1.0, &mut out), SvacStatus::InvalidArgument);
        assert!(last_error().contains("k_plus"));
        assert_eq!(svac_invert_k_plus(3, 0.5, &mut out), SvacStatus::Domain);
        assert_eq!(svac_m_max(3, ptr::null_mut()), SvacStatus::NullPointer);
        assert!(last_error().contains("out"));
        let mut model = ptr::null_mut();
        assert_eq!(svac_model_new(42, 3, false, 0.0, 0, &mut model), SvacStatus::InvalidArgument);
        assert!(model.is_null());
        let ds = new_model(SvacModelKind::DeSitter, 3, None, 0);
        assert_eq!(svac_model_u(ds, 1.5, &mut out), SvacStatus::Domain);
        svac_model_free(ds);
        svac_model_free(ptr::null_mut());
    }
}

#[test]
fn model_handles() {
    let sds = new_model(SvacModelKind::SchwarzschildDeSitter, 3, Some(0.1), 0);
    unsafe {
        let mut count = 0;
        assert_eq!(svac_model_horizon_count(sds, &mut count), SvacStatus::Ok);
        assert_eq!(count, 2);
        let mut h = SvacHorizon { radius: 0.0, grad_norm: 0.0, kappa: 0.0, horizon_type: SvacHorizonType::Unclassified };
        assert_eq!(svac_model_horizon(sds, 1, &mut h), SvacStatus::Ok);
        assert!((h.radius - 0.87888506624997283).abs() < 1e-12);
        assert!((h.kappa - 1.2601705164785538).abs() < 1e-12);
        assert_eq!(h.horizon_type, SvacHorizonType::Cosmological);
        assert_eq!(svac_model_horizon(sds, 2, &mut h), SvacStatus::InvalidArgument);
        let mut u = 0.0;
        assert_eq!(svac_model_u_extremum(sds, &mut u), SvacStatus::Ok);
        assert!((u - 0.59470126365296626).abs() < 1e-12);
        let mut res = 1.0;
        assert_eq!(svac_model_static_residual(sds, 0.5, &mut res), SvacStatus::Ok);
        assert!(res < 1e-10);
        svac_model_free(sds);
    }
}

#[test]
fn virtual_mass_and_figure1() {
    let kappas = [1.0, 0.5];
    let mut vm = SvacVirtualMass { mass: -1.0, kappa_max: 0.0, region_kind: SvacRegionKind::Inner, extrapolated: true };
    unsafe {
        assert_eq!(svac_virtual_mass(kappas.as_ptr(), 2, 3, &mut vm), SvacStatus::Ok);
        assert_eq!(vm.mass, 0.0);
        assert_eq!(vm.region_kind, SvacRegionKind::Outer);
        assert!(!vm.extrapolated);
        assert_eq!(svac_virtual_mass(ptr::null(), 0, 3, &mut vm), SvacStatus::NullPointer);
        let mut rows = vec![0.0; 30];
        assert_eq!(svac_surface_gravity_curve(3, 10, rows.as_mut_ptr()), SvacStatus::Ok);
        assert_eq!(&rows[..3], &[0.0, 1.0, f64::INFINITY]);
        assert_eq!(&rows[28..], &[SQRT3, SQRT3]);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(svac_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_generated_and_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/static_vacua.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["svac_model_new", "svac_virtual_mass", "SVAC_STATUS_PANIC", "typedef struct SvacModel SvacModel"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-x", "c", "-std=c99"]).arg(&header).status() else {
        eprintln!("no C compiler found; syntax check skipped");
        return;
    };
    assert!(status.success());
}
