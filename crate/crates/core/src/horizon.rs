//! Horizon radii, the surface-gravity-versus-mass functions `k±` of the
//! Schwarzschild–de Sitter family, horizon classification and virtual mass.

use serde::{Deserialize, Serialize};

use crate::catalog::{m_max, ModelData, Normalization};
use crate::error::{Error, Result};
use crate::roots::{bisect, bracket_upward};

/// Horizons with `|W'| <` this are reported as degenerate.
pub const DEGENERATE_SLOPE: f64 = 1e-8;

/// Kappa values this far below 1 are treated as exactly 1.
pub const KAPPA_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HorizonType {
    Cosmological,
    BlackHole,
    Cylindrical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    Outer,
    Inner,
    Cylindrical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonRoots {
    /// Positive zeros of the profile, ascending.
    pub radii: Vec<f64>,
    /// Set when a root is (numerically) double.
    pub degenerate: bool,
}

/// `f(r) = r^{n-2} W(r) = k r^{n-2} - s r^n - 2m`, free of the singularity at `r = 0`.
fn cleared_profile(n: usize, m: f64, k: f64, s: f64) -> impl Fn(f64) -> f64 {
    let p = n as i32;
    move |r: f64| k * r.powi(p - 2) - s * r.powi(p) - 2.0 * m
}

fn cleared_slope(n: usize, k: f64, s: f64, r: f64) -> f64 {
    let nf = n as f64;
    (nf - 2.0) * k * r.powi(n as i32 - 3) - nf * s * r.powi(n as i32 - 1)
}

/// Positive roots of `W(r) = k - s r² - 2m r^{2-n}`.
pub fn horizon_radii(n: usize, m: f64, k: i8, lambda_sign: i8) -> Result<HorizonRoots> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("dimension must be >= 3, got {n}")));
    }
    if !m.is_finite() {
        return Err(Error::InvalidParameter(format!("mass must be finite, got {m}")));
    }
    let (kf, s) = (k as f64, lambda_sign as f64);
    let none = || {
        Error::NoRealRoot(format!(
            "W = {kf} - ({s}) r^2 - 2({m}) r^(2-{n}) has no positive zero"
        ))
    };

    if m == 0.0 {
        // W = k - s r².
        let ratio = if s != 0.0 { kf / s } else { -1.0 };
        if ratio > 0.0 {
            return Ok(HorizonRoots { radii: vec![ratio.sqrt()], degenerate: false });
        }
        return Err(none());
    }

    let f = cleared_profile(n, m, kf, s);
    let crit_sq = if s != 0.0 { (n as f64 - 2.0) * kf / (n as f64 * s) } else { -1.0 };
    let crit = (crit_sq > 0.0).then(|| crit_sq.sqrt());

    let mut radii = Vec::new();
    let mut degenerate = false;
    if let Some(rc) = crit {
        let fc = f(rc);
        if fc.abs() <= 1e-14 * (2.0 * m.abs()).max(f64::MIN_POSITIVE) {
            return Ok(HorizonRoots { radii: vec![rc], degenerate: true });
        }
        if let Some(r) = root_on(&f, 0.0, rc)? {
            radii.push(r);
        }
        if let Some(r) = root_above(&f, rc)? {
            radii.push(r);
        }
    } else if let Some(r) = root_above(&f, 0.0)? {
        radii.push(r);
    }

    if radii.is_empty() {
        return Err(none());
    }
    for r in radii.iter_mut() {
        let slope = cleared_slope(n, kf, s, *r);
        if slope != 0.0 {
            let polished = *r - f(*r) / slope;
            if polished > 0.0 && (polished - *r).abs() < 1e-10 * r.abs().max(1.0) {
                *r = polished;
            }
        }
        let w_slope = slope / r.powi(n as i32 - 2);
        degenerate |= w_slope.abs() < DEGENERATE_SLOPE;
    }
    radii.sort_by(f64::total_cmp);
    Ok(HorizonRoots { radii, degenerate })
}

fn root_on(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Result<Option<f64>> {
    let (fa, fb) = (f(a), f(b));
    if fa.signum() == fb.signum() && fb != 0.0 {
        return Ok(None);
    }
    bisect(f, a, b, 0.0, 1e-13).map(Some)
}

fn root_above(f: &impl Fn(f64) -> f64, a: f64) -> Result<Option<f64>> {
    let start = if a > 0.0 { 2.0 * a } else { 1.0 };
    match bracket_upward(f, a, start, 1e150) {
        Ok((lo, hi)) => bisect(f, lo, hi, 0.0, 1e-13).map(Some),
        Err(_) => Ok(None),
    }
}

/// Maximum of the Schwarzschild–de Sitter potential, `sqrt(1 - (m/m_max)^{2/n})`.
pub fn sds_u_max(n: usize, m: f64) -> Result<f64> {
    let mm = m_max(n)?;
    if !(0.0..=mm).contains(&m) {
        return Err(Error::InvalidParameter(format!("mass {m} outside [0, {mm}]")));
    }
    Ok((1.0 - (m / mm).powf(2.0 / n as f64)).max(0.0).sqrt())
}

/// `(r_-, r_+)` for `0 < m < m_max`; for `m = 0` only `r_+ = 1` exists.
pub fn sds_radii(n: usize, m: f64) -> Result<(Option<f64>, f64)> {
    let roots = horizon_radii(n, m, 1, 1)?;
    match roots.radii.as_slice() {
        [r] if m == 0.0 => Ok((None, *r)),
        [r] => Ok((Some(*r), *r)),
        [a, b] => Ok((Some(*a), *b)),
        other => Err(Error::RootFinding(format!("unexpected root set {other:?}"))),
    }
}

fn check_k_plus_mass(n: usize, m: f64) -> Result<f64> {
    let mm = m_max(n)?;
    if !(m >= 0.0 && m < mm) {
        return Err(Error::InvalidParameter(format!(
            "k_plus needs 0 <= m < m_max = {mm}, got {m}"
        )));
    }
    Ok(mm)
}

fn check_k_minus_mass(n: usize, m: f64) -> Result<f64> {
    let mm = m_max(n)?;
    if !(m > 0.0 && m <= mm) {
        return Err(Error::InvalidParameter(format!(
            "k_minus needs 0 < m <= m_max = {mm}, got {m}"
        )));
    }
    Ok(mm)
}

/// Outer surface gravity of the Schwarzschild–de Sitter family as a function of the mass.
pub fn k_plus(n: usize, m: f64) -> Result<f64> {
    let mm = check_k_plus_mass(n, m)?;
    if m == 0.0 {
        return Ok(1.0);
    }
    let (_, rp) = sds_radii(n, m)?;
    let bracket = 1.0 - (n as f64 - 2.0) * m * rp.powi(-(n as i32));
    let denom = 1.0 - (m / mm).powf(2.0 / n as f64);
    Ok((rp * rp * bracket * bracket / denom).sqrt())
}

/// Inner surface gravity of the Schwarzschild–de Sitter family as a function of the mass.
pub fn k_minus(n: usize, m: f64) -> Result<f64> {
    let mm = check_k_minus_mass(n, m)?;
    if m == mm {
        return Ok((n as f64).sqrt());
    }
    let (rm, _) = sds_radii(n, m)?;
    let rm = rm.ok_or_else(|| Error::RootFinding("missing inner horizon".into()))?;
    let bracket = (n as f64 - 2.0) * m * rm.powi(-(n as i32)) - 1.0;
    let denom = 1.0 - (m / mm).powf(2.0 / n as f64);
    Ok((rm * rm * bracket * bracket / denom).sqrt())
}

/// `|W'(r_+)| / 2 / u_max`, an independent route to [`k_plus`].
pub fn k_plus_from_slope(n: usize, m: f64) -> Result<f64> {
    check_k_plus_mass(n, m)?;
    let (_, rp) = sds_radii(n, m)?;
    Ok(profile_half_slope(n, m, rp) / sds_u_max(n, m)?)
}

/// `|W'(r_-)| / 2 / u_max`, an independent route to [`k_minus`].
pub fn k_minus_from_slope(n: usize, m: f64) -> Result<f64> {
    check_k_minus_mass(n, m)?;
    let (rm, _) = sds_radii(n, m)?;
    let rm = rm.ok_or_else(|| Error::RootFinding("missing inner horizon".into()))?;
    Ok(profile_half_slope(n, m, rm) / sds_u_max(n, m)?)
}

/// `|W'(r)| / 2` for `W = 1 - r² - 2m r^{2-n}`, differentiated term by term.
fn profile_half_slope(n: usize, m: f64, r: f64) -> f64 {
    let nf = n as f64;
    (-2.0 * r - 2.0 * m * (2.0 - nf) * r.powi(1 - n as i32)).abs() / 2.0
}

/// `k_+` extended by continuity to `m_max`, where it equals `√n`.
fn k_plus_closed(n: usize, m: f64, mm: f64) -> f64 {
    if m >= mm {
        (n as f64).sqrt()
    } else {
        k_plus(n, m).unwrap_or(f64::NAN)
    }
}

/// The mass whose outer horizon has normalised surface gravity `kappa ∈ [1, √n)`.
pub fn invert_k_plus(n: usize, kappa: f64) -> Result<f64> {
    let mm = m_max(n)?;
    let sqrt_n = (n as f64).sqrt();
    let kappa = if (1.0 - KAPPA_CLAMP..1.0).contains(&kappa) { 1.0 } else { kappa };
    if !(kappa >= 1.0 && kappa < sqrt_n) {
        return Err(Error::KappaOutOfRange {
            kappa,
            lo: 1.0,
            hi: sqrt_n,
            hint: if kappa < 1.0 {
                "below the de Sitter value"
            } else {
                "not of cosmological type"
            },
        });
    }
    if kappa == 1.0 {
        return Ok(0.0);
    }
    bisect(|m| k_plus_closed(n, m, mm) - kappa, 0.0, mm, 0.0, 1e-15)
}

/// The mass whose inner horizon has normalised surface gravity `kappa ∈ [√n, ∞)`.
pub fn invert_k_minus(n: usize, kappa: f64) -> Result<f64> {
    let mm = m_max(n)?;
    let sqrt_n = (n as f64).sqrt();
    if !(kappa >= sqrt_n && kappa.is_finite()) {
        return Err(Error::KappaOutOfRange {
            kappa,
            lo: sqrt_n,
            hi: f64::INFINITY,
            hint: "not of black hole type",
        });
    }
    if kappa == sqrt_n {
        return Ok(mm);
    }
    let mut lo = 0.5 * mm;
    while k_minus(n, lo)? <= kappa {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(Error::RootFinding(format!("kappa {kappa} is too large to invert")));
        }
    }
    bisect(|m| k_minus(n, m).unwrap_or(f64::NAN) - kappa, lo, mm, 0.0, 1e-15)
}

/// Default tolerance for the cylindrical band around `√n`.
pub fn default_classification_tol(n: usize) -> f64 {
    1e-9 * (n as f64).sqrt()
}

pub fn classify(kappa: f64, n: usize, tol: f64) -> HorizonType {
    let sqrt_n = (n as f64).sqrt();
    if (kappa - sqrt_n).abs() <= tol {
        HorizonType::Cylindrical
    } else if kappa > sqrt_n + tol {
        HorizonType::BlackHole
    } else {
        HorizonType::Cosmological
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VirtualMassResult {
    pub mass: f64,
    pub region_kind: RegionKind,
    pub kappa_max: f64,
    /// The mass was assigned by continuity rather than by inverting `k±`.
    pub extrapolated: bool,
}

pub fn virtual_mass(kappas: &[f64], n: usize) -> Result<VirtualMassResult> {
    virtual_mass_with_tol(kappas, n, default_classification_tol(n))
}

pub fn virtual_mass_with_tol(kappas: &[f64], n: usize, tol: f64) -> Result<VirtualMassResult> {
    if kappas.is_empty() {
        return Err(Error::InvalidParameter("at least one surface gravity is required".into()));
    }
    if let Some(bad) = kappas.iter().find(|k| !(**k >= 0.0 && k.is_finite())) {
        return Err(Error::InvalidParameter(format!(
            "surface gravities must be finite and nonnegative, got {bad}"
        )));
    }
    let mm = m_max(n)?;
    let kappa_max = kappas.iter().copied().fold(0.0, f64::max);
    if kappa_max < 1.0 - KAPPA_CLAMP {
        return Err(Error::SubDeSitterSurfaceGravity(kappa_max));
    }
    let types: Vec<_> = kappas.iter().map(|k| classify(*k, n, tol)).collect();
    let region_kind = if types.contains(&HorizonType::BlackHole) {
        RegionKind::Inner
    } else if types.contains(&HorizonType::Cylindrical) {
        RegionKind::Cylindrical
    } else {
        RegionKind::Outer
    };
    let (mass, extrapolated) = match region_kind {
        RegionKind::Outer => (invert_k_plus(n, kappa_max)?, false),
        RegionKind::Inner => (invert_k_minus(n, kappa_max)?, false),
        RegionKind::Cylindrical => (mm, true),
    };
    Ok(VirtualMassResult { mass, region_kind, kappa_max, extrapolated })
}

/// Christoffel symbols of `γ = -u² dt⊗dt + g` at a point where `g` is Euclidean to first
/// order and `Du` points along the first spatial axis. Index 0 is time, 1..=3 space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticChristoffel {
    pub gamma: [[[f64; 4]; 4]; 4],
    pub metric_diag: [f64; 4],
}

impl StaticChristoffel {
    pub fn new(u: f64, grad_u: f64) -> Self {
        let du = [0.0, grad_u, 0.0, 0.0];
        let mut gamma = [[[0.0; 4]; 4]; 4];
        for i in 1..4 {
            // Γ^0_{0i} = Γ^0_{i0} = ∂_i u / u and Γ^i_{00} = u ∂_i u.
            gamma[0][0][i] = du[i] / u;
            gamma[0][i][0] = du[i] / u;
            gamma[i][0][0] = u * du[i];
        }
        Self { gamma, metric_diag: [-u * u, 1.0, 1.0, 1.0] }
    }

    /// `∇_μ K_ν` for the Killing field `K = ∂_t`, whose only nonzero derivative of the
    /// lowered components is `∂_i K_0 = -2u ∂_i u`.
    pub fn killing_gradient(&self, u: f64, grad_u: f64) -> [[f64; 4]; 4] {
        let k_lower = [self.metric_diag[0], 0.0, 0.0, 0.0];
        let mut dk = [[0.0; 4]; 4];
        dk[1][0] = -2.0 * u * grad_u;
        let mut out = [[0.0; 4]; 4];
        for mu in 0..4 {
            for nu in 0..4 {
                let conn: f64 = (0..4).map(|l| self.gamma[l][mu][nu] * k_lower[l]).sum();
                out[mu][nu] = dk[mu][nu] - conn;
            }
        }
        out
    }

    /// `|∇K|²_γ`, fully contracted with the inverse metric.
    pub fn killing_norm_sq(&self, u: f64, grad_u: f64) -> f64 {
        let nk = self.killing_gradient(u, grad_u);
        let inv: Vec<f64> = self.metric_diag.iter().map(|g| 1.0 / g).collect();
        let mut acc = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                acc += inv[mu] * inv[nu] * nk[mu][nu] * nk[mu][nu];
            }
        }
        acc
    }
}

/// Surface gravity from `κ² = -½ |∇K|²_γ`. The contraction does not depend on `u`, so the
/// horizon limit `u → 0` is taken by evaluating at `u = 1`.
pub fn killing_kappa_check(u_val: f64, grad_u: f64) -> f64 {
    let u = if u_val.abs() < f64::EPSILON { 1.0 } else { u_val };
    let table = StaticChristoffel::new(u, grad_u);
    (-0.5 * table.killing_norm_sq(u, grad_u)).max(0.0).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonReport {
    pub label: String,
    pub radius: f64,
    /// Raw `|Du|` on the horizon.
    pub grad_norm: f64,
    /// Normalised surface gravity (`|Du| / max u` when `Λ > 0`, raw otherwise).
    pub kappa: f64,
    /// Only assigned for `Λ > 0`, where the classification is defined.
    pub horizon_type: Option<HorizonType>,
}

pub fn horizon_report(model: &ModelData) -> Vec<HorizonReport> {
    let n = model.triple.n;
    let tol = default_classification_tol(n);
    model
        .horizons
        .iter()
        .map(|h| {
            let kappa = match model.normalization {
                Normalization::MaxU => h.grad_norm / model.extremum.value,
                _ => h.grad_norm,
            };
            let horizon_type =
                (model.lambda_sign > 0).then(|| classify(kappa, n, tol));
            HorizonReport {
                label: h.label.clone(),
                radius: h.radius,
                grad_norm: h.grad_norm,
                kappa,
                horizon_type,
            }
        })
        .collect()
}

/// `(m, k_+(m), k_-(m))` on `points` equally spaced masses covering `[0, m_max]`. The
/// endpoints take their limits: `k_-(0) = ∞` and `k_±(m_max) = √n`.
pub fn surface_gravity_curve(n: usize, points: usize) -> Result<Vec<[f64; 3]>> {
    if points < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 mass points, got {points}")));
    }
    let mm = m_max(n)?;
    let sqrt_n = (n as f64).sqrt();
    (0..points)
        .map(|i| {
            if i == 0 {
                return Ok([0.0, 1.0, f64::INFINITY]);
            }
            if i == points - 1 {
                return Ok([mm, sqrt_n, sqrt_n]);
            }
            let m = mm * i as f64 / (points - 1) as f64;
            Ok([m, k_plus(n, m)?, k_minus(n, m)?])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const SQRT3: f64 = 1.7320508075688772;

    #[test]
    fn surface_gravity_curve_endpoints() {
        let rows = surface_gravity_curve(3, 200).unwrap();
        assert_eq!(rows.len(), 200);
        assert_eq!(rows[0], [0.0, 1.0, f64::INFINITY]);
        assert_eq!(rows[199], [m_max(3).unwrap(), SQRT3, SQRT3]);
        for w in rows.windows(2) {
            assert!(w[1][0] > w[0][0]);
            assert!(w[1][1] > w[0][1] && w[1][2] < w[0][2]);
        }
        assert!(surface_gravity_curve(3, 1).is_err());
    }

    #[test]
    fn de_sitter_horizon() {
        let roots = horizon_radii(3, 0.0, 1, 1).unwrap();
        assert_eq!(roots.radii, vec![1.0]);
        assert!(!roots.degenerate);
    }

    #[test]
    fn sds_radii_match_oracle() {
        let roots = horizon_radii(3, 0.1, 1, 1).unwrap();
        assert_abs_diff_eq!(roots.radii[0], 0.20914884844131658, epsilon = 1e-14);
        assert_abs_diff_eq!(roots.radii[1], 0.87888506624997283, epsilon = 1e-14);
        assert!(!roots.degenerate);
    }

    #[test]
    fn extremal_mass_gives_double_root() {
        let mm = m_max(3).unwrap();
        let roots = horizon_radii(3, mm, 1, 1).unwrap();
        assert_eq!(roots.radii.len(), 1);
        assert_abs_diff_eq!(roots.radii[0], (1.0f64 / 3.0).sqrt(), epsilon = 1e-12);
        assert!(roots.degenerate);
        let mm4 = m_max(4).unwrap();
        let roots = horizon_radii(4, mm4, 1, 1).unwrap();
        assert_abs_diff_eq!(roots.radii[0], 0.5f64.sqrt(), epsilon = 1e-12);
        assert!(roots.degenerate);
    }

    #[test]
    fn supercritical_sds_has_no_root() {
        assert!(matches!(horizon_radii(3, 0.2, 1, 1), Err(Error::NoRealRoot(_))));
        assert!(matches!(horizon_radii(3, 0.0, 1, 0), Err(Error::NoRealRoot(_))));
    }

    #[test]
    fn single_horizons_for_other_families() {
        // Schwarzschild: r = 2m in n = 3.
        assert_abs_diff_eq!(horizon_radii(3, 0.5, 1, 0).unwrap().radii[0], 1.0, epsilon = 1e-14);
        // Schwarzschild-AdS n = 3, m = 1: r³ + r - 2 = 0 has r = 1.
        assert_abs_diff_eq!(horizon_radii(3, 1.0, 1, -1).unwrap().radii[0], 1.0, epsilon = 1e-14);
        // flat Kottler: r^n = 2m.
        let r = horizon_radii(3, 1.0, 0, -1).unwrap().radii[0];
        assert_abs_diff_eq!(r, 2f64.cbrt(), epsilon = 1e-14);
    }

    #[test]
    fn negative_mass_hyperbolic_has_two_roots() {
        let roots = horizon_radii(3, -0.1, -1, -1).unwrap();
        assert_eq!(roots.radii.len(), 2);
        for r in roots.radii {
            assert_abs_diff_eq!(r * r * r - r + 0.2, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn k_plus_anchors() {
        assert_eq!(k_plus(3, 0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(k_plus(3, 0.1).unwrap(), 1.2601705164785538, epsilon = 1e-12);
        let mm = m_max(3).unwrap();
        assert_abs_diff_eq!(k_plus(3, 0.999 * mm).unwrap(), 1.7029194229252689, epsilon = 1e-9);
        assert!(k_plus(3, mm).is_err());
        assert!(k_plus(3, -0.01).is_err());
    }

    #[test]
    fn k_minus_anchors() {
        let mm = m_max(3).unwrap();
        assert_abs_diff_eq!(k_minus(3, mm).unwrap(), SQRT3, epsilon = 1e-12);
        assert_abs_diff_eq!(k_minus(3, 0.1).unwrap(), 3.4923729816373391, epsilon = 1e-12);
        let small = k_minus(3, 1e-6).unwrap();
        assert!(small > 50.0);
        assert_abs_diff_eq!(small / 250037.50843560933, 1.0, epsilon = 1e-9);
        assert!(k_minus(3, 1e-7).unwrap() > small);
        assert!(k_minus(3, 0.0).is_err());
    }

    #[test]
    fn inversion_anchors() {
        assert_eq!(invert_k_plus(3, 1.0).unwrap(), 0.0);
        assert_eq!(invert_k_plus(3, 1.0 - 1e-13).unwrap(), 0.0);
        assert!(invert_k_plus(3, 0.99).is_err());
        assert!(invert_k_plus(3, SQRT3).is_err());
        assert_eq!(invert_k_minus(3, 3f64.sqrt()).unwrap(), m_max(3).unwrap());
        assert!(invert_k_minus(3, 1.5).is_err());
        let m = invert_k_plus(3, k_plus(3, 0.07).unwrap()).unwrap();
        assert_abs_diff_eq!(m, 0.07, epsilon = 1e-10);
    }

    #[test]
    fn classification() {
        let tol = default_classification_tol(3);
        assert_eq!(classify(1.0, 3, tol), HorizonType::Cosmological);
        assert_eq!(classify(3f64.sqrt(), 3, tol), HorizonType::Cylindrical);
        assert_eq!(classify(3.495, 3, tol), HorizonType::BlackHole);
    }

    #[test]
    fn virtual_mass_examples() {
        let v = virtual_mass(&[1.0], 3).unwrap();
        assert_eq!((v.mass, v.region_kind), (0.0, RegionKind::Outer));
        let v = virtual_mass(&[k_plus(3, 0.1).unwrap(), 1.05], 3).unwrap();
        assert_abs_diff_eq!(v.mass, 0.1, epsilon = 1e-12);
        assert_eq!(v.region_kind, RegionKind::Outer);
        let v = virtual_mass(&[3.495], 3).unwrap();
        assert_eq!(v.region_kind, RegionKind::Inner);
        assert_abs_diff_eq!(v.mass, 0.1, epsilon = 1e-3);
        let v = virtual_mass(&[3f64.sqrt(), 1.2], 3).unwrap();
        assert_eq!(v.region_kind, RegionKind::Cylindrical);
        assert!(v.extrapolated);
        assert_eq!(v.mass, m_max(3).unwrap());
        assert!(matches!(virtual_mass(&[0.9], 3), Err(Error::SubDeSitterSurfaceGravity(_))));
        assert!(virtual_mass(&[], 3).is_err());
        assert!(virtual_mass(&[-1.0, 2.0], 3).is_err());
    }

    #[test]
    fn killing_identity() {
        assert_abs_diff_eq!(killing_kappa_check(0.0, 1.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(killing_kappa_check(0.0, SQRT3), SQRT3, epsilon = 1e-15);
        assert_abs_diff_eq!(
            killing_kappa_check(0.0, 0.74942499856800708),
            0.74942499856800708,
            epsilon = 1e-15
        );
        let t = StaticChristoffel::new(0.3, 0.8);
        assert_abs_diff_eq!(t.killing_norm_sq(0.3, 0.8), -2.0 * 0.64, epsilon = 1e-14);
    }

    proptest! {
        #[test]
        fn k_plus_round_trip(frac in 0.001f64..0.999) {
            let m = frac * m_max(3).unwrap();
            let back = invert_k_plus(3, k_plus(3, m).unwrap()).unwrap();
            prop_assert!((back - m).abs() < 1e-10);
        }

        #[test]
        fn k_minus_round_trip(frac in 0.001f64..0.999, n in 3usize..6) {
            let m = frac * m_max(n).unwrap();
            let back = invert_k_minus(n, k_minus(n, m).unwrap()).unwrap();
            prop_assert!((back - m).abs() < 1e-10);
        }

        #[test]
        fn two_routes_to_surface_gravity_agree(frac in 0.01f64..0.99, n in 3usize..6) {
            let m = frac * m_max(n).unwrap();
            prop_assert!((k_plus(n, m).unwrap() - k_plus_from_slope(n, m).unwrap()).abs() < 1e-12);
            let (a, b) = (k_minus(n, m).unwrap(), k_minus_from_slope(n, m).unwrap());
            prop_assert!((a - b).abs() < 1e-12 * a.max(1.0));
        }

        #[test]
        fn branches_classify_consistently(frac in 0.001f64..0.999, n in 3usize..6) {
            let m = frac * m_max(n).unwrap();
            let tol = default_classification_tol(n);
            prop_assert_eq!(classify(k_plus(n, m).unwrap(), n, tol), HorizonType::Cosmological);
            prop_assert_eq!(classify(k_minus(n, m).unwrap(), n, tol), HorizonType::BlackHole);
        }
    }
}
