//! Pointwise identities and level-set functionals evaluated on radial geometries and models.
//!
//! All level sets of a rotationally symmetric potential are cross-sections, so every flux
//! integral reduces to `area × integrand`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::catalog::{ModelData, ModelKind};
use crate::error::{Error, Result};
use crate::geometry::{
    finite_difference_curvature, residual_from_sample, Chart, RadialGeometry, EPS_DOM,
};
use crate::horizon::{horizon_radii, horizon_report, sds_radii, HorizonType};
use crate::jet::Jet6;

/// Residual and quadratic term of the Shen identity at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShenPoint {
    pub residual: f64,
    /// `|D²u|² - (Δu)²/n`.
    pub quad_term: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShenSummary {
    pub residual_max: f64,
    pub quad_term_min: f64,
    pub quad_term_max_abs: f64,
}

fn check_potential(geom: &RadialGeometry, x: f64) -> Result<Jet6> {
    geom.check_point(x)?;
    let u = geom.jets(x).u;
    if !(u.value() > EPS_DOM) {
        return Err(Error::InvalidParameter(format!(
            "potential {} at {x} is within {EPS_DOM} of zero",
            u.value()
        )));
    }
    Ok(u)
}

/// `div[(1/u)(D|Du|² - (2/n)Δu Du)] - (2/u)[|D²u|² - (Δu)²/n]` at `x`.
pub fn shen_point(geom: &RadialGeometry, x: f64) -> Result<ShenPoint> {
    let u = check_potential(geom, x)?;
    let j = geom.jets(x);
    let n = geom.n;
    let nf = n as f64;
    let grad_sq = j.grad_norm_sq(&u);
    let lap = j.laplacian(&u, n);
    let flux = (j.normal(&grad_sq) - lap * j.normal(&u) * (2.0 / nf)) / u;
    let lhs = j.divergence(&flux, n).value();

    let (hr, ht) = j.hessian(&u);
    let (hr, ht, lap) = (hr.value(), ht.value(), lap.value());
    let hess_sq = hr * hr + (nf - 1.0) * ht * ht;
    let quad_term = hess_sq - lap * lap / nf;
    let rhs = 2.0 / u.value() * quad_term;
    Ok(ShenPoint { residual: lhs - rhs, quad_term })
}

pub fn shen_residual(geom: &RadialGeometry, grid: &[f64]) -> Result<ShenSummary> {
    let mut out = ShenSummary {
        residual_max: 0.0,
        quad_term_min: f64::INFINITY,
        quad_term_max_abs: 0.0,
    };
    for &x in grid {
        let p = shen_point(geom, x)?;
        out.residual_max = out.residual_max.max(p.residual.abs());
        out.quad_term_min = out.quad_term_min.min(p.quad_term);
        out.quad_term_max_abs = out.quad_term_max_abs.max(p.quad_term.abs());
    }
    Ok(out)
}

/// `Δ|Du|² - 2|D²u|² - (1/u)⟨D|Du|², Du⟩` at `x`.
pub fn bochner_check(geom: &RadialGeometry, x: f64) -> Result<f64> {
    let u = check_potential(geom, x)?;
    let j = geom.jets(x);
    let n = geom.n;
    let grad_sq = j.grad_norm_sq(&u);
    let lap_grad = j.laplacian(&grad_sq, n).value();
    let (hr, ht) = j.hessian(&u);
    let hess_sq = hr.value().powi(2) + (n as f64 - 1.0) * ht.value().powi(2);
    let cross = j.normal(&grad_sq).value() * j.normal(&u).value() / u.value();
    Ok(lap_grad - 2.0 * hess_sq - cross)
}

/// Residual of `div[Du / (A - u²)^{n/2}] = -n u (A - u² - |Du|²) / (A - u²)^{n/2+1}` when
/// `Λ > 0`, or of `div[Du / (u² - A)^{n/2}] = n u (u² - A - |Du|²) / (u² - A)^{n/2+1}` when
/// `Λ < 0`. Both sides blow up where the level factor vanishes, so the difference is
/// divided by `max(1, |rhs|)`.
pub fn divergence_identity_residual(geom: &RadialGeometry, reference_sq: f64, x: f64) -> Result<f64> {
    geom.check_point(x)?;
    let sign = match geom.lambda_sign {
        1 => 1.0,
        -1 => -1.0,
        _ => {
            return Err(Error::UnsupportedKind {
                operation: "divergence identity",
                kind: "lambda = 0".into(),
            })
        }
    };
    let j = geom.jets(x);
    let n = geom.n;
    let nf = n as f64;
    // base = A - u² (Λ > 0) or u² - A (Λ < 0).
    let base = (j.u * j.u - reference_sq) * (-sign);
    if !(base.value() > EPS_DOM) {
        return Err(Error::InvalidParameter(format!(
            "level factor {} is not positive at {x}",
            base.value()
        )));
    }
    let field = j.normal(&j.u) * base.powf(-nf / 2.0);
    let lhs = j.divergence(&field, n).value();
    let b = base.value();
    let u = j.u.value();
    let grad_sq = j.grad_norm_sq(&j.u).value();
    let rhs = -sign * nf * u * (b - grad_sq) / b.powf(nf / 2.0 + 1.0);
    Ok((lhs - rhs) / rhs.abs().max(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Between the inner boundary and the extremum locus.
    Inner,
    /// Between the extremum locus and the outer end.
    Outer,
}

/// One level set `{u = t}` with the data entering `U(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelSetSample {
    pub t: f64,
    /// Coordinate of the level set (model coordinate when sampled through a model).
    pub radius: f64,
    pub area: f64,
    pub grad_u: f64,
    pub value: f64,
}

/// Solves `u(x) = t` on the open interval `(a, b)`, where `u` is monotone.
fn solve_level(geom: &RadialGeometry, interval: (f64, f64), t: f64) -> Result<f64> {
    let (a, b) = interval;
    let g = |x: f64| geom.potential_value(x) - t;
    let (mut lo, mut hi) = (a, b);
    if !hi.is_finite() {
        let mut step = 1.0_f64.max(lo.abs());
        hi = lo + step;
        while g(hi).signum() == g(lo).signum() && hi < 1e12 {
            step *= 2.0;
            hi = lo + step;
        }
    }
    if !lo.is_finite() {
        let mut step = 1.0_f64.max(hi.abs());
        lo = hi - step;
        while g(lo).signum() == g(hi).signum() && lo > -1e12 {
            step *= 2.0;
            lo = hi - step;
        }
    }
    let (ga, gb) = (g(lo), g(hi));
    if ga.signum() == gb.signum() {
        let (ua, ub) = (ga + t, gb + t);
        return Err(Error::LevelOutOfRange { t, lo: ua.min(ub), hi: ua.max(ub) });
    }
    crate::roots::bisect(g, lo, hi, 0.0, 1e-15)
}

/// `U(t)` on a branch `interval` (chart coordinates) of a radial geometry, with `A` the
/// reference square (`u_max²` for `Λ > 0`, `u_min²` or its replacement for `Λ < 0`).
pub fn u_function_on(
    geom: &RadialGeometry,
    interval: (f64, f64),
    reference_sq: f64,
    t_grid: &[f64],
) -> Result<Vec<LevelSetSample>> {
    let nf = geom.n as f64;
    let sign = geom.lambda_sign as f64;
    if sign == 0.0 {
        return Err(Error::UnsupportedKind {
            operation: "level-set functional",
            kind: "lambda = 0".into(),
        });
    }
    t_grid
        .iter()
        .map(|&t| {
            let factor = sign * (reference_sq - t * t);
            if !(factor > 0.0 && t > 0.0) {
                let bound = reference_sq.max(0.0).sqrt();
                let (lo, hi) = if sign > 0.0 { (0.0, bound) } else { (bound, f64::INFINITY) };
                return Err(Error::LevelOutOfRange { t, lo, hi });
            }
            let x = solve_level(geom, interval, t)?;
            let grad_u = geom.grad_norm_sq(x)?.sqrt();
            let area = geom.level_area(x);
            Ok(LevelSetSample {
                t,
                radius: x,
                area,
                grad_u,
                value: factor.powf(-nf / 2.0) * area * grad_u,
            })
        })
        .collect()
}

/// Branch interval in model coordinates.
pub fn branch_interval(model: &ModelData, branch: Branch) -> Result<(f64, f64)> {
    if model.lambda_sign == 0 {
        return Err(Error::UnsupportedKind {
            operation: "level-set functional",
            kind: model.kind().to_string(),
        });
    }
    let (lo, hi) = model.domain();
    let (a, b) = match (model.extremum_locus, branch) {
        (Some(l), Branch::Inner) => (lo, l),
        (Some(l), Branch::Outer) => (lo.max(l), hi),
        (None, Branch::Outer) => (lo, hi),
        (None, Branch::Inner) => (lo, lo),
    };
    if a >= b {
        return Err(Error::EmptyBranch(match branch {
            Branch::Inner => "inner",
            Branch::Outer => "outer",
        }));
    }
    Ok((a, b))
}

/// `U(t)` along a branch of a catalog model. Radii in the samples are model coordinates.
pub fn u_function(model: &ModelData, branch: Branch, t_grid: &[f64]) -> Result<Vec<LevelSetSample>> {
    let (a, b) = branch_interval(model, branch)?;
    let reference = model.reference_sq.ok_or(Error::UnsupportedKind {
        operation: "level-set functional",
        kind: model.kind().to_string(),
    })?;
    let interval = (model.to_chart(a), model.to_chart(b));
    let mut samples = u_function_on(&model.radial, interval, reference, t_grid)?;
    for s in &mut samples {
        s.radius = model.from_chart(s.radius);
    }
    Ok(samples)
}

/// `count` potential levels inside the admissible range of a branch.
pub fn default_levels(model: &ModelData, count: usize) -> Result<Vec<f64>> {
    let reference = model.reference_sq.ok_or(Error::UnsupportedKind {
        operation: "level-set functional",
        kind: model.kind().to_string(),
    })?;
    let frac = |i: usize| if count == 1 { 0.5 } else { i as f64 / (count - 1) as f64 };
    Ok(if model.lambda_sign > 0 {
        let top = reference.sqrt();
        (0..count).map(|i| top * (0.02 + 0.96 * frac(i))).collect()
    } else {
        let base = reference.max(0.0).sqrt().max(model.extremum.value);
        (0..count).map(|i| base + 0.05 + 4.95 * frac(i)).collect()
    })
}

/// Relative spread `(max - min) / |mean|` of the functional values.
pub fn relative_spread(samples: &[LevelSetSample]) -> f64 {
    let (mut lo, mut hi, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
    for s in samples {
        lo = lo.min(s.value);
        hi = hi.max(s.value);
        sum += s.value;
    }
    (hi - lo) / (sum / samples.len() as f64).abs()
}

/// Minimum and maximum of the sign-appropriate gradient deficit over the grid.
pub fn gradient_deficit_scan(model: &ModelData, grid: &[f64]) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in grid {
        let d = model.deficit(x)?;
        lo = lo.min(d);
        hi = hi.max(d);
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BghIntegral {
    pub label: String,
    pub value: f64,
    /// False when `Λ ≤ 0`, where the inequality `value ≥ 0` is not asserted.
    pub applicable: bool,
}

/// `∫ |Du| [R^Σ - (n-1)(n-2)] dσ` over one horizon.
pub fn bgh_integral(model: &ModelData, label: &str) -> Result<BghIntegral> {
    let h = model
        .horizons
        .iter()
        .find(|h| h.label == label)
        .ok_or_else(|| Error::UnknownHorizon(label.to_owned()))?;
    let n = model.n() as f64;
    let k = model.radial.cross.k();
    let scalar = (n - 1.0) * (n - 2.0) * k / (h.radius * h.radius);
    let area = model.radial.cross.volume * h.radius.powi(model.n() as i32 - 1);
    Ok(BghIntegral {
        label: label.to_owned(),
        value: h.grad_norm * (scalar - (n - 1.0) * (n - 2.0)) * area,
        applicable: model.lambda_sign > 0,
    })
}

/// A one-sided comparison `area ≤ bound` (or `≥` where stated) with its signed slack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaCheck {
    pub label: String,
    pub area: f64,
    pub bound: f64,
    /// Positive when the inequality holds strictly.
    pub slack: f64,
    pub satisfied: bool,
}

impl AreaCheck {
    fn upper(label: String, area: f64, bound: f64) -> Self {
        let slack = bound - area;
        Self { label, area, bound, slack, satisfied: slack >= -1e-12 * bound.abs().max(1.0) }
    }

    fn lower(label: String, area: f64, bound: f64) -> Self {
        let slack = area - bound;
        Self { label, area, bound, slack, satisfied: slack >= -1e-12 * bound.abs().max(1.0) }
    }
}

/// Horizon areas against `4π r_±²(μ)` by horizon type, and cosmological horizons against `4π`.
pub fn area_bounds(model: &ModelData, mu: f64) -> Result<Vec<AreaCheck>> {
    if model.n() != 3 {
        return Err(Error::InvalidParameter("area bounds are stated for n = 3".into()));
    }
    if model.lambda_sign <= 0 {
        return Err(Error::UnsupportedKind {
            operation: "area bounds",
            kind: model.kind().to_string(),
        });
    }
    let mm = crate::catalog::m_max(3)?;
    if !(0.0..=mm).contains(&mu) {
        return Err(Error::InvalidParameter(format!("mu must lie in [0, {mm}], got {mu}")));
    }
    let (r_minus, r_plus) = if mu == mm {
        let r = (1.0f64 / 3.0).sqrt();
        (r, r)
    } else {
        let (a, b) = sds_radii(3, mu)?;
        (a.unwrap_or(0.0), b)
    };
    let mut out = Vec::new();
    for (seed, rep) in model.horizons.iter().zip(horizon_report(model)) {
        let area = model.radial.cross.volume * seed.radius * seed.radius;
        match rep.horizon_type {
            Some(HorizonType::BlackHole) => {
                out.push(AreaCheck::upper(rep.label.clone(), area, 4.0 * PI * r_minus * r_minus))
            }
            _ => {
                out.push(AreaCheck::upper(rep.label.clone(), area, 4.0 * PI * r_plus * r_plus));
                if rep.horizon_type == Some(HorizonType::Cosmological) {
                    out.push(AreaCheck::upper(format!("{}:unit", rep.label), area, 4.0 * PI));
                }
            }
        }
    }
    Ok(out)
}

fn require_conformal(model: &ModelData, operation: &'static str) -> Result<()> {
    use ModelKind::*;
    match model.kind() {
        AntiDeSitter | SchwarzschildAdS | KottlerFlat | KottlerHyperbolic => Ok(()),
        other => Err(Error::UnsupportedKind { operation, kind: other.to_string() }),
    }
}

/// Hawking mass of the level set `{u = t}` (n = 3, conformally compact models).
pub fn hawking_mass(model: &ModelData, t: f64) -> Result<f64> {
    require_conformal(model, "hawking mass")?;
    if model.n() != 3 {
        return Err(Error::InvalidParameter("hawking mass needs n = 3".into()));
    }
    let genus = model.radial.cross.surface_genus().ok_or_else(|| {
        Error::InvalidParameter("hawking mass needs a cross-section of known genus".into())
    })? as f64;
    let (lo, hi) = model.domain();
    let u_lo = model.u(lo);
    if !(t > u_lo && t.is_finite()) {
        return Err(Error::LevelOutOfRange { t, lo: u_lo, hi: f64::INFINITY });
    }
    let r = solve_level(&model.radial, (lo, hi), t)?;
    let w = match &model.radial.chart {
        Chart::Areal(w) => w.value(r),
        Chart::Geodesic(_) => unreachable!("conformally compact models use the areal chart"),
    };
    let area = model.radial.cross.volume * r * r;
    let mean_curv_sq = 4.0 * w / (r * r);
    let willmore = (mean_curv_sq - 4.0) * area;
    Ok((area / (16.0 * PI)).sqrt() * (1.0 - genus - willmore / (16.0 * PI)))
}

/// Largest positive root of `1 - x² + 2μ/x = 0`.
pub fn hyperbolic_horizon_radius(mu: f64) -> Result<f64> {
    let roots = horizon_radii(3, mu, -1, -1)?;
    Ok(*roots.radii.last().expect("nonempty root set"))
}

/// Horizon area against `(genus - 1)/(genus_inf - 1) 4π r(μ)²` on a hyperbolic Kottler model.
pub fn chrusciel_simon_area(model: &ModelData, mu: f64, genus_inf: u32) -> Result<AreaCheck> {
    if model.kind() != ModelKind::KottlerHyperbolic || model.n() != 3 {
        return Err(Error::UnsupportedKind {
            operation: "hyperbolic area bound",
            kind: model.kind().to_string(),
        });
    }
    let mm = crate::catalog::m_max(3)?;
    if !(mu <= 0.0 && mu > -mm) {
        return Err(Error::InvalidParameter(format!("mu must lie in ({}, 0], got {mu}", -mm)));
    }
    if genus_inf < 2 {
        return Err(Error::InvalidParameter(format!(
            "genus at infinity must be >= 2, got {genus_inf}"
        )));
    }
    let genus = model.radial.cross.genus.ok_or_else(|| {
        Error::InvalidParameter("the hyperbolic model needs a genus".into())
    })?;
    let h = &model.horizons[0];
    let lhs = model.radial.cross.volume * h.radius * h.radius;
    let r_mu = hyperbolic_horizon_radius(mu)?;
    let rhs = (genus as f64 - 1.0) / (genus_inf as f64 - 1.0) * 4.0 * PI * r_mu * r_mu;
    Ok(AreaCheck::lower(h.label.clone(), lhs, rhs))
}

/// `u² - k - |Du|²`, which tends to zero at conformal infinity.
pub fn conformal_deficit(model: &ModelData, r: f64) -> Result<f64> {
    require_conformal(model, "conformal deficit")?;
    Ok(model.u_sq(r) - model.radial.cross.k() - model.grad_norm_sq(r)?)
}

/// Which checks run in [`run_report`] and how densely.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub grid_points: usize,
    pub level_points: usize,
    pub fd_step: f64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self { grid_points: 100, level_points: 50, fd_step: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub kind: ModelKind,
    pub n: usize,
    pub mass: Option<f64>,
    pub static_residual_max: f64,
    pub fd_residual_max: f64,
    pub shen_residual_max: f64,
    pub quad_term_min: f64,
    pub quad_term_max_abs: f64,
    pub bochner_residual_max: f64,
    pub divergence_residual_max: Option<f64>,
    pub u_samples: Vec<(f64, f64)>,
    pub u_spread: Option<f64>,
    pub deficit_min: Option<f64>,
    pub deficit_max: Option<f64>,
    pub bgh_integrals: Vec<BghIntegral>,
    pub area_checks: Vec<AreaCheck>,
    pub notes: Vec<String>,
}

/// Runs every applicable check on one model.
pub fn run_report(model: &ModelData, config: &ReportConfig) -> Result<DiagnosticsReport> {
    let grid = model.interior_grid(config.grid_points);
    let chart_grid: Vec<f64> = grid.iter().map(|x| model.to_chart(*x)).collect();
    let mut notes = Vec::new();

    let mut static_max: f64 = 0.0;
    let mut fd_max: f64 = 0.0;
    for (&x, &c) in grid.iter().zip(&chart_grid) {
        static_max = static_max.max(model.static_residual(x)?.max_abs());
        let fd = finite_difference_curvature(&model.radial, c, config.fd_step)?;
        let res = residual_from_sample(&fd, model.u(x), model.n(), model.lambda_sign);
        fd_max = fd_max.max(res.max_abs());
    }

    let shen = shen_residual(&model.radial, &chart_grid)?;
    let mut bochner_max: f64 = 0.0;
    for &c in &chart_grid {
        bochner_max = bochner_max.max(bochner_check(&model.radial, c)?.abs());
    }

    let divergence_residual_max = match model.reference_sq {
        Some(a) if model.lambda_sign != 0 => {
            let mut worst: f64 = 0.0;
            let mut used = 0;
            for &c in &chart_grid {
                match divergence_identity_residual(&model.radial, a, c) {
                    Ok(v) => {
                        worst = worst.max(v.abs());
                        used += 1;
                    }
                    Err(Error::InvalidParameter(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            if used < chart_grid.len() {
                notes.push(format!(
                    "divergence identity skipped at {} points where the level factor vanishes",
                    chart_grid.len() - used
                ));
            }
            (used > 0).then_some(worst)
        }
        _ => None,
    };

    let (u_samples, u_spread) = if model.lambda_sign != 0 {
        let levels = default_levels(model, config.level_points)?;
        match u_function(model, Branch::Outer, &levels) {
            Ok(s) => {
                let spread = relative_spread(&s);
                (s.iter().map(|p| (p.t, p.value)).collect(), Some(spread))
            }
            Err(e) => {
                notes.push(format!("U(t) not sampled: {e}"));
                (Vec::new(), None)
            }
        }
    } else {
        notes.push("lambda = 0: level-set functional and deficit not defined".into());
        (Vec::new(), None)
    };

    let (deficit_min, deficit_max) = match gradient_deficit_scan(model, &grid) {
        Ok((a, b)) => (Some(a), Some(b)),
        Err(_) => (None, None),
    };

    let bgh_integrals = model
        .horizons
        .iter()
        .map(|h| bgh_integral(model, &h.label))
        .collect::<Result<Vec<_>>>()?;

    let area_checks = if model.n() == 3 && model.lambda_sign > 0 {
        let mu = model.triple.mass.unwrap_or(match model.kind() {
            ModelKind::Nariai => crate::catalog::m_max(3)?,
            _ => 0.0,
        });
        area_bounds(model, mu)?
    } else {
        Vec::new()
    };

    Ok(DiagnosticsReport {
        kind: model.kind(),
        n: model.n(),
        mass: model.triple.mass,
        static_residual_max: static_max,
        fd_residual_max: fd_max,
        shen_residual_max: shen.residual_max,
        quad_term_min: shen.quad_term_min,
        quad_term_max_abs: shen.quad_term_max_abs,
        bochner_residual_max: bochner_max,
        divergence_residual_max,
        u_samples,
        u_spread,
        deficit_min,
        deficit_max,
        bgh_integrals,
        area_checks,
        notes,
    })
}

/// An invariant that a catalog report failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Breach {
    pub kind: ModelKind,
    pub check: String,
    pub value: f64,
    pub limit: f64,
}

/// Checks a catalog report against the invariants that hold on exact solutions.
pub fn verify(report: &DiagnosticsReport) -> Vec<Breach> {
    let mut out = Vec::new();
    let mut upper = |check: &str, value: f64, limit: f64| {
        if !(value < limit) {
            out.push(Breach { kind: report.kind, check: check.into(), value, limit });
        }
    };
    upper("static_residual", report.static_residual_max, 1e-10);
    upper("fd_residual", report.fd_residual_max, 1e-5);
    upper("shen_residual", report.shen_residual_max, 1e-9);
    upper("quad_term_negative", -report.quad_term_min, 1e-12);
    upper("bochner_residual", report.bochner_residual_max, 1e-9);
    if let Some(d) = report.divergence_residual_max {
        upper("divergence_identity", d, 1e-9);
    }
    let space_form = matches!(report.kind, ModelKind::DeSitter | ModelKind::AntiDeSitter);
    if space_form {
        upper("quad_term_space_form", report.quad_term_max_abs, 1e-12);
        if let Some(s) = report.u_spread {
            upper("u_function_spread", s, 1e-9);
        }
    }
    if let (Some(lo), Some(hi)) = (report.deficit_min, report.deficit_max) {
        let size = lo.abs().max(hi.abs());
        if space_form {
            upper("deficit_rigidity", size, 1e-12);
        } else {
            upper("deficit_nonzero", -size, -1e-6);
        }
    }
    for b in report.bgh_integrals.iter().filter(|b| b.applicable) {
        upper(&format!("bgh_{}", b.label), -b.value, 1e-12);
    }
    for a in &report.area_checks {
        // The catalog horizons attain their own bounds; the unit bound is strict for m > 0.
        if !a.satisfied {
            out.push(Breach {
                kind: report.kind,
                check: format!("area_{}", a.label),
                value: a.area,
                limit: a.bound,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, ModelTriple};
    use crate::geometry::{CrossSection, Potential, RadialFunction};
    use approx::assert_abs_diff_eq;

    fn model(kind: ModelKind, n: usize, m: Option<f64>) -> ModelData {
        let mut t = ModelTriple::new(kind, n);
        t.mass = m;
        build(t).unwrap()
    }

    fn perturbed() -> RadialGeometry {
        RadialGeometry::areal(
            3,
            CrossSection::unit_sphere(3),
            RadialFunction::PowerSum(vec![(1.0, 0.0), (-1.0, 2.0), (-0.01, 3.0)]),
            Potential::SqrtProfile,
            (0.0, 0.99),
            1,
        )
        .unwrap()
    }

    #[test]
    fn shen_on_de_sitter_and_sds() {
        let ds = model(ModelKind::DeSitter, 3, None);
        let s = shen_residual(&ds.radial, &ds.interior_grid(50)).unwrap();
        assert!(s.residual_max < 1e-10);
        assert!(s.quad_term_max_abs < 1e-12);
        let sds = model(ModelKind::SchwarzschildDeSitter, 3, Some(0.1));
        let s = shen_residual(&sds.radial, &sds.interior_grid(50)).unwrap();
        assert!(s.residual_max < 1e-9, "{s:?}");
        assert!(s.quad_term_min > 1e-6, "{s:?}");
    }

    #[test]
    fn shen_quad_term_matches_hessian_split() {
        let sds = model(ModelKind::SchwarzschildDeSitter, 3, Some(0.1));
        let c = crate::geometry::curvature_at(&sds.radial, 0.5).unwrap();
        let expected = 2.0 * (c.hess_radial - c.hess_tangential).powi(2) / 3.0;
        assert_abs_diff_eq!(shen_point(&sds.radial, 0.5).unwrap().quad_term, expected, epsilon = 1e-12);
    }

    #[test]
    fn shen_detects_off_shell_profiles() {
        let g = perturbed();
        let grid: Vec<f64> = (1..10).map(|i| 0.09 * i as f64).collect();
        assert!(shen_residual(&g, &grid).unwrap().residual_max > 1e-3);
        assert!(bochner_check(&g, 0.5).unwrap().abs() > 0.0);
    }

    #[test]
    fn shen_rejects_zero_potential() {
        let ds = model(ModelKind::DeSitter, 3, None);
        assert!(shen_point(&ds.radial, 1.0).is_err());
    }

    #[test]
    fn bochner_examples() {
        let ds = model(ModelKind::DeSitter, 3, None);
        assert!(bochner_check(&ds.radial, 0.5).unwrap().abs() < 1e-10);
        let sads = model(ModelKind::SchwarzschildAdS, 3, Some(1.0));
        assert!(bochner_check(&sads.radial, 3.0).unwrap().abs() < 1e-9);
    }

    #[test]
    fn u_function_constant_on_space_forms() {
        let ds = model(ModelKind::DeSitter, 3, None);
        let levels: Vec<f64> = (1..10).map(|i| 0.1 * i as f64).collect();
        let samples = u_function(&ds, Branch::Outer, &levels).unwrap();
        for s in &samples {
            assert_abs_diff_eq!(s.value, 4.0 * PI, epsilon = 1e-12);
        }
        assert!(matches!(u_function(&ds, Branch::Inner, &levels), Err(Error::EmptyBranch(_))));
        let ads = model(ModelKind::AntiDeSitter, 3, None);
        let levels = default_levels(&ads, 50).unwrap();
        let samples = u_function(&ads, Branch::Outer, &levels).unwrap();
        assert!(relative_spread(&samples) < 1e-9);
        assert!(u_function(&ads, Branch::Outer, &[0.5]).is_err());
    }

    #[test]
    fn u_function_on_sds_departs_from_de_sitter() {
        let sds = model(ModelKind::SchwarzschildDeSitter, 3, Some(0.1));
        let levels = default_levels(&sds, 50).unwrap();
        let samples = u_function(&sds, Branch::Outer, &levels).unwrap();
        assert!(relative_spread(&samples) > 1e-3);
        let inner = u_function(&sds, Branch::Inner, &levels).unwrap();
        assert!(inner.iter().all(|s| s.radius < sds.extremum_locus.unwrap()));
    }

    #[test]
    fn deficit_scans() {
        let ds = model(ModelKind::DeSitter, 3, None);
        let (lo, hi) = gradient_deficit_scan(&ds, &ds.interior_grid(20)).unwrap();
        assert!(lo.abs() < 1e-12 && hi.abs() < 1e-12);
        let sds = model(ModelKind::SchwarzschildDeSitter, 3, Some(0.1));
        let rp = sds.horizons[1].radius;
        let (lo, _) = gradient_deficit_scan(&sds, &[rp]).unwrap();
        assert!(lo < -0.2);
        let an = model(ModelKind::AntiNariai, 3, None);
        assert!(gradient_deficit_scan(&an, &[5.0]).unwrap().0 < -100.0);
    }

    #[test]
    fn bgh_examples() {
        let ds = model(ModelKind::DeSitter, 3, None);
        assert_eq!(bgh_integral(&ds, "outer").unwrap().value, 0.0);
        let sds = model(ModelKind::SchwarzschildDeSitter, 3, Some(0.1));
        let v = bgh_integral(&sds, "outer").unwrap().value;
        assert_abs_diff_eq!(v, 4.2861359881122957, epsilon = 1e-11);
        let kh = model(ModelKind::KottlerHyperbolic, 3, Some(0.3));
        let b = bgh_integral(&kh, "horizon").unwrap();
        assert!(b.value < 0.0 && !b.applicable);
        assert!(matches!(bgh_integral(&ds, "inner"), Err(Error::UnknownHorizon(_))));
    }

    #[test]
    fn area_bound_examples() {
        let ds = model(ModelKind::DeSitter, 3, None);
        let checks = area_bounds(&ds, 0.0).unwrap();
        assert!(checks.iter().all(|c| c.satisfied && c.area == 4.0 * PI && c.slack == 0.0));
        let sds = model(ModelKind::SchwarzschildDeSitter, 3, Some(0.1));
        for c in area_bounds(&sds, 0.1).unwrap().iter().filter(|c| !c.label.ends_with(":unit")) {
            assert!(c.slack.abs() < 1e-10 * c.bound, "{c:?}");
        }
        let checks = area_bounds(&sds, 0.05).unwrap();
        let inner = checks.iter().find(|c| c.label == "inner").unwrap();
        assert!(!inner.satisfied);
        assert!(area_bounds(&model(ModelKind::DeSitter, 4, None), 0.0).is_err());
    }

    #[test]
    fn hawking_mass_is_constant_on_hyperbolic_kottler() {
        for m in [-0.1, 0.3] {
            let t = ModelTriple::new(ModelKind::KottlerHyperbolic, 3).with_mass(m).with_genus(2);
            let d = build(t).unwrap();
            let a = hawking_mass(&d, 1.5).unwrap();
            let b = hawking_mass(&d, 3.0).unwrap();
            assert_abs_diff_eq!(a, m, epsilon = 1e-10);
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
        let t = ModelTriple::new(ModelKind::KottlerHyperbolic, 3).with_mass(0.3).with_genus(3);
        let d = build(t).unwrap();
        assert_abs_diff_eq!(hawking_mass(&d, 2.0).unwrap(), 0.3 * 2f64.powf(1.5), epsilon = 1e-10);
        let sads = model(ModelKind::SchwarzschildAdS, 3, Some(1.0));
        assert_abs_diff_eq!(hawking_mass(&sads, 2.0).unwrap(), 1.0, epsilon = 1e-10);
        let sds = model(ModelKind::SchwarzschildDeSitter, 3, Some(0.1));
        assert!(hawking_mass(&sds, 0.3).is_err());
    }

    #[test]
    fn chrusciel_simon_examples() {
        let t = ModelTriple::new(ModelKind::KottlerHyperbolic, 3).with_mass(-0.1).with_genus(2);
        let d = build(t).unwrap();
        let c = chrusciel_simon_area(&d, -0.1, 2).unwrap();
        assert!((c.area - c.bound).abs() < 1e-10 * c.bound);
        let t = ModelTriple::new(ModelKind::KottlerHyperbolic, 3).with_mass(-0.1).with_genus(4);
        let d4 = build(t).unwrap();
        let c4 = chrusciel_simon_area(&d4, -0.1, 2).unwrap();
        assert!(c4.area > c.area && c4.satisfied);
        assert_abs_diff_eq!(c4.area / c4.bound, 1.0, epsilon = 1e-10);
        assert!(chrusciel_simon_area(&d, 0.05, 2).is_err());
    }

    #[test]
    fn conformal_deficit_decay() {
        let sads = model(ModelKind::SchwarzschildAdS, 3, Some(1.0));
        let a = conformal_deficit(&sads, 100.0).unwrap();
        let expected = -4.0 / 100.0 - 1.0 / 1e8;
        assert_abs_diff_eq!(a, expected, epsilon = 1e-9);
        let b = conformal_deficit(&sads, 200.0).unwrap();
        assert!((a / b - 2.0).abs() < 0.2);
        let ads = model(ModelKind::AntiDeSitter, 3, None);
        assert_eq!(conformal_deficit(&ads, 7.0).unwrap(), 0.0);
        let ds = model(ModelKind::DeSitter, 3, None);
        assert!(conformal_deficit(&ds, 0.5).is_err());
    }

    #[test]
    fn divergence_identities_hold_on_models() {
        for kind in [ModelKind::DeSitter, ModelKind::SchwarzschildDeSitter, ModelKind::AntiDeSitter] {
            let m = (kind == ModelKind::SchwarzschildDeSitter).then_some(0.1);
            let d = model(kind, 3, m);
            let a = d.reference_sq.unwrap();
            for x in d.interior_grid(20) {
                if let Ok(v) = divergence_identity_residual(&d.radial, a, x) {
                    assert!(v.abs() < 1e-9, "{kind:?} at {x}: {v}");
                }
            }
        }
    }

    #[test]
    fn catalog_reports_verify_clean() {
        for n in [3, 4] {
            for triple in crate::catalog::default_catalog(n) {
                let d = build(triple).unwrap();
                let r = run_report(&d, &ReportConfig::default()).unwrap();
                let breaches = verify(&r);
                assert!(breaches.is_empty(), "{:?}: {breaches:?}", triple.kind);
            }
        }
    }
}
