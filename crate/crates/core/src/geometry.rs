//! Curvature, Hessian and static-equation residuals of rotationally symmetric
//! (warped product) Riemannian metrics.
//!
//! Two charts are supported:
//!
//! * areal: `g = dr⊗dr / W(r) + r² g_cross`, the form in which the Kottler family is written;
//! * geodesic: `g = ds⊗ds + φ(s)² g_cross`, used for cylinders and for profiles built from
//!   an arclength parametrisation.
//!
//! `g_cross` is a unit space form of curvature `k ∈ {+1, 0, -1}` and dimension `n - 1`.
//! The cosmological constant is normalised to `|Λ| = n(n-1)/2`, so a static solution with
//! `lambda_sign = s` satisfies `u Ric = D²u + s n u g`, `Δu = -s n u` and `R = s n(n-1)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet6;

/// Margin kept from zeros of `W` and `u` when sampling near horizons.
pub const EPS_DOM: f64 = 1e-8;

/// Volume of the unit round sphere `S^k`.
pub fn sphere_volume(k: usize) -> f64 {
    match k {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (k as f64 - 1.0) * sphere_volume(k - 2),
    }
}

/// The `(n-1)`-dimensional cross-section of a warped product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossSection {
    pub curvature_sign: i8,
    pub volume: f64,
    pub genus: Option<u32>,
}

impl CrossSection {
    pub fn new(n: usize, curvature_sign: i8, volume: f64, genus: Option<u32>) -> Result<Self> {
        if !matches!(curvature_sign, -1..=1) {
            return Err(Error::InvalidParameter(format!(
                "cross-section curvature sign must be -1, 0 or 1, got {curvature_sign}"
            )));
        }
        if !(volume > 0.0 && volume.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cross-section volume must be positive, got {volume}"
            )));
        }
        if let Some(g) = genus {
            if g < 2 || curvature_sign != -1 || n != 3 {
                return Err(Error::InvalidParameter(format!(
                    "genus {g} requires a hyperbolic surface cross-section with n = 3"
                )));
            }
            let expected = 4.0 * PI * (g as f64 - 1.0);
            if (volume - expected).abs() > 1e-12 * expected {
                return Err(Error::InvalidParameter(format!(
                    "genus {g} surface has area {expected}, got {volume}"
                )));
            }
        }
        Ok(Self { curvature_sign, volume, genus })
    }

    pub fn unit_sphere(n: usize) -> Self {
        Self { curvature_sign: 1, volume: sphere_volume(n - 1), genus: None }
    }

    pub fn flat(n: usize, volume: f64) -> Result<Self> {
        Self::new(n, 0, volume, None)
    }

    pub fn hyperbolic(n: usize, volume: f64) -> Result<Self> {
        Self::new(n, -1, volume, None)
    }

    /// Compact hyperbolic surface of the given genus (n = 3), area `4π(genus-1)`.
    pub fn hyperbolic_surface(genus: u32) -> Result<Self> {
        Self::new(3, -1, 4.0 * PI * (genus as f64 - 1.0), Some(genus))
    }

    pub fn k(&self) -> f64 {
        self.curvature_sign as f64
    }

    /// Topological genus when the cross-section is a closed surface (n = 3).
    pub fn surface_genus(&self) -> Option<u32> {
        match (self.curvature_sign, self.genus) {
            (_, Some(g)) => Some(g),
            (1, None) => Some(0),
            (0, None) => Some(1),
            _ => None,
        }
    }
}

/// A real function of the radial coordinate with derivative access.
#[derive(Clone)]
pub enum RadialFunction {
    /// `Σ c_i x^{p_i}`; the Kottler profiles are `a + b r² + c r^{2-n}`.
    PowerSum(Vec<(f64, f64)>),
    /// Any closed form written with jet arithmetic; derivatives are exact.
    Analytic(Arc<dyn Fn(Jet6) -> Jet6 + Send + Sync>),
    /// Point evaluations only; derivatives by fourth-order central differences of step `h`.
    Sampled { f: Arc<dyn Fn(f64) -> f64 + Send + Sync>, h: f64 },
}

impl fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PowerSum(terms) => f.debug_tuple("PowerSum").field(terms).finish(),
            Self::Analytic(_) => f.write_str("Analytic(..)"),
            Self::Sampled { h, .. } => f.debug_struct("Sampled").field("h", h).finish(),
        }
    }
}

impl RadialFunction {
    pub fn constant(value: f64) -> Self {
        Self::PowerSum(vec![(value, 0.0)])
    }

    /// `a + b x² + c x^{2-n}`.
    pub fn kottler(a: f64, b: f64, c: f64, n: usize) -> Self {
        let terms = [(a, 0.0), (b, 2.0), (c, 2.0 - n as f64)]
            .into_iter()
            .filter(|(coef, _)| *coef != 0.0)
            .collect();
        Self::PowerSum(terms)
    }

    pub fn analytic(f: impl Fn(Jet6) -> Jet6 + Send + Sync + 'static) -> Self {
        Self::Analytic(Arc::new(f))
    }

    pub fn sampled(f: impl Fn(f64) -> f64 + Send + Sync + 'static, h: f64) -> Self {
        Self::Sampled { f: Arc::new(f), h }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Self::PowerSum(terms) => terms.iter().map(|(c, p)| c * pow_term(x, *p)).sum(),
            Self::Analytic(f) => f(Jet6::constant(x)).value(),
            Self::Sampled { f, .. } => f(x),
        }
    }

    pub fn jet(&self, x: f64) -> Jet6 {
        match self {
            Self::PowerSum(terms) => {
                let xj = Jet6::variable(x);
                terms.iter().fold(Jet6::constant(0.0), |acc, (c, p)| {
                    let term = if *p == 0.0 {
                        Jet6::constant(1.0)
                    } else if p.fract() == 0.0 && p.abs() < 64.0 {
                        xj.powi(*p as i32)
                    } else {
                        xj.powf(*p)
                    };
                    acc + term * *c
                })
            }
            Self::Analytic(f) => f(Jet6::variable(x)),
            Self::Sampled { f, h } => sampled_jet(f.as_ref(), x, *h),
        }
    }
}

fn pow_term(x: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if p.fract() == 0.0 && p.abs() < 64.0 {
        x.powi(p as i32)
    } else {
        x.powf(p)
    }
}

/// Derivatives up to order four from seven-point stencils (truncation `O(h⁴)` for the first
/// two derivatives, `O(h²)` for the third and fourth).
fn sampled_jet(f: &(dyn Fn(f64) -> f64 + Send + Sync), x: f64, h: f64) -> Jet6 {
    let v = |k: i32| f(x + k as f64 * h);
    let (m3, m2, m1, z, p1, p2, p3) = (v(-3), v(-2), v(-1), v(0), v(1), v(2), v(3));
    let d1 = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
    let d2 = (-p2 + 16.0 * p1 - 30.0 * z + 16.0 * m1 - m2) / (12.0 * h * h);
    let d3 = (-p3 + 8.0 * p2 - 13.0 * p1 + 13.0 * m1 - 8.0 * m2 + m3) / (8.0 * h.powi(3));
    let d4 = (-p3 + 12.0 * p2 - 39.0 * p1 + 56.0 * z - 39.0 * m1 + 12.0 * m2 - m3)
        / (6.0 * h.powi(4));
    Jet6::from_derivatives(&[z, d1, d2, d3, d4])
}

/// The static potential of a radial geometry.
#[derive(Debug, Clone)]
pub enum Potential {
    /// `u = √W` (areal chart only).
    SqrtProfile,
    Function(RadialFunction),
}

/// Which coordinate the metric is written in, together with its radial data.
#[derive(Debug, Clone)]
pub enum Chart {
    /// `dr⊗dr / W(r) + r² g_cross`, carrying `W`.
    Areal(RadialFunction),
    /// `ds⊗ds + φ(s)² g_cross`, carrying `φ`.
    Geodesic(RadialFunction),
}

/// A rotationally symmetric static triple `(M, g, u)` restricted to `(lo, hi)`.
#[derive(Debug, Clone)]
pub struct RadialGeometry {
    pub n: usize,
    pub cross: CrossSection,
    pub chart: Chart,
    pub potential: Potential,
    pub domain: (f64, f64),
    pub lambda_sign: i8,
}

/// Ricci, Hessian and gradient data at one radius. Tangential entries are eigenvalues in any
/// unit direction tangent to the cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub r: f64,
    pub ric_radial: f64,
    pub ric_tangential: f64,
    pub scalar: f64,
    pub hess_radial: f64,
    pub hess_tangential: f64,
    pub laplacian: f64,
    pub grad_norm_sq: f64,
}

/// Residuals of `u Ric = D²u + s n u g`, `Δu = -s n u` and `R = s n(n-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StaticResidual {
    pub tensor_radial: f64,
    pub tensor_tangential: f64,
    pub laplace: f64,
    pub scalar: f64,
}

impl StaticResidual {
    pub fn max_abs(&self) -> f64 {
        [self.tensor_radial, self.tensor_tangential, self.laplace, self.scalar]
            .into_iter()
            .map(f64::abs)
            .fold(0.0, f64::max)
    }
}

/// Plain derivatives fed into the closed-form curvature expressions.
#[derive(Debug, Clone, Copy)]
struct ChartDerivs {
    /// `W` (areal) or `φ` (geodesic) with first and second derivatives.
    f: f64,
    f1: f64,
    f2: f64,
    u1: f64,
    u2: f64,
}

/// Jets of the lapse `e` (so that `d/dσ = e d/dx` is the unit radial derivative), the warping
/// function `φ` and the potential `u` at one point.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LocalJets {
    pub lapse: Jet6,
    pub warp: Jet6,
    pub u: Jet6,
}

impl LocalJets {
    /// Unit-normal derivative `e · f'`.
    pub fn normal(&self, f: &Jet6) -> Jet6 {
        self.lapse * f.derivative()
    }

    /// Divergence of the radial vector field whose unit-normal component is `v`.
    pub fn divergence(&self, v: &Jet6, n: usize) -> Jet6 {
        let vol = self.warp.powi(n as i32 - 1);
        self.lapse * (vol * *v).derivative() / vol
    }

    /// `|Df|²` for a radial function.
    pub fn grad_norm_sq(&self, f: &Jet6) -> Jet6 {
        let d = self.normal(f);
        d * d
    }

    /// Radial and tangential Hessian eigenvalues of a radial function.
    pub fn hessian(&self, f: &Jet6) -> (Jet6, Jet6) {
        let df = self.normal(f);
        let radial = self.normal(&df);
        let tangential = df * self.normal(&self.warp) / self.warp;
        (radial, tangential)
    }

    pub fn laplacian(&self, f: &Jet6, n: usize) -> Jet6 {
        self.divergence(&self.normal(f), n)
    }
}

impl RadialGeometry {
    pub fn areal(
        n: usize,
        cross: CrossSection,
        profile: RadialFunction,
        potential: Potential,
        domain: (f64, f64),
        lambda_sign: i8,
    ) -> Result<Self> {
        Self::build(n, cross, Chart::Areal(profile), potential, domain, lambda_sign)
    }

    pub fn geodesic(
        n: usize,
        cross: CrossSection,
        warp: RadialFunction,
        potential: RadialFunction,
        domain: (f64, f64),
        lambda_sign: i8,
    ) -> Result<Self> {
        Self::build(
            n,
            cross,
            Chart::Geodesic(warp),
            Potential::Function(potential),
            domain,
            lambda_sign,
        )
    }

    fn build(
        n: usize,
        cross: CrossSection,
        chart: Chart,
        potential: Potential,
        domain: (f64, f64),
        lambda_sign: i8,
    ) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("dimension must be >= 3, got {n}")));
        }
        if !matches!(lambda_sign, -1..=1) {
            return Err(Error::InvalidParameter(format!(
                "lambda_sign must be -1, 0 or 1, got {lambda_sign}"
            )));
        }
        if domain.0.is_nan() || domain.1.is_nan() || domain.0 >= domain.1 {
            return Err(Error::InvalidParameter(format!("empty domain {domain:?}")));
        }
        if matches!(chart, Chart::Geodesic(_)) && matches!(potential, Potential::SqrtProfile) {
            return Err(Error::InvalidParameter(
                "u = sqrt(W) is only meaningful in the areal chart".into(),
            ));
        }
        Ok(Self { n, cross, chart, potential, domain, lambda_sign })
    }

    pub fn k(&self) -> f64 {
        self.cross.k()
    }

    /// Errors unless `x` lies in the open domain with a positive profile / warping function.
    pub fn check_point(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.domain;
        if !(x > lo && x < hi) {
            return Err(Error::OutsideDomain { point: x, lo, hi });
        }
        let value = match &self.chart {
            Chart::Areal(w) => w.value(x),
            Chart::Geodesic(phi) => phi.value(x),
        };
        if !(value > 0.0) {
            return Err(Error::NonPositiveProfile { r: x, value });
        }
        Ok(())
    }

    /// Potential value `u(x)`.
    pub fn potential_value(&self, x: f64) -> f64 {
        match (&self.potential, &self.chart) {
            (Potential::SqrtProfile, Chart::Areal(w)) => w.value(x).max(0.0).sqrt(),
            (Potential::Function(f), _) => f.value(x),
            (Potential::SqrtProfile, Chart::Geodesic(_)) => unreachable!("rejected at build"),
        }
    }

    /// `u(x)²`, taken directly from `W` when `u = √W` so that no rounding enters.
    pub fn potential_sq(&self, x: f64) -> f64 {
        match (&self.potential, &self.chart) {
            (Potential::SqrtProfile, Chart::Areal(w)) => w.value(x).max(0.0),
            _ => self.potential_value(x).powi(2),
        }
    }

    /// Areal radius of the level through `x` (`r` or `φ(s)`).
    pub fn areal_radius(&self, x: f64) -> f64 {
        match &self.chart {
            Chart::Areal(_) => x,
            Chart::Geodesic(phi) => phi.value(x),
        }
    }

    /// Volume of the cross-section through `x`.
    pub fn level_area(&self, x: f64) -> f64 {
        self.cross.volume * self.areal_radius(x).powi(self.n as i32 - 1)
    }

    pub(crate) fn jets(&self, x: f64) -> LocalJets {
        let (lapse, warp) = match &self.chart {
            Chart::Areal(w) => (w.jet(x).sqrt(), Jet6::variable(x)),
            Chart::Geodesic(phi) => (Jet6::constant(1.0), phi.jet(x)),
        };
        let u = match (&self.potential, &self.chart) {
            (Potential::SqrtProfile, Chart::Areal(w)) => w.jet(x).sqrt(),
            (Potential::Function(f), _) => f.jet(x),
            (Potential::SqrtProfile, Chart::Geodesic(_)) => unreachable!("rejected at build"),
        };
        LocalJets { lapse, warp, u }
    }

    /// `|Du|²` at `x`, allowed on the closed domain. For `u = √W` this is `W'²/4`, which
    /// stays finite on horizons.
    pub fn grad_norm_sq(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain;
        if !(x >= lo && x <= hi && x.is_finite()) {
            return Err(Error::OutsideDomain { point: x, lo, hi });
        }
        Ok(match (&self.chart, &self.potential) {
            (Chart::Areal(w), Potential::SqrtProfile) => {
                let d = w.jet(x).deriv(1);
                d * d / 4.0
            }
            (Chart::Areal(w), Potential::Function(f)) => {
                let d = f.jet(x).deriv(1);
                w.value(x) * d * d
            }
            (Chart::Geodesic(_), Potential::Function(f)) => {
                let d = f.jet(x).deriv(1);
                d * d
            }
            (Chart::Geodesic(_), Potential::SqrtProfile) => unreachable!("rejected at build"),
        })
    }

    fn analytic_derivs(&self, x: f64) -> ChartDerivs {
        let f = match &self.chart {
            Chart::Areal(w) => w.jet(x),
            Chart::Geodesic(phi) => phi.jet(x),
        };
        let u = self.jets(x).u;
        ChartDerivs {
            f: f.value(),
            f1: f.deriv(1),
            f2: f.deriv(2),
            u1: u.deriv(1),
            u2: u.deriv(2),
        }
    }

    fn closed_form(&self, x: f64, d: &ChartDerivs) -> CurvatureSample {
        let n = self.n as f64;
        let k = self.k();
        match self.chart {
            Chart::Areal(_) => {
                let r = x;
                let w = d.f;
                let ric_radial = -(n - 1.0) * d.f1 / (2.0 * r);
                let ric_tangential = -d.f1 / (2.0 * r) + (n - 2.0) * (k - w) / (r * r);
                let scalar = -(n - 1.0) * d.f1 / r + (n - 1.0) * (n - 2.0) * (k - w) / (r * r);
                let hess_radial = w * d.u2 + d.f1 * d.u1 / 2.0;
                let hess_tangential = w * d.u1 / r;
                CurvatureSample {
                    r,
                    ric_radial,
                    ric_tangential,
                    scalar,
                    hess_radial,
                    hess_tangential,
                    laplacian: hess_radial + (n - 1.0) * hess_tangential,
                    grad_norm_sq: w * d.u1 * d.u1,
                }
            }
            Chart::Geodesic(_) => {
                let phi = d.f;
                let ric_radial = -(n - 1.0) * d.f2 / phi;
                let ric_tangential = -d.f2 / phi + (n - 2.0) * (k - d.f1 * d.f1) / (phi * phi);
                let scalar = -2.0 * (n - 1.0) * d.f2 / phi
                    + (n - 1.0) * (n - 2.0) * (k - d.f1 * d.f1) / (phi * phi);
                let hess_radial = d.u2;
                let hess_tangential = d.u1 * d.f1 / phi;
                CurvatureSample {
                    r: x,
                    ric_radial,
                    ric_tangential,
                    scalar,
                    hess_radial,
                    hess_tangential,
                    laplacian: hess_radial + (n - 1.0) * hess_tangential,
                    grad_norm_sq: d.u1 * d.u1,
                }
            }
        }
    }
}

/// Closed-form curvature, Hessian and gradient data at `r` from analytic derivatives.
pub fn curvature_at(geom: &RadialGeometry, r: f64) -> Result<CurvatureSample> {
    geom.check_point(r)?;
    let d = geom.analytic_derivs(r);
    Ok(geom.closed_form(r, &d))
}

/// Same quantities as [`curvature_at`] with first and second derivatives of the profile and
/// the potential replaced by second-order central differences of step `h`.
pub fn finite_difference_curvature(
    geom: &RadialGeometry,
    r: f64,
    h: f64,
) -> Result<CurvatureSample> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {h}")));
    }
    geom.check_point(r - 2.0 * h)?;
    geom.check_point(r + 2.0 * h)?;
    geom.check_point(r)?;
    let f = |x: f64| match &geom.chart {
        Chart::Areal(w) => w.value(x),
        Chart::Geodesic(phi) => phi.value(x),
    };
    let u = |x: f64| geom.potential_value(x);
    let diff = |g: &dyn Fn(f64) -> f64| {
        let (m, z, p) = (g(r - h), g(r), g(r + h));
        (z, (p - m) / (2.0 * h), (p - 2.0 * z + m) / (h * h))
    };
    let (f0, f1, f2) = diff(&f);
    let (_, u1, u2) = diff(&u);
    let d = ChartDerivs { f: f0, f1, f2, u1, u2 };
    Ok(geom.closed_form(r, &d))
}

/// Residuals of the static equations at `r`; all four vanish on exact solutions.
pub fn static_residual(geom: &RadialGeometry, r: f64) -> Result<StaticResidual> {
    let c = curvature_at(geom, r)?;
    Ok(residual_from_sample(&c, geom.potential_value(r), geom.n, geom.lambda_sign))
}

/// Residuals computed from an already evaluated sample (closed form or finite differences).
pub fn residual_from_sample(
    c: &CurvatureSample,
    u: f64,
    n: usize,
    lambda_sign: i8,
) -> StaticResidual {
    let n = n as f64;
    let s = lambda_sign as f64;
    StaticResidual {
        tensor_radial: u * c.ric_radial - c.hess_radial - s * n * u,
        tensor_tangential: u * c.ric_tangential - c.hess_tangential - s * n * u,
        laplace: c.laplacian + s * n * u,
        scalar: c.scalar - s * n * (n - 1.0),
    }
}
