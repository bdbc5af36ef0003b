//! The closed-form static triples: Minkowski, Schwarzschild, de Sitter, Schwarzschild–de Sitter,
//! Nariai, anti de Sitter, Schwarzschild–anti de Sitter, the flat and hyperbolic Kottler
//! metrics, and the anti-Nariai cylinder.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    curvature_at, sphere_volume, static_residual, CrossSection, CurvatureSample, Potential,
    RadialFunction, RadialGeometry, StaticResidual,
};
use crate::horizon::{horizon_radii, horizon_report, sds_u_max, HorizonReport};
use crate::jet::Jet6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Minkowski,
    Schwarzschild,
    DeSitter,
    SchwarzschildDeSitter,
    Nariai,
    AntiDeSitter,
    SchwarzschildAdS,
    KottlerFlat,
    KottlerHyperbolic,
    AntiNariai,
}

impl ModelKind {
    pub const ALL: [ModelKind; 10] = [
        ModelKind::Minkowski,
        ModelKind::Schwarzschild,
        ModelKind::DeSitter,
        ModelKind::SchwarzschildDeSitter,
        ModelKind::Nariai,
        ModelKind::AntiDeSitter,
        ModelKind::SchwarzschildAdS,
        ModelKind::KottlerFlat,
        ModelKind::KottlerHyperbolic,
        ModelKind::AntiNariai,
    ];

    pub fn lambda_sign(self) -> i8 {
        use ModelKind::*;
        match self {
            Minkowski | Schwarzschild => 0,
            DeSitter | SchwarzschildDeSitter | Nariai => 1,
            AntiDeSitter | SchwarzschildAdS | KottlerFlat | KottlerHyperbolic | AntiNariai => -1,
        }
    }

    pub fn has_mass(self) -> bool {
        use ModelKind::*;
        matches!(
            self,
            Schwarzschild | SchwarzschildDeSitter | SchwarzschildAdS | KottlerFlat | KottlerHyperbolic
        )
    }

    pub fn is_cylinder(self) -> bool {
        matches!(self, ModelKind::Nariai | ModelKind::AntiNariai)
    }

    pub fn name(self) -> &'static str {
        use ModelKind::*;
        match self {
            Minkowski => "minkowski",
            Schwarzschild => "schwarzschild",
            DeSitter => "de_sitter",
            SchwarzschildDeSitter => "schwarzschild_de_sitter",
            Nariai => "nariai",
            AntiDeSitter => "anti_de_sitter",
            SchwarzschildAdS => "schwarzschild_ads",
            KottlerFlat => "kottler_flat",
            KottlerHyperbolic => "kottler_hyperbolic",
            AntiNariai => "anti_nariai",
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown model kind `{s}`")))
    }
}

/// Identifies one catalog solution. Validation happens in [`build`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelTriple {
    pub kind: ModelKind,
    pub n: usize,
    pub mass: Option<f64>,
    pub genus: Option<u32>,
    /// Cross-section volume for the flat and hyperbolic Kottler metrics.
    pub cross_volume: Option<f64>,
}

impl ModelTriple {
    pub fn new(kind: ModelKind, n: usize) -> Self {
        Self { kind, n, mass: None, genus: None, cross_volume: None }
    }

    pub fn with_mass(mut self, m: f64) -> Self {
        self.mass = Some(m);
        self
    }

    pub fn with_genus(mut self, genus: u32) -> Self {
        self.genus = Some(genus);
        self
    }

    pub fn with_cross_volume(mut self, volume: f64) -> Self {
        self.cross_volume = Some(volume);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CylinderKind {
    Nariai,
    AntiNariai,
}

/// `(1/n)[dr⊗dr + (n-2) g_cross]` with `u = sin r` (round factor) or `u = cosh r`
/// (hyperbolic factor).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderGeometry {
    pub n: usize,
    pub kind: CylinderKind,
}

impl CylinderGeometry {
    pub fn k(&self) -> f64 {
        match self.kind {
            CylinderKind::Nariai => 1.0,
            CylinderKind::AntiNariai => -1.0,
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        match self.kind {
            CylinderKind::Nariai => (0.0, PI),
            CylinderKind::AntiNariai => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Radius of the cross-section factor, `sqrt((n-2)/n)`.
    pub fn cross_radius(&self) -> f64 {
        ((self.n as f64 - 2.0) / self.n as f64).sqrt()
    }

    fn potential_jet(&self, r: Jet6) -> Jet6 {
        match self.kind {
            CylinderKind::Nariai => r.sin(),
            CylinderKind::AntiNariai => r.cosh(),
        }
    }

    pub fn potential(&self, r: f64) -> f64 {
        self.potential_jet(Jet6::constant(r)).value()
    }

    /// `|Du|² = n (du/dr)²`; finite on the whole closed domain.
    pub fn grad_norm_sq(&self, r: f64) -> f64 {
        let d = self.potential_jet(Jet6::variable(r)).deriv(1);
        self.n as f64 * d * d
    }

    fn check(&self, r: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if r > lo && r < hi {
            Ok(())
        } else {
            Err(Error::OutsideDomain { point: r, lo, hi })
        }
    }

    /// Product-metric curvature: the line factor is flat and the cross-section factor is
    /// Einstein with `Ric = k n`.
    pub fn curvature_at(&self, r: f64) -> Result<CurvatureSample> {
        self.check(r)?;
        let n = self.n as f64;
        let u = self.potential_jet(Jet6::variable(r));
        let hess_radial = n * u.deriv(2);
        Ok(CurvatureSample {
            r,
            ric_radial: 0.0,
            ric_tangential: self.k() * n,
            scalar: self.k() * n * (n - 1.0),
            hess_radial,
            hess_tangential: 0.0,
            laplacian: hess_radial,
            grad_norm_sq: n * u.deriv(1) * u.deriv(1),
        })
    }

    pub fn static_residual(&self, r: f64) -> Result<StaticResidual> {
        let c = self.curvature_at(r)?;
        Ok(crate::geometry::residual_from_sample(
            &c,
            self.potential(r),
            self.n,
            self.k() as i8,
        ))
    }

    /// The same metric in arclength `σ = r/√n`: `dσ⊗dσ + ρ² g_cross` with constant `ρ`.
    pub fn to_radial(&self) -> RadialGeometry {
        let rho = self.cross_radius();
        let sqrt_n = (self.n as f64).sqrt();
        let (lo, hi) = self.domain();
        let cross = match self.kind {
            CylinderKind::Nariai => CrossSection::unit_sphere(self.n),
            CylinderKind::AntiNariai => CrossSection {
                curvature_sign: -1,
                volume: sphere_volume(self.n - 1),
                genus: None,
            },
        };
        let potential = match self.kind {
            CylinderKind::Nariai => RadialFunction::analytic(move |s| (s * sqrt_n).sin()),
            CylinderKind::AntiNariai => RadialFunction::analytic(move |s| (s * sqrt_n).cosh()),
        };
        RadialGeometry::geodesic(
            self.n,
            cross,
            RadialFunction::constant(rho),
            potential,
            (lo / sqrt_n, hi / sqrt_n),
            self.k() as i8,
        )
        .expect("cylinder data is valid")
    }
}

#[derive(Debug, Clone)]
pub enum Geometry {
    Radial(RadialGeometry),
    Cylinder(CylinderGeometry),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremumKind {
    /// Attained maximum (`Λ > 0`).
    Max,
    /// Attained minimum (`Λ < 0` without boundary).
    Min,
    /// Supremum at infinity (`Λ = 0`).
    Sup,
    /// Infimum on the horizon (`Λ < 0` with boundary).
    Inf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub kind: ExtremumKind,
    pub value: f64,
}

/// How the raw `|Du|` on a horizon is turned into a surface gravity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Divide by `max u`.
    MaxU,
    /// `sup u = 1` at infinity; `|Du|` is reported as is.
    SupU,
    /// `u ~ r` at conformal infinity; `|Du|` is reported as is.
    ConformalInfinity,
    /// No canonical scale for `u`; `|Du|` is raw.
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonSeed {
    pub label: String,
    /// Areal radius of the horizon.
    pub radius: f64,
    /// Position in the model's own coordinate.
    pub coordinate: f64,
    /// `|Du|` on the horizon.
    pub grad_norm: f64,
}

/// A built model: geometry, extremum of `u`, and horizon data.
#[derive(Debug, Clone)]
pub struct ModelData {
    pub triple: ModelTriple,
    pub geometry: Geometry,
    /// The geometry in a warped chart. For cylinders this is arclength `σ = r/√n`.
    pub radial: RadialGeometry,
    pub lambda_sign: i8,
    pub extremum: Extremum,
    /// Where the extremum is attained, in the model's own coordinate.
    pub extremum_locus: Option<f64>,
    /// `u_max²` (`Λ > 0`) or the conformal-infinity constant `k` (`Λ < 0`) used in deficits.
    pub reference_sq: Option<f64>,
    pub horizons: Vec<HorizonSeed>,
    pub normalization: Normalization,
}

/// `sqrt((n-2)^{n-2} / n^n)`, the largest Schwarzschild–de Sitter mass.
pub fn m_max(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("dimension must be >= 3, got {n}")));
    }
    let nf = n as f64;
    Ok(((nf - 2.0).powi(n as i32 - 2) / nf.powi(n as i32)).sqrt())
}

fn require_mass(triple: &ModelTriple) -> Result<f64> {
    triple.mass.ok_or_else(|| {
        Error::InvalidParameter(format!("{} needs a mass parameter", triple.kind))
    })
}

fn validate(triple: &ModelTriple) -> Result<()> {
    use ModelKind::*;
    let n = triple.n;
    let mm = m_max(n)?;
    if triple.kind.has_mass() {
        let m = require_mass(triple)?;
        let ok = match triple.kind {
            SchwarzschildDeSitter => m > 0.0 && m < mm,
            KottlerHyperbolic => m > -mm && m.is_finite(),
            _ => m > 0.0 && m.is_finite(),
        };
        if !ok {
            let range = match triple.kind {
                SchwarzschildDeSitter => format!("(0, {mm})"),
                KottlerHyperbolic => format!("({}, inf)", -mm),
                _ => "(0, inf)".into(),
            };
            return Err(Error::InvalidParameter(format!(
                "{} mass must lie in {range}, got {m}",
                triple.kind
            )));
        }
    } else if let Some(m) = triple.mass {
        return Err(Error::InvalidParameter(format!(
            "{} carries no mass parameter (got {m})",
            triple.kind
        )));
    }
    if triple.genus.is_some() && triple.kind != KottlerHyperbolic {
        return Err(Error::InvalidParameter(format!(
            "genus only applies to {KottlerHyperbolic}"
        )));
    }
    if triple.cross_volume.is_some() && !matches!(triple.kind, KottlerFlat | KottlerHyperbolic) {
        return Err(Error::InvalidParameter(format!(
            "{} has a fixed cross-section",
            triple.kind
        )));
    }
    Ok(())
}

fn cross_section(triple: &ModelTriple) -> Result<CrossSection> {
    let n = triple.n;
    let default_volume = sphere_volume(n - 1);
    match triple.kind {
        ModelKind::KottlerFlat => {
            CrossSection::flat(n, triple.cross_volume.unwrap_or(default_volume))
        }
        ModelKind::KottlerHyperbolic => match (triple.genus, triple.cross_volume) {
            (Some(g), Some(v)) => CrossSection::new(n, -1, v, Some(g)),
            (Some(g), None) if n == 3 => CrossSection::hyperbolic_surface(g),
            (Some(_), None) => Err(Error::InvalidParameter("genus requires n = 3".into())),
            (None, Some(v)) => CrossSection::hyperbolic(n, v),
            // Genus 2 has area 4π, the same as the round sphere.
            (None, None) if n == 3 => CrossSection::hyperbolic_surface(2),
            (None, None) => CrossSection::hyperbolic(n, default_volume),
        },
        _ => Ok(CrossSection::unit_sphere(n)),
    }
}

/// Builds the profile, potential, extremum and horizon data of a catalog triple.
pub fn build(triple: ModelTriple) -> Result<ModelData> {
    use ModelKind::*;
    validate(&triple)?;
    let n = triple.n;
    let nf = n as f64;
    let s = triple.kind.lambda_sign();

    if triple.kind.is_cylinder() {
        let kind = if triple.kind == Nariai { CylinderKind::Nariai } else { CylinderKind::AntiNariai };
        let cyl = CylinderGeometry { n, kind };
        let rho = cyl.cross_radius();
        let (extremum, locus, horizons) = match kind {
            CylinderKind::Nariai => (
                Extremum { kind: ExtremumKind::Max, value: 1.0 },
                PI / 2.0,
                vec![
                    HorizonSeed {
                        label: "left".into(),
                        radius: rho,
                        coordinate: 0.0,
                        grad_norm: cyl.grad_norm_sq(0.0).sqrt(),
                    },
                    HorizonSeed {
                        label: "right".into(),
                        radius: rho,
                        coordinate: PI,
                        grad_norm: cyl.grad_norm_sq(PI).sqrt(),
                    },
                ],
            ),
            CylinderKind::AntiNariai => {
                (Extremum { kind: ExtremumKind::Min, value: 1.0 }, 0.0, Vec::new())
            }
        };
        return Ok(ModelData {
            triple,
            radial: cyl.to_radial(),
            geometry: Geometry::Cylinder(cyl),
            lambda_sign: s,
            extremum,
            extremum_locus: Some(locus),
            reference_sq: Some(1.0),
            horizons,
            normalization: if s > 0 { Normalization::MaxU } else { Normalization::ConformalInfinity },
        });
    }

    let cross = cross_section(&triple)?;
    let k = cross.k();
    let m = triple.mass.unwrap_or(0.0);
    let profile = RadialFunction::kottler(k, -(s as f64), -2.0 * m, n);

    let (potential, domain, horizon_radii_used): (Potential, (f64, f64), Vec<(String, f64)>) =
        match triple.kind {
            Minkowski => (Potential::Function(RadialFunction::constant(1.0)), (0.0, f64::INFINITY), vec![]),
            AntiDeSitter => (Potential::SqrtProfile, (0.0, f64::INFINITY), vec![]),
            DeSitter => (Potential::SqrtProfile, (0.0, 1.0), vec![("outer".into(), 1.0)]),
            SchwarzschildDeSitter => {
                let roots = horizon_radii(n, m, 1, 1)?;
                let (a, b) = (roots.radii[0], roots.radii[roots.radii.len() - 1]);
                (
                    Potential::SqrtProfile,
                    (a, b),
                    vec![("inner".into(), a), ("outer".into(), b)],
                )
            }
            _ => {
                let roots = horizon_radii(n, m, cross.curvature_sign, s)?;
                let r = *roots.radii.last().expect("nonempty root set");
                (Potential::SqrtProfile, (r, f64::INFINITY), vec![("horizon".into(), r)])
            }
        };

    let horizons = horizon_radii_used
        .into_iter()
        .map(|(label, r)| HorizonSeed {
            label,
            radius: r,
            coordinate: r,
            grad_norm: profile.jet(r).deriv(1).abs() / 2.0,
        })
        .collect();

    let (extremum, locus, reference_sq, normalization) = match triple.kind {
        Minkowski | Schwarzschild => {
            (Extremum { kind: ExtremumKind::Sup, value: 1.0 }, None, None, Normalization::SupU)
        }
        DeSitter => (
            Extremum { kind: ExtremumKind::Max, value: 1.0 },
            Some(0.0),
            Some(1.0),
            Normalization::MaxU,
        ),
        SchwarzschildDeSitter => {
            let umax = sds_u_max(n, m)?;
            (
                Extremum { kind: ExtremumKind::Max, value: umax },
                Some(((nf - 2.0) * m).powf(1.0 / nf)),
                Some(umax * umax),
                Normalization::MaxU,
            )
        }
        AntiDeSitter => (
            Extremum { kind: ExtremumKind::Min, value: 1.0 },
            Some(0.0),
            Some(1.0),
            Normalization::ConformalInfinity,
        ),
        KottlerFlat => (
            Extremum { kind: ExtremumKind::Inf, value: 0.0 },
            None,
            Some(0.0),
            Normalization::None,
        ),
        _ => (
            Extremum { kind: ExtremumKind::Inf, value: 0.0 },
            None,
            Some(k),
            Normalization::ConformalInfinity,
        ),
    };

    let radial = RadialGeometry::areal(n, cross, profile, potential, domain, s)?;
    Ok(ModelData {
        triple,
        geometry: Geometry::Radial(radial.clone()),
        radial,
        lambda_sign: s,
        extremum,
        extremum_locus: locus,
        reference_sq,
        horizons,
        normalization,
    })
}

/// One representative of each kind in dimension `n`.
pub fn default_catalog(n: usize) -> Vec<ModelTriple> {
    use ModelKind::*;
    let mm = m_max(n).unwrap_or(0.0);
    ModelKind::ALL
        .into_iter()
        .map(|kind| {
            let t = ModelTriple::new(kind, n);
            match kind {
                Schwarzschild | SchwarzschildAdS | KottlerFlat => t.with_mass(1.0),
                SchwarzschildDeSitter => t.with_mass(0.5 * mm),
                KottlerHyperbolic => t.with_mass(0.3),
                _ => t,
            }
        })
        .collect()
}

impl ModelData {
    pub fn n(&self) -> usize {
        self.triple.n
    }

    pub fn kind(&self) -> ModelKind {
        self.triple.kind
    }

    fn chart_scale(&self) -> f64 {
        match self.geometry {
            Geometry::Radial(_) => 1.0,
            Geometry::Cylinder(c) => (c.n as f64).sqrt(),
        }
    }

    /// Model coordinate to the coordinate of [`ModelData::radial`].
    pub fn to_chart(&self, x: f64) -> f64 {
        x / self.chart_scale()
    }

    pub fn from_chart(&self, x: f64) -> f64 {
        x * self.chart_scale()
    }

    /// Domain in the model's own coordinate.
    pub fn domain(&self) -> (f64, f64) {
        match &self.geometry {
            Geometry::Radial(g) => g.domain,
            Geometry::Cylinder(c) => c.domain(),
        }
    }

    pub fn u(&self, x: f64) -> f64 {
        match &self.geometry {
            Geometry::Radial(g) => g.potential_value(x),
            Geometry::Cylinder(c) => c.potential(x),
        }
    }

    pub fn u_sq(&self, x: f64) -> f64 {
        match &self.geometry {
            Geometry::Radial(g) => g.potential_sq(x),
            Geometry::Cylinder(c) => c.potential(x).powi(2),
        }
    }

    /// `|Du|²`, valid on the closed domain.
    pub fn grad_norm_sq(&self, x: f64) -> Result<f64> {
        match &self.geometry {
            Geometry::Radial(g) => g.grad_norm_sq(x),
            Geometry::Cylinder(c) => {
                let (lo, hi) = c.domain();
                if x >= lo && x <= hi && x.is_finite() {
                    Ok(c.grad_norm_sq(x))
                } else {
                    Err(Error::OutsideDomain { point: x, lo, hi })
                }
            }
        }
    }

    /// Area of the cross-section through `x`.
    pub fn level_area(&self, x: f64) -> f64 {
        self.radial.level_area(self.to_chart(x))
    }

    pub fn curvature_at(&self, x: f64) -> Result<CurvatureSample> {
        match &self.geometry {
            Geometry::Radial(g) => curvature_at(g, x),
            Geometry::Cylinder(c) => c.curvature_at(x),
        }
    }

    pub fn static_residual(&self, x: f64) -> Result<StaticResidual> {
        match &self.geometry {
            Geometry::Radial(g) => static_residual(g, x),
            Geometry::Cylinder(c) => c.static_residual(x),
        }
    }

    /// `count` interior points in model coordinates, kept 10% of the span away from horizons.
    /// Unbounded ends are cut at five units from the finite end (or `±5`).
    pub fn interior_grid(&self, count: usize) -> Vec<f64> {
        let (lo, hi) = self.domain();
        let (a, b) = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => (lo + 0.1 * (hi - lo), hi - 0.1 * (hi - lo)),
            (true, false) => (lo + 0.1 * lo.max(1.0), lo + 5.0),
            (false, true) => (hi - 5.0, hi - 0.1 * hi.abs().max(1.0)),
            (false, false) => (-5.0, 5.0),
        };
        if count == 1 {
            return vec![0.5 * (a + b)];
        }
        (0..count).map(|i| a + (b - a) * i as f64 / (count - 1) as f64).collect()
    }

    /// Sign-appropriate gradient deficit: `u_max² - u² - |Du|²` when `Λ > 0`, and
    /// `u² - c - |Du|²` when `Λ < 0`, with `c` the conformal-infinity constant.
    pub fn deficit(&self, x: f64) -> Result<f64> {
        let reference = self.reference_sq.ok_or(Error::UnsupportedKind {
            operation: "gradient deficit",
            kind: self.kind().to_string(),
        })?;
        let grad = self.grad_norm_sq(x)?;
        let u_sq = self.u_sq(x);
        Ok(if self.lambda_sign > 0 {
            reference - u_sq - grad
        } else {
            u_sq - reference - grad
        })
    }

    /// `(1/((n-2)|S^{n-1}|)) ∫_{∂M} |Du| dσ` for Schwarzschild.
    pub fn komar_mass(&self) -> Result<f64> {
        if self.kind() != ModelKind::Schwarzschild {
            return Err(Error::UnsupportedKind {
                operation: "komar mass",
                kind: self.kind().to_string(),
            });
        }
        let n = self.n();
        let h = &self.horizons[0];
        let flux = h.grad_norm * self.radial.cross.volume * h.radius.powi(n as i32 - 1);
        Ok(flux / ((n as f64 - 2.0) * sphere_volume(n - 1)))
    }

    pub fn report(&self) -> ModelReport {
        ModelReport {
            kind: self.kind(),
            n: self.n(),
            mass: self.triple.mass,
            genus: self.radial.cross.genus,
            cross_volume: self.radial.cross.volume,
            cross_curvature: self.radial.cross.curvature_sign,
            lambda_sign: self.lambda_sign,
            u_extremum: self.extremum,
            extremum_locus: self.extremum_locus,
            normalization: self.normalization,
            horizons: horizon_report(self),
        }
    }
}

/// JSON summary of a built model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub kind: ModelKind,
    pub n: usize,
    pub mass: Option<f64>,
    pub genus: Option<u32>,
    pub cross_volume: f64,
    pub cross_curvature: i8,
    pub lambda_sign: i8,
    pub u_extremum: Extremum,
    pub extremum_locus: Option<f64>,
    pub normalization: Normalization,
    pub horizons: Vec<HorizonReport>,
}
