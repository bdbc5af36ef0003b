//! Radial reduction of the static equations in arclength gauge, integrated from a horizon.
//!
//! With `g = ds⊗ds + φ(s)² g_cross` and `u = u(s)` the static system becomes
//!
//! ```text
//! u'' = -s_Λ n u - (n-1) (φ'/φ) u'
//! φ'' = u' φ' / u
//! 0   = s_Λ n(n-1) + 2(n-1) u'φ'/(uφ) + (n-1)(n-2)(φ'² - k)/φ²
//! ```
//!
//! The last line is a constraint preserved by the flow; its value along a numerical
//! trajectory measures the integration error.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::horizon::{k_minus, k_plus, sds_radii, sds_u_max};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingState {
    pub s: f64,
    pub u: f64,
    pub u_dot: f64,
    pub phi: f64,
    pub phi_dot: f64,
    pub constraint: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingConfig {
    pub n: usize,
    pub lambda_sign: i8,
    /// Curvature sign of the cross-section.
    pub cross_curvature: i8,
    /// Areal radius of the starting horizon.
    pub r0: f64,
    /// `|Du|` on the starting horizon; `u` scales linearly with it.
    pub kappa: f64,
    pub step: f64,
    pub s_max: f64,
    /// Largest admissible constraint drift.
    pub tolerance: f64,
}

impl ShootingConfig {
    pub fn new(n: usize, lambda_sign: i8, r0: f64) -> Self {
        Self {
            n,
            lambda_sign,
            cross_curvature: 1,
            r0,
            kappa: 1.0,
            step: 1e-4,
            s_max: 10.0,
            tolerance: 1e-6,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n < 3 {
            return bad(format!("dimension must be >= 3, got {}", self.n));
        }
        if !matches!(self.lambda_sign, -1 | 1) || !matches!(self.cross_curvature, -1..=1) {
            return bad("lambda_sign must be ±1 and cross_curvature in {-1, 0, 1}".into());
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return bad(format!("step must be positive, got {}", self.step));
        }
        if self.step < 1e-12 {
            return Err(Error::StepUnderflow(self.step));
        }
        if !(self.r0 > 0.0 && self.kappa > 0.0 && self.tolerance > 0.0) {
            return bad("r0, kappa and tolerance must be positive".into());
        }
        if self.lambda_sign > 0 && self.cross_curvature > 0 && self.r0 > 1.0 {
            return bad(format!("spherical horizons with lambda > 0 need r0 <= 1, got {}", self.r0));
        }
        if !(self.s_max > self.step / 10.0) {
            return bad(format!("s_max {} is shorter than the series start", self.s_max));
        }
        Ok(())
    }
}

/// Derivative of `(u, u', φ, φ')` with respect to arclength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    pub u: f64,
    pub u_dot: f64,
    pub phi: f64,
    pub phi_dot: f64,
}

pub fn reduced_rhs(state: &ShootingState, n: usize, lambda_sign: i8) -> Result<StateDerivative> {
    if !(state.u > 0.0) {
        return Err(Error::HorizonCrossing { s: state.s });
    }
    let nf = n as f64;
    let s = lambda_sign as f64;
    Ok(StateDerivative {
        u: state.u_dot,
        u_dot: -s * nf * state.u - (nf - 1.0) * state.phi_dot / state.phi * state.u_dot,
        phi: state.phi_dot,
        phi_dot: state.u_dot * state.phi_dot / state.u,
    })
}

pub fn constraint(state: &ShootingState, n: usize, lambda_sign: i8, k: f64) -> f64 {
    let nf = n as f64;
    let (u, du, phi, dphi) = (state.u, state.u_dot, state.phi, state.phi_dot);
    lambda_sign as f64 * nf * (nf - 1.0)
        + 2.0 * (nf - 1.0) * du * dphi / (u * phi)
        + (nf - 1.0) * (nf - 2.0) * (dphi * dphi - k) / (phi * phi)
}

const SERIES_ORDER: usize = 14;

fn series_mul(a: &[f64], b: &[f64], j: usize) -> f64 {
    (0..=j).map(|i| a[i] * b[j - i]).sum()
}

fn series_deriv(a: &[f64]) -> Vec<f64> {
    (0..a.len()).map(|i| if i + 1 < a.len() { (i + 1) as f64 * a[i + 1] } else { 0.0 }).collect()
}

fn series_recip(a: &[f64]) -> Vec<f64> {
    let mut q = vec![0.0; a.len()];
    for k in 0..a.len() {
        let acc: f64 = (0..k).map(|j| q[j] * a[k - j]).sum();
        q[k] = ((k == 0) as u8 as f64 - acc) / a[0];
    }
    q
}

/// Taylor coefficients of `u` and `φ` at the horizon `s = 0`.
///
/// `u = κ s + ...`, `φ = r0 + (c/2) s² + ...` with `c = (n-2)k/(2 r0) - s_Λ n r0 / 2` fixed by the
/// constraint; higher coefficients follow order by order from the two evolution equations.
pub fn horizon_series(config: &ShootingConfig) -> (Vec<f64>, Vec<f64>) {
    let n = config.n as f64;
    let s = config.lambda_sign as f64;
    let k = config.cross_curvature as f64;
    let r0 = config.r0;
    let len = SERIES_ORDER + 2;
    let mut u = vec![0.0; len];
    let mut phi = vec![0.0; len];
    u[1] = config.kappa;
    phi[0] = r0;
    phi[2] = ((n - 2.0) * k / (2.0 * r0) - s * n * r0 / 2.0) / 2.0;
    for o in 2..=SERIES_ORDER {
        // u'' = -s n u - (n-1) φ' u' / φ at order o-2.
        let j = o - 2;
        let dphi = series_deriv(&phi);
        let du = series_deriv(&u);
        let inv_phi = series_recip(&phi);
        let prod: Vec<f64> = (0..len).map(|i| series_mul(&dphi, &du, i)).collect();
        let ratio = series_mul(&prod, &inv_phi, j);
        u[o] = (-s * n * u[j] - (n - 1.0) * ratio) / ((j + 2) as f64 * (j + 1) as f64);

        // u φ'' - u' φ' = 0 at order o is linear in φ_{o+1} with coefficient u_1 (o+1)(o-1).
        if o + 1 < len {
            let du = series_deriv(&u);
            let ddphi = series_deriv(&dphi);
            let rest = series_mul(&u, &ddphi, o) - series_mul(&du, &dphi, o);
            phi[o + 1] = -rest / (u[1] * (o + 1) as f64 * (o - 1) as f64);
        }
    }
    (u, phi)
}

fn eval_series(c: &[f64], x: f64) -> (f64, f64) {
    let value = c.iter().rev().fold(0.0, |acc, a| acc * x + a);
    let d = series_deriv(c);
    (value, d.iter().rev().fold(0.0, |acc, a| acc * x + a))
}

/// State at `s = step / 10` from the horizon power series.
pub fn horizon_series_start(config: &ShootingConfig) -> Result<ShootingState> {
    config.validate()?;
    let eps = config.step / 10.0;
    let (u, phi) = horizon_series(config);
    let (u0, du0) = eval_series(&u, eps);
    let (p0, dp0) = eval_series(&phi, eps);
    let mut st = ShootingState { s: eps, u: u0, u_dot: du0, phi: p0, phi_dot: dp0, constraint: 0.0 };
    st.constraint = constraint(&st, config.n, config.lambda_sign, config.cross_curvature as f64);
    Ok(st)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub config: ShootingConfig,
    pub states: Vec<ShootingState>,
    /// Final state when the integration stopped at `u' = 0`.
    pub extremum: Option<ShootingState>,
    pub max_drift: f64,
}

impl Trajectory {
    pub fn last(&self) -> &ShootingState {
        self.states.last().expect("trajectories are nonempty")
    }

    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<f64>> = self
            .states
            .iter()
            .map(|s| vec![s.s, s.u, s.u_dot, s.phi, s.phi_dot, s.constraint])
            .collect();
        crate::csv::to_csv(&["s", "u", "u_dot", "phi", "phi_dot", "constraint"], &rows)
    }
}

fn rk4_step(st: &ShootingState, h: f64, cfg: &ShootingConfig) -> Result<ShootingState> {
    let f = |y: &ShootingState| reduced_rhs(y, cfg.n, cfg.lambda_sign);
    let shift = |y: &ShootingState, d: &StateDerivative, a: f64| ShootingState {
        s: y.s + a,
        u: y.u + a * d.u,
        u_dot: y.u_dot + a * d.u_dot,
        phi: y.phi + a * d.phi,
        phi_dot: y.phi_dot + a * d.phi_dot,
        constraint: 0.0,
    };
    let k1 = f(st)?;
    let k2 = f(&shift(st, &k1, h / 2.0))?;
    let k3 = f(&shift(st, &k2, h / 2.0))?;
    let k4 = f(&shift(st, &k3, h))?;
    let comb = |a: f64, b: f64, c: f64, d: f64| (a + 2.0 * b + 2.0 * c + d) / 6.0;
    let mut out = ShootingState {
        s: st.s + h,
        u: st.u + h * comb(k1.u, k2.u, k3.u, k4.u),
        u_dot: st.u_dot + h * comb(k1.u_dot, k2.u_dot, k3.u_dot, k4.u_dot),
        phi: st.phi + h * comb(k1.phi, k2.phi, k3.phi, k4.phi),
        phi_dot: st.phi_dot + h * comb(k1.phi_dot, k2.phi_dot, k3.phi_dot, k4.phi_dot),
        constraint: 0.0,
    };
    if !(out.u > 0.0) {
        return Err(Error::HorizonCrossing { s: out.s });
    }
    if !(out.phi > 0.0) {
        return Err(Error::InvalidParameter(format!("warping function vanished at s = {}", out.s)));
    }
    out.constraint = constraint(&out, cfg.n, cfg.lambda_sign, cfg.cross_curvature as f64);
    Ok(out)
}

/// Fixed-step RK4 from the series start until `u' = 0` or `s_max`.
pub fn integrate(config: &ShootingConfig) -> Result<Trajectory> {
    let start = horizon_series_start(config)?;
    let h = config.step;
    let mut states = vec![start];
    let mut max_drift = start.constraint.abs();
    let mut extremum = None;
    loop {
        let cur = *states.last().expect("nonempty");
        let remaining = config.s_max - cur.s;
        if remaining <= 1e-14 * config.s_max.max(1.0) {
            break;
        }
        let step = h.min(remaining);
        let next = rk4_step(&cur, step, config)?;
        if next.u_dot <= 0.0 && cur.u_dot > 0.0 {
            // Bisect the step length for the sign change of u'.
            let (mut lo, mut hi) = (0.0, step);
            let mut best = next;
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                let trial = rk4_step(&cur, mid, config)?;
                if trial.u_dot > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                    best = trial;
                }
            }
            let at = rk4_step(&cur, 0.5 * (lo + hi), config).unwrap_or(best);
            max_drift = max_drift.max(at.constraint.abs());
            states.push(at);
            extremum = Some(at);
            break;
        }
        max_drift = max_drift.max(next.constraint.abs());
        if max_drift > config.tolerance {
            return Err(Error::ConstraintDrift {
                s: next.s,
                drift: max_drift,
                tolerance: config.tolerance,
            });
        }
        states.push(next);
    }
    if max_drift > config.tolerance {
        let s = states.last().map_or(0.0, |st| st.s);
        return Err(Error::ConstraintDrift { s, drift: max_drift, tolerance: config.tolerance });
    }
    Ok(Trajectory { config: *config, states, extremum, max_drift })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let nf = order as f64;
    (0..order)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=order {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = nf * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `∫ dr/√W` from the horizon `r0` to `r`, with `r = r0 ± ξ²` removing the endpoint
/// singularity.
pub fn areal_arclength(w: impl Fn(f64) -> f64, r0: f64, r: f64) -> f64 {
    let sign = if r >= r0 { 1.0 } else { -1.0 };
    let xi_max = (r - r0).abs().sqrt();
    let nodes = gauss_legendre(24);
    let panels = 16;
    let width = xi_max / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = p as f64 * width;
        for &(x, wgt) in &nodes {
            let xi = a + 0.5 * width * (x + 1.0);
            let rr = r0 + sign * xi * xi;
            total += wgt * 0.5 * width * 2.0 * xi / w(rr).sqrt();
        }
    }
    total
}

/// Comparison of one horizon shot with the closed-form Schwarzschild–de Sitter solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirkhoffRow {
    pub mass: f64,
    pub label: String,
    pub r0: f64,
    /// `|Du|` of the catalog model on this horizon.
    pub kappa_raw: f64,
    /// `1 / max u` of the shot normalised to unit `|Du|`, i.e. the surface gravity it predicts.
    pub kappa_normalized: f64,
    /// `k±(m)` for the same horizon.
    pub kappa_model: f64,
    pub u_max: f64,
    pub u_max_error: f64,
    pub locus_radius: f64,
    pub locus_error: f64,
    /// `max |κ u_shot - √W(φ)|` along the trajectory.
    pub profile_deviation: f64,
    /// `max |s - ∫ dr/√W|` at sampled states.
    pub arclength_deviation: f64,
    pub max_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirkhoffReport {
    pub n: usize,
    pub step: f64,
    pub rows: Vec<BirkhoffRow>,
}

impl BirkhoffReport {
    pub fn max_of(&self, f: impl Fn(&BirkhoffRow) -> f64) -> f64 {
        self.rows.iter().map(f).fold(0.0, f64::max)
    }
}

/// Step used for a shot from areal radius `r0`: the base step, shrunk for small horizons where
/// the solution varies on the scale `r0`.
pub fn scaled_step(base: f64, r0: f64) -> f64 {
    base * r0.min(1.0)
}

/// Shoots from one Schwarzschild–de Sitter horizon with unit `|Du|` and compares with the
/// catalog solution of mass `m`.
pub fn shoot_sds_horizon(n: usize, m: f64, r0: f64, label: &str, base_step: f64) -> Result<BirkhoffRow> {
    let nf = n as f64;
    let w = |r: f64| 1.0 - r * r - 2.0 * m * r.powi(2 - n as i32);
    let half_slope = |r: f64| (-2.0 * r - 2.0 * m * (2.0 - nf) * r.powi(1 - n as i32)).abs() / 2.0;
    let mut cfg = ShootingConfig::new(n, 1, r0);
    cfg.step = scaled_step(base_step, r0);
    cfg.s_max = 2.0 * PI;
    let traj = integrate(&cfg)?;
    let top = traj.extremum.ok_or_else(|| {
        Error::RootFinding(format!("no maximum of u reached from r0 = {r0}"))
    })?;
    let kappa_raw = half_slope(r0);
    let u_max = kappa_raw * top.u;
    let u_max_closed = sds_u_max(n, m)?;
    let locus_closed = ((nf - 2.0) * m).powf(1.0 / nf);
    let profile_deviation = traj
        .states
        .iter()
        .map(|st| (kappa_raw * st.u - w(st.phi).max(0.0).sqrt()).abs())
        .fold(0.0, f64::max);
    let degenerate = (m - crate::catalog::m_max(n)?).abs() < 1e-15;
    let arclength_deviation = if degenerate {
        0.0
    } else {
        let count = traj.states.len();
        (1..=8)
            .map(|i| &traj.states[(i * (count - 1)) / 8])
            .map(|st| (st.s - areal_arclength(w, r0, st.phi)).abs())
            .fold(0.0, f64::max)
    };
    let kappa_model = if label == "inner" { k_minus(n, m)? } else { k_plus(n, m)? };
    Ok(BirkhoffRow {
        mass: m,
        label: label.to_owned(),
        r0,
        kappa_raw,
        kappa_normalized: 1.0 / top.u,
        kappa_model,
        u_max,
        u_max_error: (u_max - u_max_closed).abs(),
        locus_radius: top.phi,
        locus_error: (top.phi - locus_closed).abs(),
        profile_deviation,
        arclength_deviation,
        max_drift: traj.max_drift,
    })
}

/// Shoots from both horizons for each mass and compares with the catalog family.
pub fn birkhoff_check(n: usize, m_grid: &[f64], base_step: f64) -> Result<BirkhoffReport> {
    let mm = crate::catalog::m_max(n)?;
    let mut rows = Vec::new();
    for &m in m_grid {
        if !(m > 0.0 && m < mm) {
            return Err(Error::InvalidParameter(format!("mass {m} outside (0, {mm})")));
        }
        let (rm, rp) = sds_radii(n, m)?;
        if let Some(rm) = rm {
            rows.push(shoot_sds_horizon(n, m, rm, "inner", base_step)?);
        }
        rows.push(shoot_sds_horizon(n, m, rp, "outer", base_step)?);
    }
    Ok(BirkhoffReport { n, step: base_step, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn state(s: f64, u: f64, du: f64, phi: f64, dphi: f64) -> ShootingState {
        ShootingState { s, u, u_dot: du, phi, phi_dot: dphi, constraint: 0.0 }
    }

    #[test]
    fn de_sitter_satisfies_reduced_system() {
        let s = 0.3f64;
        for n in [3, 4, 6] {
            let st = state(s, s.sin(), s.cos(), s.cos(), -s.sin());
            let d = reduced_rhs(&st, n, 1).unwrap();
            assert_abs_diff_eq!(d.u_dot, -s.sin(), epsilon = 1e-12);
            assert_abs_diff_eq!(d.phi_dot, -s.cos(), epsilon = 1e-12);
            assert!(constraint(&st, n, 1, 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn anti_de_sitter_satisfies_reduced_system() {
        // W = 1 + r², s = asinh r: φ = sinh s, u = cosh s.
        let s = 0.8f64;
        let st = state(s, s.cosh(), s.sinh(), s.sinh(), s.cosh());
        let d = reduced_rhs(&st, 3, -1).unwrap();
        assert_abs_diff_eq!(d.u_dot, s.cosh(), epsilon = 1e-12);
        assert_abs_diff_eq!(d.phi_dot, s.sinh(), epsilon = 1e-12);
        assert!(constraint(&st, 3, -1, 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_warp_is_consistent() {
        let st = state(0.2, 0.5, 0.7, 0.8, 0.0);
        assert_eq!(reduced_rhs(&st, 3, 1).unwrap().phi_dot, 0.0);
    }

    #[test]
    fn zero_potential_is_a_crossing() {
        assert!(matches!(
            reduced_rhs(&state(0.1, 0.0, 1.0, 1.0, 0.0), 3, 1),
            Err(Error::HorizonCrossing { .. })
        ));
    }

    #[test]
    fn series_reproduces_de_sitter() {
        let cfg = ShootingConfig::new(3, 1, 1.0);
        let (u, phi) = horizon_series(&cfg);
        assert_abs_diff_eq!(phi[2], -0.5, epsilon = 1e-11);
        // sin s = s - s³/6 + s⁵/120, cos s = 1 - s²/2 + s⁴/24.
        assert_abs_diff_eq!(u[3], -1.0 / 6.0, epsilon = 1e-11);
        assert_abs_diff_eq!(u[5], 1.0 / 120.0, epsilon = 1e-10);
        assert_abs_diff_eq!(phi[4], 1.0 / 24.0, epsilon = 1e-10);
        assert_abs_diff_eq!(u[2], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn start_coefficient_formula() {
        let cfg = ShootingConfig::new(3, 1, 0.5);
        let (_, phi) = horizon_series(&cfg);
        let c = 1.0 / (2.0 * 0.5) - 3.0 * 0.5 / 2.0;
        assert_abs_diff_eq!(2.0 * phi[2], c, epsilon = 1e-15);
    }

    #[test]
    fn kappa_scales_u_only() {
        let (_, rp) = sds_radii(3, 0.1).unwrap();
        let mut a = ShootingConfig::new(3, 1, rp);
        a.step = 1e-3;
        a.s_max = 0.5;
        let mut b = a;
        b.kappa = 2.0;
        let ta = integrate(&a).unwrap();
        let tb = integrate(&b).unwrap();
        for (x, y) in ta.states.iter().zip(&tb.states) {
            assert_abs_diff_eq!(x.phi, y.phi, epsilon = 1e-12);
            assert_abs_diff_eq!(2.0 * x.u, y.u, epsilon = 1e-12);
        }
    }

    #[test]
    fn de_sitter_shot() {
        let mut cfg = ShootingConfig::new(3, 1, 1.0);
        cfg.s_max = 1.0;
        let t = integrate(&cfg).unwrap();
        let end = t.last();
        assert_abs_diff_eq!(end.s, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(end.phi, 1f64.cos(), epsilon = 1e-8);
        assert_abs_diff_eq!(end.u, 1f64.sin(), epsilon = 1e-8);
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = ShootingConfig::new(3, 1, 1.5);
        assert!(integrate(&cfg).is_err());
        cfg.r0 = 0.5;
        cfg.step = 0.0;
        assert!(integrate(&cfg).is_err());
        cfg.step = 1e-13;
        assert!(matches!(integrate(&cfg), Err(Error::StepUnderflow(_))));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre(10);
        let integral: f64 = rule.iter().map(|(x, w)| w * x.powi(18)).sum();
        assert_abs_diff_eq!(integral, 2.0 / 19.0, epsilon = 1e-14);
    }

    #[test]
    fn arclength_of_de_sitter() {
        // ∫_r^1 dr/√(1 - r²) = acos r.
        let s = areal_arclength(|r| 1.0 - r * r, 1.0, 0.6);
        assert_abs_diff_eq!(s, 0.6f64.acos(), epsilon = 1e-12);
    }

    #[test]
    fn sds_shot_matches_closed_form() {
        let row = shoot_sds_horizon(3, 0.1, sds_radii(3, 0.1).unwrap().1, "outer", 1e-3).unwrap();
        assert!(row.u_max_error < 1e-8, "{row:?}");
        assert!(row.locus_error < 1e-8, "{row:?}");
        assert!(row.profile_deviation < 1e-8, "{row:?}");
        assert!(row.arclength_deviation < 1e-8, "{row:?}");
        assert_abs_diff_eq!(row.kappa_normalized, row.kappa_model, epsilon = 1e-8);
    }
}
