//! Truncated Taylor series ("jets") for forward-mode derivatives of radial profiles.
//!
//! A `Jet<N>` stores the first `N` Taylor coefficients `c_k = f^(k)(x0) / k!` of a
//! function around a base point. Arithmetic on jets is exact up to the truncation
//! order, so composing closed-form profiles through jets yields analytic
//! derivatives without symbolic algebra.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Default jet length used by the geometry code (derivatives up to order 5).
pub const ORDER: usize = 6;

/// Jet with the default length.
pub type Jet6 = Jet<ORDER>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<const N: usize> {
    coeffs: [f64; N],
}

impl<const N: usize> Jet<N> {
    pub fn constant(value: f64) -> Self {
        let mut coeffs = [0.0; N];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// The independent variable expanded at `x`.
    pub fn variable(x: f64) -> Self {
        let mut coeffs = [0.0; N];
        coeffs[0] = x;
        if N > 1 {
            coeffs[1] = 1.0;
        }
        Self { coeffs }
    }

    pub fn from_coeffs(coeffs: [f64; N]) -> Self {
        Self { coeffs }
    }

    /// Builds a jet from plain derivatives `[f, f', f'', ...]`.
    pub fn from_derivatives(derivs: &[f64]) -> Self {
        let mut coeffs = [0.0; N];
        let mut fact = 1.0;
        for (k, slot) in coeffs.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            if let Some(d) = derivs.get(k) {
                *slot = d / fact;
            }
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64; N] {
        &self.coeffs
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// k-th derivative at the base point.
    pub fn deriv(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.coeffs[k] * fact
    }

    /// Derivative with respect to the expansion variable. The top coefficient is
    /// lost, so the result is accurate to one order less.
    pub fn derivative(&self) -> Self {
        let mut coeffs = [0.0; N];
        for k in 0..N - 1 {
            coeffs[k] = (k + 1) as f64 * self.coeffs[k + 1];
        }
        Self { coeffs }
    }

    /// Evaluates the truncated polynomial at offset `h` from the base point.
    pub fn eval_offset(&self, h: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * h + c)
    }

    pub fn scale(&self, a: f64) -> Self {
        let mut coeffs = self.coeffs;
        coeffs.iter_mut().for_each(|c| *c *= a);
        Self { coeffs }
    }

    pub fn recip(&self) -> Self {
        Self::constant(1.0) / *self
    }

    pub fn sqrt(&self) -> Self {
        let a = &self.coeffs;
        let mut s = [0.0; N];
        s[0] = a[0].sqrt();
        for k in 1..N {
            let mut acc = a[k];
            for j in 1..k {
                acc -= s[j] * s[k - j];
            }
            s[k] = acc / (2.0 * s[0]);
        }
        Self { coeffs: s }
    }

    /// Real power; requires a positive base value.
    pub fn powf(&self, p: f64) -> Self {
        let a = &self.coeffs;
        let mut y = [0.0; N];
        y[0] = a[0].powf(p);
        for k in 1..N {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += ((p + 1.0) * j as f64 - k as f64) * a[j] * y[k - j];
            }
            y[k] = acc / (k as f64 * a[0]);
        }
        Self { coeffs: y }
    }

    /// Integer power by repeated multiplication (valid for any base sign).
    pub fn powi(&self, p: i32) -> Self {
        let mut base = if p < 0 { self.recip() } else { *self };
        let mut e = p.unsigned_abs();
        let mut acc = Self::constant(1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let a = &self.coeffs;
        let mut y = [0.0; N];
        y[0] = a[0].exp();
        for k in 1..N {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * a[j] * y[k - j];
            }
            y[k] = acc / k as f64;
        }
        Self { coeffs: y }
    }

    fn trig_pair(&self, hyperbolic: bool) -> (Self, Self) {
        let a = &self.coeffs;
        let mut s = [0.0; N];
        let mut c = [0.0; N];
        if hyperbolic {
            s[0] = a[0].sinh();
            c[0] = a[0].cosh();
        } else {
            s[0] = a[0].sin();
            c[0] = a[0].cos();
        }
        let sign = if hyperbolic { 1.0 } else { -1.0 };
        for k in 1..N {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                ds += j as f64 * a[j] * c[k - j];
                dc += j as f64 * a[j] * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = sign * dc / k as f64;
        }
        (Self { coeffs: s }, Self { coeffs: c })
    }

    pub fn sin(&self) -> Self {
        self.trig_pair(false).0
    }

    pub fn cos(&self) -> Self {
        self.trig_pair(false).1
    }

    pub fn sinh(&self) -> Self {
        self.trig_pair(true).0
    }

    pub fn cosh(&self) -> Self {
        self.trig_pair(true).1
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
        self
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = [0.0; N];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = (0..=k).map(|j| self.coeffs[j] * rhs.coeffs[k - j]).sum();
        }
        Self { coeffs: out }
    }
}

impl<const N: usize> Div for Jet<N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let b = &rhs.coeffs;
        let mut q = [0.0; N];
        for k in 0..N {
            let mut acc = self.coeffs[k];
            for j in 0..k {
                acc -= q[j] * b[k - j];
            }
            q[k] = acc / b[0];
        }
        Self { coeffs: q }
    }
}

impl<const N: usize> Add<f64> for Jet<N> {
    type Output = Self;
    fn add(mut self, rhs: f64) -> Self {
        self.coeffs[0] += rhs;
        self
    }
}

impl<const N: usize> Sub<f64> for Jet<N> {
    type Output = Self;
    fn sub(mut self, rhs: f64) -> Self {
        self.coeffs[0] -= rhs;
        self
    }
}

impl<const N: usize> Mul<f64> for Jet<N> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl<const N: usize> Div<f64> for Jet<N> {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self.scale(1.0 / rhs)
    }
}

impl<const N: usize> Add<Jet<N>> for f64 {
    type Output = Jet<N>;
    fn add(self, rhs: Jet<N>) -> Jet<N> {
        rhs + self
    }
}

impl<const N: usize> Sub<Jet<N>> for f64 {
    type Output = Jet<N>;
    fn sub(self, rhs: Jet<N>) -> Jet<N> {
        -rhs + self
    }
}

impl<const N: usize> Mul<Jet<N>> for f64 {
    type Output = Jet<N>;
    fn mul(self, rhs: Jet<N>) -> Jet<N> {
        rhs.scale(self)
    }
}

impl<const N: usize> Div<Jet<N>> for f64 {
    type Output = Jet<N>;
    fn div(self, rhs: Jet<N>) -> Jet<N> {
        Jet::constant(self) / rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn central(f: impl Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64) {
        let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        (d1, d2)
    }

    #[test]
    fn polynomial_derivatives_are_exact() {
        // f = 3x^3 - 2x + 1 at x = 2: f' = 9x^2 - 2 = 34, f'' = 18x = 36, f''' = 18
        let x = Jet6::variable(2.0);
        let f = x * x * x * 3.0 - x * 2.0 + 1.0;
        assert_eq!(f.value(), 21.0);
        assert_eq!(f.deriv(1), 34.0);
        assert_eq!(f.deriv(2), 36.0);
        assert_eq!(f.deriv(3), 18.0);
        assert_eq!(f.deriv(4), 0.0);
    }

    #[test]
    fn elementary_functions_match_finite_differences() {
        let x0 = 0.7;
        let x = Jet6::variable(x0);
        let cases: Vec<(Jet6, Box<dyn Fn(f64) -> f64>)> = vec![
            (x.sqrt(), Box::new(|t: f64| t.sqrt())),
            (x.powf(-1.5), Box::new(|t: f64| t.powf(-1.5))),
            (x.sin(), Box::new(|t: f64| t.sin())),
            (x.cosh(), Box::new(|t: f64| t.cosh())),
            (x.exp(), Box::new(|t: f64| t.exp())),
            ((1.0 - x * x).sqrt() / x, Box::new(|t: f64| (1.0 - t * t).sqrt() / t)),
        ];
        for (jet, f) in cases {
            let (d1, d2) = central(&f, x0, 1e-4);
            assert_relative_eq!(jet.value(), f(x0), max_relative = 1e-15);
            assert_relative_eq!(jet.deriv(1), d1, max_relative = 1e-7);
            assert_relative_eq!(jet.deriv(2), d2, max_relative = 1e-5);
        }
    }

    #[test]
    fn powi_handles_negative_exponents_and_bases() {
        let x = Jet6::variable(-1.3);
        let p = x.powi(-3);
        // d/dx x^-3 = -3 x^-4
        assert_relative_eq!(p.value(), (-1.3f64).powi(-3), max_relative = 1e-15);
        assert_relative_eq!(p.deriv(1), -3.0 * (-1.3f64).powi(-4), max_relative = 1e-14);
        assert_relative_eq!(p.deriv(2), 12.0 * (-1.3f64).powi(-5), max_relative = 1e-14);
    }

    #[test]
    fn derivative_shifts_coefficients() {
        let x = Jet6::variable(0.5);
        let f = x.sin();
        let df = f.derivative();
        assert_relative_eq!(df.value(), 0.5f64.cos(), max_relative = 1e-15);
        assert_relative_eq!(df.deriv(1), -0.5f64.sin(), max_relative = 1e-14);
    }

    #[test]
    fn eval_offset_reproduces_taylor_polynomial() {
        let x = Jet::<12>::variable(0.0);
        let e = x.exp();
        assert_relative_eq!(e.eval_offset(0.1), 0.1f64.exp(), max_relative = 1e-14);
    }
}
