//! Scalar root finding on bracketing intervals.

use crate::error::{Error, Result};

/// Bisection on `[a, b]` until the bracket is narrower than `abs_tol + rel_tol * |mid|`.
///
/// `f(a)` and `f(b)` must have opposite signs (a zero at either end is returned directly).
pub fn bisect<F>(mut f: F, mut a: f64, mut b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::RootFinding(format!(
            "no sign change on [{a}, {b}]: f(a) = {fa}, f(b) = {fb}"
        )));
    }
    for _ in 0..2000 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= abs_tol + rel_tol * mid.abs() || mid == a || mid == b {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Expands `hi` geometrically from `lo` until `f` changes sign, returning the bracket.
pub fn bracket_upward<F>(mut f: F, lo: f64, mut hi: f64, max_hi: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let flo = f(lo);
    let mut prev = lo;
    while hi <= max_hi {
        let fh = f(hi);
        if fh == 0.0 || fh.signum() != flo.signum() {
            return Ok((prev, hi));
        }
        prev = hi;
        hi *= 2.0;
    }
    Err(Error::RootFinding(format!(
        "no sign change found above {lo} up to {max_hi}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 0.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bisect_rejects_missing_sign_change() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 0.0).is_err());
    }

    #[test]
    fn bracket_grows_until_sign_change() {
        let (a, b) = bracket_upward(|x| x - 37.0, 1.0, 2.0, 1e6).unwrap();
        assert!(a < 37.0 && 37.0 <= b);
    }
}
