//! Scalar root finding for monotone functions.

use crate::error::{Error, Result};

/// Finds a root of `f` in `[lo, hi]` given values of opposite sign at the
/// ends, using the Illinois variant of regula falsi with a bisection
/// safeguard. Stops when the bracket is narrower than `x_tol` or `f`
/// vanishes.
pub fn illinois<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    mut f_hi: f64,
    x_tol: f64,
    max_iter: usize,
) -> Result<f64> {
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{lo:e}, {hi:e}]: f = {f_lo:e}, {f_hi:e}"
        )));
    }
    let mut side = 0i8;
    for _ in 0..max_iter {
        if (hi - lo).abs() <= x_tol {
            break;
        }
        let mut x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        let width = hi - lo;
        // Fall back to bisection when the secant point hugs an end.
        if !x.is_finite() || (x - lo).abs() < 1e-3 * width.abs() || (hi - x).abs() < 1e-3 * width.abs() {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
    }
    Ok(if f_lo.abs() < f_hi.abs() { lo } else { hi })
}

/// Expands `[x, x + step]` geometrically (in the direction of `step`) until
/// `f` changes sign relative to `f(x0)`. Returns the bracket ordered and its
/// end values.
pub fn expand_bracket<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    x0: f64,
    f0: f64,
    step: f64,
    max_steps: usize,
) -> Result<(f64, f64, f64, f64)> {
    let mut prev = x0;
    let mut f_prev = f0;
    let mut step = step;
    for _ in 0..max_steps {
        let x = prev + step;
        let fx = f(x)?;
        if fx == 0.0 || fx.signum() != f_prev.signum() {
            return Ok(if x < prev {
                (x, prev, fx, f_prev)
            } else {
                (prev, x, f_prev, fx)
            });
        }
        prev = x;
        f_prev = fx;
        step *= 2.0;
    }
    Err(Error::Bracket(format!(
        "no sign change after {max_steps} expansions from {x0:e} (last point {prev:e}, f = {f_prev:e})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cube_root() {
        let f = |x: f64| Ok(x * x * x - 2.0);
        let root = illinois(f, 0.0, 2.0, -2.0, 6.0, 1e-15, 200).unwrap();
        assert!((root - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn expands_then_solves() {
        let f = |x: f64| Ok(x.exp() - 1e6);
        let (lo, hi, flo, fhi) = expand_bracket(f, 0.0, 1.0 - 1e6, 1.0, 60).unwrap();
        let root = illinois(f, lo, hi, flo, fhi, 1e-14, 200).unwrap();
        assert!((root - 1e6f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_missing_sign_change() {
        let f = |x: f64| Ok(x * x + 1.0);
        assert!(illinois(f, -1.0, 1.0, 2.0, 2.0, 1e-12, 10).is_err());
        assert!(expand_bracket(f, 0.0, 1.0, 1.0, 5).is_err());
    }
}
