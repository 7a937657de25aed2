//! The concentration kernel `G(s) = 1 - (1 + s/4pi)^(-2 beta)`.
//!
//! `G(nu(Omega))` bounds the share of wavelet-transform energy a normalized
//! signal can place on a set of hyperbolic measure `nu(Omega)`; integrating it
//! against the distribution function of a weight bounds the operator norm.

use crate::error::{Error, Result};
use crate::problem::FOUR_PI;

/// Evaluates `G`, rejecting negative arguments.
pub fn g_eval(s: f64, beta: f64) -> Result<f64> {
    check(s, beta)?;
    Ok(g(s, beta))
}

/// Evaluates `G'(s) = (2 beta / 4pi) (1 + s/4pi)^(-2 beta - 1)`.
pub fn g_prime(s: f64, beta: f64) -> Result<f64> {
    check(s, beta)?;
    Ok(g_deriv(s, beta))
}

/// Upper bound on `|G''|` over `s >= 0`, attained at `s = 0`.
pub fn g_curvature_bound(beta: f64) -> f64 {
    2.0 * beta * (2.0 * beta + 1.0) / (FOUR_PI * FOUR_PI)
}

#[inline]
pub(crate) fn g(s: f64, beta: f64) -> f64 {
    -(-2.0 * beta * (s / FOUR_PI).ln_1p()).exp_m1()
}

#[inline]
pub(crate) fn g_deriv(s: f64, beta: f64) -> f64 {
    2.0 * beta / FOUR_PI * (-(2.0 * beta + 1.0) * (s / FOUR_PI).ln_1p()).exp()
}

fn check(s: f64, beta: f64) -> Result<()> {
    if s.is_nan() || s < 0.0 {
        return Err(Error::domain(format!("G is defined for s >= 0, got {s}")));
    }
    if !(beta > 0.0) {
        return Err(Error::domain(format!("beta must be positive, got {beta}")));
    }
    Ok(())
}
