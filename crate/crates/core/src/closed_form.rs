//! The single-constraint regime: one budget binds and the other is slack.
//!
//! The extremal weight for the `L^e` budget alone is the radial power profile
//! `lambda (1 - d)^(1/alpha_e)` with `lambda = budget (4 pi sigma_e)^(-1/e)`.
//! Its distribution function is `4 pi ((t/lambda)^(-alpha_e) - 1)` on
//! `(0, lambda]`, and the resulting bound is
//! `2 beta (4 pi)^(-1/e) sigma_e^kappa_e * budget`.
//!
//! The profile is written as a decreasing power of `1 - d`. A reciprocal
//! exponent `(1 - d)^(-alpha_e)` would grow toward the boundary and have
//! infinite norm, so it cannot be the extremal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{
    classify_regime, cross_log_ratio, DerivedConstants, ExponentConstants, ProblemParams, RegimeKind,
    Side, FOUR_PI,
};
use crate::profile::{distribution_of_profile, RadialProfile};
use crate::quadrature::{integrate_graded, QuadratureConfig};

/// A norm that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CrossNorm {
    Finite(f64),
    Infinite,
}

impl CrossNorm {
    pub fn value(self) -> Option<f64> {
        match self {
            CrossNorm::Finite(v) => Some(v),
            CrossNorm::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleConstraintResult {
    pub side: Side,
    pub bound: f64,
    /// Amplitude of the extremal profile (its value at the centre).
    pub lambda: f64,
    /// Norm of the extremal in the other exponent.
    pub cross_norm: CrossNorm,
}

/// `2 beta (4 pi)^(-1/e) sigma_e^kappa_e * budget`, the norm bound when only
/// the `L^e` budget is imposed.
pub fn single_side_bound(beta: f64, c: &ExponentConstants, budget: f64) -> f64 {
    let e = c.exponent;
    2.0 * beta * (-(FOUR_PI.ln()) / e + c.kappa * c.sigma.ln()).exp() * budget
}

/// `budget (4 pi sigma_e)^(-1/e)`.
pub fn profile_amplitude(c: &ExponentConstants, budget: f64) -> f64 {
    budget * (-(FOUR_PI * c.sigma).ln() / c.exponent).exp()
}

/// `||F_e||_{e'}` for the `L^e` extremal with the given budget.
pub fn cross_norm(c: &ExponentConstants, other_exponent: f64, budget: f64) -> CrossNorm {
    match cross_log_ratio(c, other_exponent) {
        Some(l) => CrossNorm::Finite(l.exp() * budget),
        None => CrossNorm::Infinite,
    }
}

fn side_parts(params: &ProblemParams, consts: &DerivedConstants, side: Side) -> (ExponentConstants, f64, f64) {
    match side {
        Side::P => (consts.p, params.a, params.q),
        Side::Q => (consts.q, params.b, params.p),
    }
}

/// Closed-form bound for the regime where only `side`'s budget binds.
pub fn single_bound(params: &ProblemParams, consts: &DerivedConstants, side: Side) -> Result<SingleConstraintResult> {
    let expected = match side {
        Side::P => RegimeKind::SingleP,
        Side::Q => RegimeKind::SingleQ,
    };
    let regime = classify_regime(params, consts);
    if regime.kind != expected {
        return Err(Error::RegimeMismatch(format!(
            "instance with B/A = {} is in regime {}, not {expected}",
            params.ratio(),
            regime.kind
        )));
    }
    Ok(single_result(params, consts, side))
}

/// Same as [`single_bound`] without the regime check; the result is the
/// optimum of the one-budget problem.
pub fn single_result(params: &ProblemParams, consts: &DerivedConstants, side: Side) -> SingleConstraintResult {
    let (c, budget, other) = side_parts(params, consts, side);
    SingleConstraintResult {
        side,
        bound: single_side_bound(params.beta, &c, budget),
        lambda: profile_amplitude(&c, budget),
        cross_norm: cross_norm(&c, other, budget),
    }
}

/// The extremal magnitude `lambda (1 - d)^(1/alpha_e)` as a function of `d`.
pub fn single_profile(consts: &DerivedConstants, lambda: f64, side: Side) -> Result<RadialProfile> {
    let alpha = consts.side(side).alpha;
    if !(alpha > 0.0) {
        return Err(Error::domain("alpha must be positive (exponent 1 is excluded)"));
    }
    if !(lambda > 0.0) {
        return Err(Error::domain(format!("profile amplitude must be positive, got {lambda}")));
    }
    Ok(RadialProfile::Power { lambda, alpha })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    pub exponent: f64,
    /// `e int t^(e-1) v(t) dt` by quadrature, or infinite.
    pub numeric: CrossNorm,
    pub expected: CrossNorm,
    pub rel_residual: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub active: MomentCheck,
    pub cross: MomentCheck,
}

/// `e int_0^inf t^(e-1) v(t) dt` for the power-profile distribution, or
/// `None` if it diverges at `t = 0` (`e <= alpha`).
pub fn power_profile_moment(lambda: f64, alpha: f64, exponent: f64, cfg: &QuadratureConfig) -> Result<Option<f64>> {
    if exponent <= alpha {
        return Ok(None);
    }
    let v = distribution_of_profile(&RadialProfile::Power { lambda, alpha });
    // t = lambda s; the integrand behaves like s^(e - 1 - alpha) at 0.
    let grading = 1.0 / (exponent - alpha);
    let r = integrate_graded(
        |s| s.powf(exponent - 1.0) * v.eval(lambda * s),
        0.0,
        1.0,
        grading,
        cfg,
    )?;
    Ok(Some(exponent * lambda.powf(exponent) * r.value))
}

/// Checks that the extremal profile of `side` spends exactly its budget and
/// that its other moment matches the closed-form cross norm.
pub fn verify_moment_identities(
    params: &ProblemParams,
    consts: &DerivedConstants,
    lambda: f64,
    side: Side,
    cfg: &QuadratureConfig,
) -> Result<MomentReport> {
    let (c, _, other) = side_parts(params, consts, side);
    let alpha = c.alpha;
    let check = |exponent: f64, expected: Option<f64>| -> Result<MomentCheck> {
        let numeric = power_profile_moment(lambda, alpha, exponent, cfg)?;
        let rel_residual = match (numeric, expected) {
            (Some(n), Some(e)) => Some(((n - e) / e).abs()),
            _ => None,
        };
        Ok(MomentCheck {
            exponent,
            numeric: numeric.map_or(CrossNorm::Infinite, CrossNorm::Finite),
            expected: expected.map_or(CrossNorm::Infinite, CrossNorm::Finite),
            rel_residual,
        })
    };
    let e = c.exponent;
    let active_expected = FOUR_PI * c.sigma * lambda.powf(e);
    let cross_expected = if other > alpha {
        Some(FOUR_PI * lambda.powf(other) * alpha / (other - alpha))
    } else {
        None
    };
    Ok(MomentReport {
        active: check(e, Some(active_expected))?,
        cross: check(other, cross_expected)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::derive_constants;
    use crate::profile::concentration_functional;
    use approx::assert_relative_eq;

    fn reference(b: f64) -> (ProblemParams, DerivedConstants) {
        let p = ProblemParams::new(0.5, 2.0, 4.0, 1.0, b).unwrap();
        let c = derive_constants(&p).unwrap();
        (p, c)
    }

    #[test]
    fn reference_bounds() {
        let (params, consts) = reference(1.0);
        let r = single_bound(&params, &consts, Side::P).unwrap();
        assert_relative_eq!(r.bound, 1.0 / (12.0 * std::f64::consts::PI).sqrt(), max_relative = 1e-14);
        assert!((r.bound - 0.162868).abs() < 1e-6);

        let q_only = single_side_bound(0.5, &consts.q, 1.0);
        let direct = FOUR_PI.powf(-0.25) * 0.6f64.powf(0.75);
        assert_relative_eq!(q_only, direct, max_relative = 1e-14);
        assert!((q_only - 0.36208).abs() < 1e-4);
    }

    #[test]
    fn cross_norm_is_r2_times_budget() {
        let (params, consts) = reference(1.0);
        let r = single_bound(&params, &consts, Side::P).unwrap();
        assert_relative_eq!(
            r.cross_norm.value().unwrap(),
            consts.r2.value().unwrap(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn regime_mismatch_is_rejected() {
        let (params, consts) = reference(0.4);
        assert!(matches!(single_bound(&params, &consts, Side::P), Err(Error::RegimeMismatch(_))));
        let (params, consts) = reference(1.0);
        assert!(matches!(single_bound(&params, &consts, Side::Q), Err(Error::RegimeMismatch(_))));
    }

    #[test]
    fn profile_endpoints() {
        let (_, consts) = reference(1.0);
        let prof = single_profile(&consts, 1.7, Side::P).unwrap();
        assert_eq!(prof.eval(0.0), 1.7);
        assert!(prof.eval(1.0 - 1e-9) < 1e-15);
        assert!(single_profile(&consts, 0.0, Side::P).is_err());
    }

    #[test]
    fn profile_distribution_reference_value() {
        let (_, consts) = reference(1.0);
        let prof = single_profile(&consts, 1.0, Side::P).unwrap();
        let v = distribution_of_profile(&prof);
        assert_relative_eq!(v.eval(0.25), FOUR_PI, max_relative = 1e-14);
    }

    #[test]
    fn moments_match_budget_and_threshold() {
        let (params, consts) = reference(1.0);
        let cfg = QuadratureConfig::default();
        let lambda = profile_amplitude(&consts.p, 1.0);
        let rep = verify_moment_identities(&params, &consts, lambda, Side::P, &cfg).unwrap();
        let p_moment = rep.active.numeric.value().unwrap();
        assert_relative_eq!(p_moment, 1.0, max_relative = 1e-10);
        let q_norm = rep.cross.numeric.value().unwrap().powf(0.25);
        assert_relative_eq!(q_norm, consts.r2.value().unwrap(), max_relative = 1e-10);
    }

    #[test]
    fn divergent_cross_moment_is_flagged() {
        // alpha_p = 3 / 1.2 = 2.5 >= q = 1.5
        let params = ProblemParams::new(0.1, 4.0, 1.5, 1.0, 1.0).unwrap();
        let consts = derive_constants(&params).unwrap();
        assert_relative_eq!(consts.p.alpha, 2.5, max_relative = 1e-15);
        let cfg = QuadratureConfig::default();
        let rep = verify_moment_identities(&params, &consts, 1.0, Side::P, &cfg).unwrap();
        assert_eq!(rep.cross.numeric, CrossNorm::Infinite);
        assert_eq!(rep.cross.expected, CrossNorm::Infinite);
        assert!(rep.active.rel_residual.unwrap() < 1e-10);
    }

    #[test]
    fn bound_equals_concentration_functional() {
        let (params, consts) = reference(1.0);
        let cfg = QuadratureConfig::default();
        let r = single_bound(&params, &consts, Side::P).unwrap();
        let prof = single_profile(&consts, r.lambda, Side::P).unwrap();
        let integral = concentration_functional(&prof, params.beta, &cfg).unwrap();
        assert_relative_eq!(integral, r.bound, max_relative = 1e-10);
    }

    #[test]
    fn swap_symmetry() {
        let (params, consts) = reference(1.0);
        let sw = params.swapped();
        let sw_consts = derive_constants(&sw).unwrap();
        let a = single_bound(&params, &consts, Side::P).unwrap();
        let b = single_bound(&sw, &sw_consts, Side::Q).unwrap();
        assert_relative_eq!(a.bound, b.bound, max_relative = 1e-15);
        assert_relative_eq!(a.lambda, b.lambda, max_relative = 1e-15);
    }
}
