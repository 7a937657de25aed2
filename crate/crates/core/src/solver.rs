//! The regime where both budgets bind.
//!
//! The extremal distribution function is
//!
//! ```text
//! u(t) = 4 pi max{ (l1 t^(p-1) + l2 t^(q-1))^(-1/(2 beta + 1)) - 1, 0 }
//! ```
//!
//! supported on `(0, T]` where `l1 T^(p-1) + l2 T^(q-1) = 1`. The multipliers
//! `(l1, l2)` are fixed by spending both budgets exactly:
//! `p int t^(p-1) u = A^p` and `q int t^(q-1) u = B^q`. Both moments are
//! strictly decreasing in each multiplier, so the system is solved by nesting
//! two monotone root finds: for fixed `l2` the `p`-moment pins `l1`, and the
//! outer search moves `l2` until the `q`-moment matches.
//!
//! Internally instances are ordered so that `p < q`; results are mapped back.

use std::cell::Cell;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::closed_form::{profile_amplitude, single_result, verify_moment_identities};
use crate::error::{Error, Result};
use crate::problem::{
    classify_regime, derive_constants, DerivedConstants, ExponentConstants, ProblemParams, RegimeKind, Side,
    FOUR_PI,
};
use crate::quadrature::{integrate, integrate_graded, QuadratureConfig};
use crate::report::BoundReport;
use crate::roots::{expand_bracket, illinois};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Multipliers {
    pub lambda1: f64,
    pub lambda2: f64,
    #[serde(rename = "T")]
    pub t_end: f64,
}

impl Multipliers {
    /// Builds the multiplier triple, solving for the support endpoint `T`.
    pub fn new(lambda1: f64, lambda2: f64, params: &ProblemParams) -> Result<Self> {
        let t_end = find_t(lambda1, lambda2, params)?;
        Ok(Multipliers {
            lambda1,
            lambda2,
            t_end,
        })
    }

    /// `l1 t^(p-1) + l2 t^(q-1)`
    pub fn level(&self, t: f64, params: &ProblemParams) -> f64 {
        ln_level(self.lambda1, self.lambda2, params, t.ln()).exp()
    }

    /// Exponent `alpha` governing the blow-up of `u` at `t = 0`.
    pub(crate) fn leading_alpha(&self, params: &ProblemParams) -> f64 {
        let e = match (self.lambda1 > 0.0, self.lambda2 > 0.0) {
            (true, true) => params.p.min(params.q),
            (true, false) => params.p,
            _ => params.q,
        };
        (e - 1.0) / (2.0 * params.beta + 1.0)
    }

    fn swapped(self) -> Self {
        Multipliers {
            lambda1: self.lambda2,
            lambda2: self.lambda1,
            t_end: self.t_end,
        }
    }
}

/// `ln(l1 e^((p-1) x) + l2 e^((q-1) x))`, evaluated without overflow.
pub(crate) fn ln_level(l1: f64, l2: f64, params: &ProblemParams, x: f64) -> f64 {
    let a = if l1 > 0.0 { l1.ln() + (params.p - 1.0) * x } else { f64::NEG_INFINITY };
    let b = if l2 > 0.0 { l2.ln() + (params.q - 1.0) * x } else { f64::NEG_INFINITY };
    let hi = a.max(b);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    let lo = a.min(b);
    hi + (lo - hi).exp().ln_1p()
}

/// Solves `ln(l1 t^(p-1) + l2 t^(q-1)) = target` for `t > 0`.
///
/// `ln level(e^x)` is convex and increasing in `x`, so Newton started to the
/// right of the root descends monotonically onto it.
pub(crate) fn level_inverse(l1: f64, l2: f64, params: &ProblemParams, target: f64) -> Result<f64> {
    if !(l1 >= 0.0 && l2 >= 0.0) || (l1 == 0.0 && l2 == 0.0) {
        return Err(Error::domain(format!(
            "multipliers must be nonnegative and not both zero, got ({l1}, {l2})"
        )));
    }
    let (e1, e2) = (params.p - 1.0, params.q - 1.0);
    // Each single term reaching the target bounds the root from above.
    let mut x = f64::INFINITY;
    if l1 > 0.0 {
        x = x.min((target - l1.ln()) / e1);
    }
    if l2 > 0.0 {
        x = x.min((target - l2.ln()) / e2);
    }
    for _ in 0..200 {
        let a = if l1 > 0.0 { l1.ln() + e1 * x } else { f64::NEG_INFINITY };
        let b = if l2 > 0.0 { l2.ln() + e2 * x } else { f64::NEG_INFINITY };
        let hi = a.max(b);
        let wa = (a - hi).exp();
        let wb = (b - hi).exp();
        let val = hi + (wa + wb).ln() - target;
        let slope = (wa * e1 + wb * e2) / (wa + wb);
        let step = val / slope;
        x -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + x.abs()) {
            return Ok(x.exp());
        }
    }
    Ok(x.exp())
}

/// Support endpoint: the root of `l1 T^(p-1) + l2 T^(q-1) = 1`.
pub fn find_t(lambda1: f64, lambda2: f64, params: &ProblemParams) -> Result<f64> {
    level_inverse(lambda1, lambda2, params, 0.0)
}

/// Extremal distribution function `u(t)`.
pub fn u_eval(t: f64, m: &Multipliers, params: &ProblemParams) -> f64 {
    if t >= m.t_end {
        return 0.0;
    }
    if t <= 0.0 {
        return f64::INFINITY;
    }
    let ln_l = ln_level(m.lambda1, m.lambda2, params, t.ln());
    (FOUR_PI * (-ln_l / (2.0 * params.beta + 1.0)).exp_m1()).max(0.0)
}

/// `e int_0^T t^(e-1) u(t) dt` for `e = p` or `q`. Infinite when the
/// integrand is not integrable at `t = 0`.
pub fn moment(m: &Multipliers, params: &ProblemParams, which: Side, cfg: &QuadratureConfig) -> Result<f64> {
    let e = match which {
        Side::P => params.p,
        Side::Q => params.q,
    };
    let alpha = m.leading_alpha(params);
    if e <= alpha {
        return Ok(f64::INFINITY);
    }
    // Near 0 the integrand is ~ t^(e - 1 - alpha).
    let grading = 1.0 / (e - alpha);
    let r = integrate_support(|t| t.powf(e - 1.0) * u_eval(t, m, params), m, params, grading, cfg)?;
    Ok(e * r)
}

/// `int_0^T G(u(t)) dt`, the bound attained by the extremal distribution.
pub fn bound_integral(m: &Multipliers, params: &ProblemParams, cfg: &QuadratureConfig) -> Result<f64> {
    let beta = params.beta;
    let power = 2.0 * beta / (2.0 * beta + 1.0);
    // G(u(t)) = 1 - level(t)^(2 beta / (2 beta + 1)) on (0, T).
    let integrand = |t: f64| {
        if t >= m.t_end {
            return 0.0;
        }
        let ln_l = ln_level(m.lambda1, m.lambda2, params, t.ln());
        (-(power * ln_l).exp_m1()).max(0.0)
    };
    let gamma = 2.0 * beta * m.leading_alpha(params);
    let grading = (1.0 / gamma).max(1.0);
    integrate_support(integrand, m, params, grading, cfg)
}

/// Point in `(0, T/2)` where the two terms of the level are equal.
fn crossover(m: &Multipliers, params: &ProblemParams) -> Option<f64> {
    if m.lambda1 <= 0.0 || m.lambda2 <= 0.0 {
        return None;
    }
    let t = ((m.lambda1 / m.lambda2).ln() / (params.q - params.p)).exp();
    (t > 0.0 && t < 0.5 * m.t_end).then_some(t)
}

/// `int_0^T f`. When one multiplier is much smaller than the other the
/// integrand changes power law at the crossover, possibly decades away from
/// both ends; the part beyond it is integrated in `ln t`.
fn integrate_support<F: Fn(f64) -> f64>(
    f: F,
    m: &Multipliers,
    params: &ProblemParams,
    grading: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    match crossover(m, params) {
        None => Ok(integrate_graded(&f, 0.0, m.t_end, grading, cfg)?.value),
        Some(tc) => {
            let head = integrate_graded(&f, 0.0, tc, grading, cfg)?.value;
            let tail = integrate(
                |x| {
                    let t = x.exp();
                    t * f(t)
                },
                tc.ln(),
                m.t_end.ln(),
                cfg,
            )?;
            Ok(head + tail.value)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiplierSolution {
    pub multipliers: Multipliers,
    /// `|p-moment - A^p| / A^p`
    pub residual_p: f64,
    /// `|q-moment - B^q| / B^q`
    pub residual_q: f64,
    pub outer_iterations: usize,
}

/// Nested monotone solve of the two-moment system for `p < q`.
struct DualSystem<'a> {
    params: &'a ProblemParams,
    cfg: &'a QuadratureConfig,
    ln_ap: f64,
    ln_bq: f64,
    /// Largest `l2` for which some `l1 >= 0` still spends the `p` budget.
    l2_max: Option<f64>,
    warm_l1: Cell<f64>,
    outer_evals: Cell<usize>,
}

impl<'a> DualSystem<'a> {
    fn new(params: &'a ProblemParams, consts: &DerivedConstants, cfg: &'a QuadratureConfig) -> Self {
        debug_assert!(params.p < params.q);
        let cp = &consts.p;
        let cq = &consts.q;
        let amp_p = profile_amplitude(cp, params.a);
        let l2_max = l2_upper_limit(cq, params.p, params.a);
        DualSystem {
            params,
            cfg,
            ln_ap: params.p * params.a.ln(),
            ln_bq: params.q * params.b.ln(),
            l2_max,
            warm_l1: Cell::new(amp_p.powf(-(params.p - 1.0))),
            outer_evals: Cell::new(0),
        }
    }

    fn moments_ln(&self, l1: f64, l2: f64, which: Side) -> Result<f64> {
        let m = Multipliers::new(l1, l2, self.params)?;
        Ok(moment(&m, self.params, which, self.cfg)?.ln())
    }

    /// The `l1 >= 0` that spends the `p` budget exactly for this `l2`.
    fn inner(&self, l2: f64) -> Result<f64> {
        if let Some(max) = self.l2_max {
            if l2 >= max {
                return Ok(0.0);
            }
        }
        let f = |x: f64| -> Result<f64> {
            let l1 = x.exp();
            if l1 == 0.0 {
                // Limit l1 -> 0: the q-only profile; finite or divergent.
                let ln_mp = if l2 > 0.0 { self.moments_ln(0.0, l2, Side::P)? } else { f64::INFINITY };
                return Ok(ln_mp - self.ln_ap);
            }
            Ok(self.moments_ln(l1, l2, Side::P)? - self.ln_ap)
        };
        let x0 = self.warm_l1.get().ln();
        let f0 = f(x0)?;
        if f0 == 0.0 {
            return Ok(x0.exp());
        }
        // Moment decreases in l1: positive f means l1 must grow.
        let step = if f0 > 0.0 { 0.25 } else { -0.25 };
        let (lo, hi, flo, fhi) = expand_bracket(f, x0, f0, step, 80)?;
        let x = illinois(f, lo, hi, flo, fhi, 1e-14, 300)?;
        let l1 = x.exp();
        self.warm_l1.set(l1.max(f64::MIN_POSITIVE));
        Ok(l1)
    }

    fn outer_residual(&self, y: f64) -> Result<f64> {
        self.outer_evals.set(self.outer_evals.get() + 1);
        let l2 = y.exp();
        let l1 = self.inner(l2)?;
        Ok(self.moments_ln(l1, l2, Side::Q)? - self.ln_bq)
    }

    fn solve(&self) -> Result<(f64, f64)> {
        let p = self.params;
        let amp_p = profile_amplitude(&ExponentConstants::new(p.p, p.beta), p.a);
        let mut y0 = -(p.q - 1.0) * amp_p.ln();
        if let Some(max) = self.l2_max {
            y0 = y0.min(max.ln() - 0.5);
        }
        let h = |y: f64| self.outer_residual(y);
        let h0 = h(y0)?;
        // The q-moment decreases in l2: positive residual means l2 must grow.
        let (lo, hi, hlo, hhi) = if h0 > 0.0 {
            match self.l2_max {
                Some(max) => {
                    let y_max = max.ln();
                    let h_max = h(y_max)?;
                    if h_max > 0.0 {
                        return Err(Error::Bracket(format!(
                            "q-moment still exceeds B^q at the largest admissible l2 = {max:e} (residual {h_max:e})"
                        )));
                    }
                    (y0, y_max, h0, h_max)
                }
                None => expand_bracket(h, y0, h0, 0.5, 120)?,
            }
        } else {
            expand_bracket(h, y0, h0, -0.5, 120)?
        };
        let y = illinois(h, lo, hi, hlo, hhi, 1e-13, 300)?;
        let l2 = y.exp();
        let l1 = self.inner(l2)?;
        Ok((l1, l2))
    }
}

/// Largest `l2` whose `q`-only profile still has `p`-moment at least `A^p`;
/// `None` when that moment diverges (`p <= alpha_q`).
fn l2_upper_limit(cq: &ExponentConstants, p: f64, a: f64) -> Option<f64> {
    if p <= cq.alpha {
        return None;
    }
    // 4 pi amp^p alpha_q / (p - alpha_q) = A^p
    let ln_amp = (p * a.ln() + (p - cq.alpha).ln() - (FOUR_PI * cq.alpha).ln()) / p;
    Some((-(cq.exponent - 1.0) * ln_amp).exp())
}

/// Solves the multiplier system for an instance in the two-budget regime.
pub fn solve_multipliers(
    params: &ProblemParams,
    consts: &DerivedConstants,
    cfg: &QuadratureConfig,
) -> Result<MultiplierSolution> {
    cfg.validate()?;
    let regime = classify_regime(params, consts);
    if regime.kind != RegimeKind::Dual {
        return Err(Error::RegimeMismatch(format!(
            "multiplier system needs the two-budget regime, instance is {}",
            regime.kind
        )));
    }
    let (canon, swapped) = params.canonical();
    let canon_consts = if swapped { derive_constants(&canon)? } else { *consts };
    let system = DualSystem::new(&canon, &canon_consts, cfg);
    let (l1, l2) = system.solve()?;
    if !(l1 > 0.0 && l2 > 0.0) {
        return Err(Error::Bracket(format!(
            "solution left the open quadrant: l1 = {l1:e}, l2 = {l2:e}"
        )));
    }
    let m = Multipliers::new(l1, l2, &canon)?;
    let mp = moment(&m, &canon, Side::P, cfg)?;
    let mq = moment(&m, &canon, Side::Q, cfg)?;
    let res_p = ((mp - canon.a.powf(canon.p)) / canon.a.powf(canon.p)).abs();
    let res_q = ((mq - canon.b.powf(canon.q)) / canon.b.powf(canon.q)).abs();
    let (multipliers, residual_p, residual_q) = if swapped {
        (m.swapped(), res_q, res_p)
    } else {
        (m, res_p, res_q)
    };
    Ok(MultiplierSolution {
        multipliers,
        residual_p,
        residual_q,
        outer_iterations: system.outer_evals.get(),
    })
}

pub fn compute_bound(params: &ProblemParams) -> Result<BoundReport> {
    compute_bound_with(params, &QuadratureConfig::default())
}

/// Classifies the instance and evaluates the sharp bound for its regime.
pub fn compute_bound_with(params: &ProblemParams, cfg: &QuadratureConfig) -> Result<BoundReport> {
    let started = Instant::now();
    let consts = derive_constants(params)?;
    let regime = classify_regime(params, &consts);
    let mut diagnostics = Vec::new();
    if let Some(d) = consts.threshold_diagnostic() {
        diagnostics.push(d);
    }
    let mut report = BoundReport::new(*params, regime, &consts);
    match regime.kind {
        RegimeKind::SingleP | RegimeKind::SingleQ => {
            let side = if regime.kind == RegimeKind::SingleP { Side::P } else { Side::Q };
            let single = single_result(params, &consts, side);
            let moments = verify_moment_identities(params, &consts, single.lambda, side, cfg)?;
            let (e, _) = match side {
                Side::P => (params.p, params.q),
                Side::Q => (params.q, params.p),
            };
            // Equivalent multiplier of the active term: lambda^-(e-1).
            let equiv = single.lambda.powf(-(e - 1.0));
            report.bound = single.bound;
            report.amplitude = Some(single.lambda);
            report.cross_norm = single.cross_norm.value();
            match side {
                Side::P => {
                    report.lambda1 = equiv;
                    report.lambda2 = 0.0;
                    report.residual_p = moments.active.rel_residual;
                }
                Side::Q => {
                    report.lambda1 = 0.0;
                    report.lambda2 = equiv;
                    report.residual_q = moments.active.rel_residual;
                }
            }
        }
        RegimeKind::Dual => {
            let sol = solve_multipliers(params, &consts, cfg)?;
            let bound = bound_integral(&sol.multipliers, params, cfg)?;
            report.bound = bound;
            report.lambda1 = sol.multipliers.lambda1;
            report.lambda2 = sol.multipliers.lambda2;
            report.t_end = Some(sol.multipliers.t_end);
            report.residual_p = Some(sol.residual_p);
            report.residual_q = Some(sol.residual_q);
            if sol.residual_p > 1e-8 || sol.residual_q > 1e-8 {
                diagnostics.push(format!(
                    "moment residuals above 1e-8: p {:e}, q {:e}",
                    sol.residual_p, sol.residual_q
                ));
            }
        }
    }
    report.diagnostics = diagnostics;
    report.elapsed = Some(started.elapsed().as_secs_f64());
    Ok(report)
}
