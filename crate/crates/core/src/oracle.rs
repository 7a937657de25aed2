//! Brute-force discretization of the distribution-function problem
//!
//! ```text
//! maximize  sum G(v_i) D_i
//! subject   p sum t_i^(p-1) v_i D_i <= A^p,
//!           q sum t_i^(q-1) v_i D_i <= B^q,   v_i >= 0
//! ```
//!
//! on a log-spaced grid with trapezoid weights `D_i`. The solver is a scaled
//! gradient projection: each step takes the diagonal Newton point of the
//! separable objective, projects it exactly onto the feasible polytope in the
//! metric of the diagonal Hessian, and backtracks along the segment until Armijo ascent holds.
//! Nothing here uses the multiplier machinery of [`crate::solver`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isotonic;
use crate::kernel::{g, g_curvature_bound, g_deriv};
use crate::roots::{expand_bracket, illinois};
use crate::problem::ProblemParams;

/// Ratio between the smallest and largest grid point.
pub const T_MIN_RATIO: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteProblem {
    pub params: ProblemParams,
    pub t: Vec<f64>,
    pub weights: Vec<f64>,
    p_coef: Vec<f64>,
    q_coef: Vec<f64>,
    p_budget: f64,
    q_budget: f64,
}

impl DiscreteProblem {
    /// `n` log-spaced points on `[T_MIN_RATIO * t_max, t_max]`.
    pub fn log_spaced(params: &ProblemParams, n: usize, t_max: f64) -> Result<Self> {
        params.validate()?;
        if n < 100 {
            return Err(Error::invalid(format!("oracle grid needs at least 100 points, got {n}")));
        }
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(Error::invalid(format!("t_max must be positive, got {t_max}")));
        }
        let lo = (T_MIN_RATIO * t_max).ln();
        let hi = t_max.ln();
        let t: Vec<f64> = (0..n)
            .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
            .collect();
        Ok(Self::from_grid(params, t))
    }

    fn from_grid(params: &ProblemParams, t: Vec<f64>) -> Self {
        let n = t.len();
        let mut weights = vec![0.0; n];
        for i in 0..n - 1 {
            let h = 0.5 * (t[i + 1] - t[i]);
            weights[i] += h;
            weights[i + 1] += h;
        }
        let coef = |e: f64| -> Vec<f64> {
            t.iter()
                .zip(&weights)
                .map(|(&ti, &wi)| e * ti.powf(e - 1.0) * wi)
                .collect()
        };
        DiscreteProblem {
            params: *params,
            p_coef: coef(params.p),
            q_coef: coef(params.q),
            p_budget: params.a.powf(params.p),
            q_budget: params.b.powf(params.q),
            t,
            weights,
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        *self.t.last().unwrap()
    }

    pub fn objective(&self, v: &[f64]) -> f64 {
        let beta = self.params.beta;
        v.iter().zip(&self.weights).map(|(&vi, &w)| g(vi, beta) * w).sum()
    }

    /// Discrete `(p-moment, q-moment)`.
    pub fn moments(&self, v: &[f64]) -> (f64, f64) {
        (dot(&self.p_coef, v), dot(&self.q_coef, v))
    }

    /// Relative constraint slacks `moment / budget - 1` (negative when slack).
    pub fn residuals(&self, v: &[f64]) -> (f64, f64) {
        let (mp, mq) = self.moments(v);
        (mp / self.p_budget - 1.0, mq / self.q_budget - 1.0)
    }

    /// Largest uniform scaling of `v` in `[0, 1]` that satisfies both budgets.
    fn feasible_scale(&self, v: &[f64]) -> f64 {
        let (mp, mq) = self.moments(v);
        let mut s: f64 = 1.0;
        if mp > self.p_budget {
            s = s.min(self.p_budget / mp);
        }
        if mq > self.q_budget {
            s = s.min(self.q_budget / mq);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleOptions {
    pub max_iter: usize,
    /// Stop once the relative objective gain of a step falls below this.
    pub tol: f64,
    /// Apply pool-adjacent-violators after convergence.
    pub monotone_projection: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_iter: 4000,
            tol: 1e-13,
            monotone_projection: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteSolution {
    pub v: Vec<f64>,
    pub objective: f64,
    pub moment_p: f64,
    pub moment_q: f64,
    pub residual_p: f64,
    pub residual_q: f64,
    pub iterations: usize,
    /// Both budgets still slack: the grid cap rather than the constraints
    /// limits the objective.
    pub constraints_inactive: bool,
    pub monotone_projected: bool,
}

impl DiscreteSolution {
    fn new(prob: &DiscreteProblem, v: Vec<f64>, iterations: usize, monotone_projected: bool) -> Self {
        let (moment_p, moment_q) = prob.moments(&v);
        let (residual_p, residual_q) = prob.residuals(&v);
        DiscreteSolution {
            objective: prob.objective(&v),
            constraints_inactive: residual_p < -1e-6 && residual_q < -1e-6,
            v,
            moment_p,
            moment_q,
            residual_p,
            residual_q,
            iterations,
            monotone_projected,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `max(0, y - D^-1 (n1 a + n2 b))`
fn shifted(y: &[f64], dinv: &[f64], a: &[f64], b: &[f64], n1: f64, n2: f64, out: &mut [f64]) {
    for i in 0..y.len() {
        out[i] = (y[i] - dinv[i] * (n1 * a[i] + n2 * b[i])).max(0.0);
    }
}

/// Exact projection of `y` onto the feasible polytope in the metric
/// `sum d_i x_i^2`.
///
/// The minimizer is `x(n) = max(0, y - D^-1 (n1 a + n2 b))` for the
/// multipliers `n >= 0` of the two budget rows. Both budget residuals are
/// partial derivatives of a concave dual function, so each is nonincreasing
/// in its own multiplier even after the other multiplier is eliminated; this
/// gives a nested scalar root find with guaranteed brackets.
fn project_feasible(prob: &DiscreteProblem, y: &[f64], d: &[f64]) -> Result<Vec<f64>> {
    let n = y.len();
    let (a, b) = (&prob.p_coef, &prob.q_coef);
    let dinv: Vec<f64> = d.iter().map(|&di| 1.0 / di).collect();
    let quad = |c: &[f64]| c.iter().zip(&dinv).map(|(ci, di)| ci * ci * di).sum::<f64>();
    let (na, nb) = (quad(a), quad(b));
    let mut x = vec![0.0; n];

    let mut r_a = |n1: f64, n2: f64, x: &mut [f64]| {
        shifted(y, &dinv, a, b, n1, n2, x);
        dot(a, x) - prob.p_budget
    };
    let solve_n1 = |n2: f64, x: &mut Vec<f64>, r_a: &mut dyn FnMut(f64, f64, &mut [f64]) -> f64| -> Result<f64> {
        let f0 = r_a(0.0, n2, x);
        if f0 <= 0.0 {
            return Ok(0.0);
        }
        let mut f = |n1: f64| Ok(r_a(n1, n2, x));
        let (lo, hi, flo, fhi) = expand_bracket(&mut f, 0.0, f0, f0 / na, 200)?;
        illinois(&mut f, lo, hi, flo, fhi, 1e-15 * hi, 400)
    };

    let n1_0 = solve_n1(0.0, &mut x, &mut r_a)?;
    shifted(y, &dinv, a, b, n1_0, 0.0, &mut x);
    let h0 = dot(b, &x) - prob.q_budget;
    let (n1, n2) = if h0 <= 0.0 {
        (n1_0, 0.0)
    } else {
        let mut scratch = vec![0.0; n];
        let mut h = |n2: f64| -> Result<f64> {
            let n1 = solve_n1(n2, &mut scratch, &mut r_a)?;
            shifted(y, &dinv, a, b, n1, n2, &mut scratch);
            Ok(dot(b, &scratch) - prob.q_budget)
        };
        let (lo, hi, flo, fhi) = expand_bracket(&mut h, 0.0, h0, h0 / nb, 200)?;
        let n2 = illinois(&mut h, lo, hi, flo, fhi, 1e-15 * hi, 400)?;
        let mut tmp = vec![0.0; n];
        (solve_n1(n2, &mut tmp, &mut r_a)?, n2)
    };
    shifted(y, &dinv, a, b, n1, n2, &mut x);
    Ok(x)
}

/// Scaled gradient projection from `v = 0`.
pub fn solve_discrete(prob: &DiscreteProblem, opts: &OracleOptions) -> Result<DiscreteSolution> {
    let beta = prob.params.beta;
    let n = prob.len();
    let curv_cap = g_curvature_bound(beta);
    let mut v = vec![0.0; n];
    let mut f = prob.objective(&v);
    let mut quiet = 0;
    let mut converged = false;
    let mut iterations = 0;
    let mut last_gain = f64::NAN;

    let mut d = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut grad = vec![0.0; n];
    while iterations < opts.max_iter {
        iterations += 1;
        for i in 0..n {
            let w = prob.weights[i];
            grad[i] = g_deriv(v[i], beta) * w;
            // |G''(s)| = G'(s) (2 beta + 1) / (4 pi + s)
            let curv = (g_deriv(v[i], beta) * (2.0 * beta + 1.0) / (crate::problem::FOUR_PI + v[i]))
                .clamp(f64::MIN_POSITIVE, curv_cap);
            d[i] = curv * w;
            y[i] = v[i] + grad[i] / d[i];
        }
        let z = project_feasible(prob, &y, &d)?;
        let slope: f64 = grad.iter().zip(z.iter().zip(&v)).map(|(g, (zi, vi))| g * (zi - vi)).sum();
        if slope <= 0.0 {
            converged = true;
            break;
        }
        let mut step = 1.0;
        let mut trial = vec![0.0; n];
        let mut f_trial;
        loop {
            for i in 0..n {
                trial[i] = v[i] + step * (z[i] - v[i]);
            }
            f_trial = prob.objective(&trial);
            if f_trial >= f + 1e-4 * step * slope || step < 1e-12 {
                break;
            }
            step *= 0.5;
        }
        if f_trial < f {
            converged = true;
            break;
        }
        last_gain = (f_trial - f) / f_trial.abs().max(f64::MIN_POSITIVE);
        v = trial;
        f = f_trial;
        if last_gain < opts.tol {
            quiet += 1;
            if quiet >= 3 {
                converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }

    // Dykstra stops at a finite tolerance; scale back onto the budgets.
    let s = prob.feasible_scale(&v);
    v.iter_mut().for_each(|vi| *vi *= s);

    let mut projected = false;
    if opts.monotone_projection {
        v = isotonic::nonincreasing(&v, &prob.weights);
        let s = prob.feasible_scale(&v);
        v.iter_mut().for_each(|vi| *vi *= s);
        projected = true;
    }
    let sol = DiscreteSolution::new(prob, v, iterations, projected);
    if !converged && !sol.constraints_inactive {
        return Err(Error::NonConvergence {
            what: "discrete oracle",
            iterations,
            detail: format!("last relative gain {last_gain:e}, objective {}", sol.objective),
        });
    }
    Ok(sol)
}

/// Solves on `n` points, doubling `t_max` (from `t_max0`) until the
/// solution's support ends before half of the grid range.
pub fn solve_auto(
    params: &ProblemParams,
    n: usize,
    t_max0: f64,
    opts: &OracleOptions,
) -> Result<(DiscreteProblem, DiscreteSolution)> {
    let mut t_max = t_max0;
    for _ in 0..60 {
        let prob = DiscreteProblem::log_spaced(params, n, t_max)?;
        let sol = solve_discrete(&prob, opts)?;
        let last = sol.v.iter().rposition(|&x| x > 0.0).unwrap_or(0);
        if prob.t[last] <= 0.5 * t_max || sol.constraints_inactive {
            return Ok((prob, sol));
        }
        t_max *= 2.0;
    }
    Err(Error::NonConvergence {
        what: "oracle grid doubling",
        iterations: 60,
        detail: format!("support still reaches t_max = {t_max}"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotoneReport {
    /// Largest increase between neighbours, relative to `max v`.
    pub max_violation: f64,
    pub objective: f64,
    pub projected_objective: f64,
}

/// For a solution computed without the monotone projection, measures how far
/// it is from nonincreasing and what the projection would change.
pub fn check_monotone_restoration(prob: &DiscreteProblem, sol: &DiscreteSolution) -> MonotoneReport {
    let peak = sol.v.iter().cloned().fold(0.0, f64::max);
    let projected = isotonic::nonincreasing(&sol.v, &prob.weights);
    let s = prob.feasible_scale(&projected);
    let projected: Vec<f64> = projected.iter().map(|x| x * s).collect();
    MonotoneReport {
        max_violation: if peak > 0.0 { isotonic::max_violation(&sol.v) / peak } else { 0.0 },
        objective: sol.objective,
        projected_objective: prob.objective(&projected),
    }
}
