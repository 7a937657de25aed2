//! Nonincreasing radial profiles and their distribution functions.
//!
//! A magnitude profile maps the squared pseudo-hyperbolic distance
//! `d in [0, 1)` to `|F|`; its distribution function maps a level `t` to the
//! hyperbolic measure of `{|F| > t}`. Because the super-level sets of a
//! radial nonincreasing weight are discs `{d < r}` of measure
//! `4 pi r / (1 - r)`, each is determined by the other.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::g;
use crate::problem::FOUR_PI;
use crate::quadrature::{integrate, integrate_graded, QuadratureConfig};

/// Hyperbolic measure of the disc `{d < r}`.
pub fn disc_measure(r: f64) -> f64 {
    if r >= 1.0 {
        f64::INFINITY
    } else {
        FOUR_PI * r / (1.0 - r)
    }
}

/// Inverse of [`disc_measure`].
pub fn disc_radius(measure: f64) -> f64 {
    if measure.is_infinite() {
        1.0
    } else {
        measure / (FOUR_PI + measure)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RadialProfile {
    Zero,
    /// Magnitude `lambda (1 - d)^(1/alpha)`.
    Power { lambda: f64, alpha: f64 },
    /// Distribution `4 pi ((t/lambda)^(-alpha) - 1)` on `(0, lambda]`, zero beyond.
    PowerDistribution { lambda: f64, alpha: f64 },
    /// Magnitude `height` on `d < radius`, zero outside.
    Step { height: f64, radius: f64 },
    /// Distribution `measure` for `t < height`, zero from `height` on.
    StepDistribution { height: f64, measure: f64 },
    /// Piecewise-linear samples with ascending abscissae; `before` and
    /// `after` extend the profile to the left and right of the samples.
    Sampled(SampledProfile),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledProfile {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub before: f64,
    pub after: f64,
    pub is_distribution: bool,
}

impl SampledProfile {
    fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if n == 0 {
            return self.after;
        }
        if x < self.xs[0] {
            return self.before;
        }
        if x > self.xs[n - 1] {
            return self.after;
        }
        let k = self.xs.partition_point(|&v| v <= x);
        if k == 0 {
            return self.ys[0];
        }
        if k >= n {
            return self.ys[n - 1];
        }
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let (y0, y1) = (self.ys[k - 1], self.ys[k]);
        if x1 == x0 {
            return y1;
        }
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

impl RadialProfile {
    pub fn is_distribution(&self) -> bool {
        match self {
            RadialProfile::PowerDistribution { .. } | RadialProfile::StepDistribution { .. } => true,
            RadialProfile::Sampled(s) => s.is_distribution,
            _ => false,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            RadialProfile::Zero => 0.0,
            RadialProfile::Power { lambda, alpha } => {
                if x >= 1.0 {
                    0.0
                } else {
                    lambda * ((-x).ln_1p() / alpha).exp()
                }
            }
            RadialProfile::PowerDistribution { lambda, alpha } => {
                if x >= lambda {
                    0.0
                } else if x <= 0.0 {
                    f64::INFINITY
                } else {
                    FOUR_PI * (-alpha * (x / lambda).ln()).exp_m1()
                }
            }
            RadialProfile::Step { height, radius } => {
                if x < radius {
                    height
                } else {
                    0.0
                }
            }
            RadialProfile::StepDistribution { height, measure } => {
                if x < height {
                    measure
                } else {
                    0.0
                }
            }
            RadialProfile::Sampled(ref s) => s.eval(x),
        }
    }

    /// Largest level with a nonempty super-level set (distribution profiles).
    pub fn support_end(&self) -> f64 {
        match self {
            RadialProfile::Zero => 0.0,
            RadialProfile::PowerDistribution { lambda, .. } => *lambda,
            RadialProfile::StepDistribution { height, .. } => *height,
            RadialProfile::Sampled(s) if s.is_distribution => s.xs.last().copied().unwrap_or(0.0),
            RadialProfile::Power { lambda, .. } => *lambda,
            RadialProfile::Step { height, .. } => *height,
            RadialProfile::Sampled(s) => s.ys.first().copied().unwrap_or(0.0).max(s.before),
        }
    }
}

/// Distribution function `t -> nu({|F| > t})` of a radial magnitude profile.
/// Distribution profiles are returned unchanged.
pub fn distribution_of_profile(profile: &RadialProfile) -> RadialProfile {
    match profile {
        RadialProfile::Zero => RadialProfile::Zero,
        RadialProfile::Power { lambda, alpha } => {
            if *lambda <= 0.0 {
                RadialProfile::Zero
            } else {
                RadialProfile::PowerDistribution {
                    lambda: *lambda,
                    alpha: *alpha,
                }
            }
        }
        RadialProfile::Step { height, radius } => {
            if *height <= 0.0 || *radius <= 0.0 {
                RadialProfile::Zero
            } else {
                RadialProfile::StepDistribution {
                    height: *height,
                    measure: disc_measure(*radius),
                }
            }
        }
        RadialProfile::Sampled(s) if !s.is_distribution => {
            // Level t is crossed where the magnitude falls through it; the
            // samples are nonincreasing in d, so reversing gives ascending t.
            let mut xs = Vec::with_capacity(s.xs.len());
            let mut ys = Vec::with_capacity(s.xs.len());
            for (&d, &m) in s.xs.iter().zip(&s.ys).rev() {
                xs.push(m);
                ys.push(disc_measure(d));
            }
            let last_d = s.xs.last().copied().unwrap_or(0.0);
            RadialProfile::Sampled(SampledProfile {
                xs,
                ys,
                before: if s.after > 0.0 { f64::INFINITY } else { disc_measure(last_d) },
                after: 0.0,
                is_distribution: true,
            })
        }
        other => other.clone(),
    }
}

/// `int_0^inf G(v(t)) dt` for a distribution function `v` (a magnitude
/// profile is converted first).
pub fn concentration_functional(profile: &RadialProfile, beta: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let v = distribution_of_profile(profile);
    match v {
        RadialProfile::Zero => Ok(0.0),
        RadialProfile::StepDistribution { height, measure } => Ok(height * g(measure, beta)),
        RadialProfile::PowerDistribution { lambda, alpha } => {
            // G(v(t)) = 1 - (t/lambda)^(2 beta alpha)
            let gamma = 2.0 * beta * alpha;
            let grading = (1.0 / gamma).max(1.0);
            let r = integrate_graded(|t| g(v.eval(t), beta), 0.0, lambda, grading, cfg)?;
            Ok(r.value)
        }
        RadialProfile::Sampled(ref s) => {
            if s.before.is_infinite() {
                return Err(Error::domain("distribution is infinite near t = 0"));
            }
            let mut total = s.xs.first().map_or(0.0, |&x0| x0.max(0.0) * g(s.before, beta));
            for w in s.xs.windows(2) {
                let (a, b) = (w[0], w[1]);
                if b > a {
                    total += integrate(|t| g(v.eval(t), beta), a, b, cfg)?.value;
                }
            }
            Ok(total)
        }
        RadialProfile::Power { .. } | RadialProfile::Step { .. } => unreachable!("converted above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_profile_has_zero_distribution() {
        let v = distribution_of_profile(&RadialProfile::Zero);
        assert_eq!(v, RadialProfile::Zero);
        assert_eq!(v.eval(0.3), 0.0);
    }

    #[test]
    fn step_distribution() {
        let v = distribution_of_profile(&RadialProfile::Step { height: 2.0, radius: 0.25 });
        let m = FOUR_PI * 0.25 / 0.75;
        assert_relative_eq!(v.eval(1.999), m, max_relative = 1e-15);
        assert_relative_eq!(v.eval(0.0), m, max_relative = 1e-15);
        assert_eq!(v.eval(2.0), 0.0);
        assert_eq!(v.eval(3.0), 0.0);
    }

    #[test]
    fn power_distribution_closed_form() {
        let v = distribution_of_profile(&RadialProfile::Power { lambda: 1.0, alpha: 0.5 });
        assert_relative_eq!(v.eval(0.25), FOUR_PI, max_relative = 1e-14);
        assert_eq!(v.eval(1.0), 0.0);
    }

    #[test]
    fn power_distribution_matches_grid_measurement() {
        // Brute force: measure {profile > t} by summing the hyperbolic area
        // element 4 pi / (1 - d)^2 over a fine midpoint grid in d.
        let lambda = 1.3;
        let alpha = 0.7;
        let profile = RadialProfile::Power { lambda, alpha };
        let v = distribution_of_profile(&profile);
        let n = 400_000;
        for t in [0.2, 0.6, 1.0] {
            let mut measure = 0.0;
            let h = 1.0 / n as f64;
            for k in 0..n {
                let d = (k as f64 + 0.5) * h;
                if profile.eval(d) > t {
                    measure += FOUR_PI / ((1.0 - d) * (1.0 - d)) * h;
                }
            }
            assert_relative_eq!(v.eval(t), measure, max_relative = 2e-3);
        }
    }

    #[test]
    fn sampled_profile_distribution_inverts_levels() {
        let d: Vec<f64> = (0..=180).map(|k| k as f64 / 200.0).collect();
        let m: Vec<f64> = d.iter().map(|x| 2.0 * (1.0 - x)).collect();
        let profile = RadialProfile::Sampled(SampledProfile {
            xs: d,
            ys: m,
            before: 2.0,
            after: 0.0,
            is_distribution: false,
        });
        let v = distribution_of_profile(&profile);
        // magnitude 1 at d = 0.5
        assert_relative_eq!(v.eval(1.0), disc_measure(0.5), max_relative = 1e-12);
        assert_eq!(v.eval(2.5), 0.0);
    }

    #[test]
    fn functional_of_step_is_height_times_kernel() {
        let v = RadialProfile::StepDistribution { height: 0.7, measure: 5.0 };
        let cfg = QuadratureConfig::default();
        let val = concentration_functional(&v, 0.5, &cfg).unwrap();
        assert_relative_eq!(val, 0.7 * g(5.0, 0.5), max_relative = 1e-15);
    }

    #[test]
    fn functional_of_power_profile_is_closed_form() {
        // int_0^lambda 1 - (t/lambda)^gamma dt = lambda gamma / (gamma + 1)
        let cfg = QuadratureConfig::default();
        for (beta, alpha) in [(0.5, 0.5), (0.1, 0.2), (3.0, 1.7)] {
            let lambda = 0.8;
            let val = concentration_functional(&RadialProfile::Power { lambda, alpha }, beta, &cfg).unwrap();
            let gamma = 2.0 * beta * alpha;
            assert_relative_eq!(val, lambda * gamma / (gamma + 1.0), max_relative = 1e-11);
        }
    }
}
