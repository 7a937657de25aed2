//! Extremal weights on the upper half-plane.
//!
//! An extremal weight is radial about a centre `z0`: its magnitude depends on
//! `z` only through the squared pseudo-hyperbolic distance
//! `d(z, z0) = |z - z0|^2 / |z - conj(z0)|^2`. The super-level set
//! `{|F| > t}` is the disc `d < r` whose hyperbolic measure `4 pi r / (1 - r)`
//! equals the distribution function at `t`. For the two-budget regime this
//! gives `|F| = psi(d / (1 - d))`, where `psi` inverts
//! `t -> (l1 t^(p-1) + l2 t^(q-1))^(-1/(2 beta + 1)) - 1` on `(0, T]`.
//!
//! Throughout, `w = 1 - d = 4 y y0 / |z - conj(z0)|^2` is used in place of
//! `d` near the boundary to avoid cancellation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{ProblemParams, RegimeKind, FOUR_PI};
use crate::profile::RadialProfile;
use crate::quadrature::{integrate_graded, QuadratureConfig};
use crate::report::BoundReport;
use crate::solver::{level_inverse, ln_level, Multipliers};

/// Magnitudes are set to zero once `1 - d` drops below this.
pub const BOUNDARY_CUTOFF: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub y: f64,
}

impl HalfPlanePoint {
    pub const I: HalfPlanePoint = HalfPlanePoint { x: 0.0, y: 1.0 };

    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::domain(format!("point ({x}, {y}) is not in the upper half-plane")));
        }
        Ok(HalfPlanePoint { x, y })
    }
}

/// `d(z, z0) = |z - z0|^2 / |z - conj(z0)|^2`, in `[0, 1)`.
pub fn pseudo_hyperbolic(z: HalfPlanePoint, z0: HalfPlanePoint) -> f64 {
    let dx = z.x - z0.x;
    let num = dx * dx + (z.y - z0.y) * (z.y - z0.y);
    let den = dx * dx + (z.y + z0.y) * (z.y + z0.y);
    num / den
}

/// `1 - d(z, z0)`, computed without cancellation.
pub fn pseudo_hyperbolic_complement(z: HalfPlanePoint, z0: HalfPlanePoint) -> f64 {
    let dx = z.x - z0.x;
    let den = dx * dx + (z.y + z0.y) * (z.y + z0.y);
    4.0 * z.y * z0.y / den
}

/// `t -> level(t)^(-1/(2 beta + 1)) - 1`, decreasing from `+inf` at `0` to
/// `0` at `T`.
pub fn forward_map(t: f64, m: &Multipliers, params: &ProblemParams) -> f64 {
    let ln_l = ln_level(m.lambda1, m.lambda2, params, t.ln());
    (-ln_l / (2.0 * params.beta + 1.0)).exp_m1()
}

/// Inverse of [`forward_map`] on `(0, T]`.
pub fn psi_inverse(s: f64, m: &Multipliers, params: &ProblemParams) -> Result<f64> {
    if s.is_nan() || s < 0.0 {
        return Err(Error::domain(format!("psi is defined for s >= 0, got {s}")));
    }
    if s == 0.0 {
        return Ok(m.t_end);
    }
    let target = -(2.0 * params.beta + 1.0) * s.ln_1p();
    Ok(level_inverse(m.lambda1, m.lambda2, params, target)?.min(m.t_end))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WeightShape {
    /// `lambda (1 - d)^(1/alpha)`
    Single { lambda: f64, alpha: f64 },
    /// `psi(d / (1 - d))`
    Dual { multipliers: Multipliers, params: ProblemParams },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalWeight {
    pub center: HalfPlanePoint,
    pub phase: f64,
    pub mode: RegimeKind,
    pub shape: WeightShape,
}

impl ExtremalWeight {
    pub fn single(mode: RegimeKind, lambda: f64, alpha: f64, center: HalfPlanePoint, phase: f64) -> Self {
        ExtremalWeight {
            center,
            phase,
            mode,
            shape: WeightShape::Single { lambda, alpha },
        }
    }

    pub fn dual(multipliers: Multipliers, params: ProblemParams, center: HalfPlanePoint, phase: f64) -> Self {
        ExtremalWeight {
            center,
            phase,
            mode: RegimeKind::Dual,
            shape: WeightShape::Dual { multipliers, params },
        }
    }

    /// The extremal weight attaining the bound in `report`.
    pub fn from_report(report: &BoundReport, center: HalfPlanePoint, phase: f64) -> Result<Self> {
        let params = report.params;
        let beta = params.beta;
        match report.regime {
            RegimeKind::SingleP | RegimeKind::SingleQ => {
                let e = if report.regime == RegimeKind::SingleP { params.p } else { params.q };
                let lambda = report
                    .amplitude
                    .ok_or_else(|| Error::invalid("single-regime report without amplitude"))?;
                Ok(Self::single(report.regime, lambda, (e - 1.0) / (2.0 * beta + 1.0), center, phase))
            }
            RegimeKind::Dual => {
                let m = Multipliers::new(report.lambda1, report.lambda2, &params)?;
                Ok(Self::dual(m, params, center, phase))
            }
        }
    }

    /// Exponent `alpha` of the power-law decay `|F| ~ (1 - d)^(1/alpha)`.
    pub fn decay_alpha(&self) -> f64 {
        match self.shape {
            WeightShape::Single { alpha, .. } => alpha,
            WeightShape::Dual { multipliers, params } => multipliers.leading_alpha(&params),
        }
    }

    /// Largest magnitude, attained at the centre.
    pub fn peak(&self) -> f64 {
        match self.shape {
            WeightShape::Single { lambda, .. } => lambda,
            WeightShape::Dual { multipliers, .. } => multipliers.t_end,
        }
    }

    /// Magnitude as a function of `w = 1 - d`.
    pub fn magnitude_at_complement(&self, w: f64) -> f64 {
        if w < BOUNDARY_CUTOFF {
            return 0.0;
        }
        if w >= 1.0 {
            return self.peak();
        }
        match self.shape {
            WeightShape::Single { lambda, alpha } => lambda * (w.ln() / alpha).exp(),
            WeightShape::Dual { multipliers, params } => {
                let s = (1.0 - w) / w;
                psi_inverse(s, &multipliers, &params).unwrap_or(0.0)
            }
        }
    }

    /// Magnitude as a function of `d`.
    pub fn magnitude_at(&self, d: f64) -> f64 {
        self.magnitude_at_complement(1.0 - d)
    }

    pub fn eval(&self, z: HalfPlanePoint) -> Complex64 {
        let w = pseudo_hyperbolic_complement(z, self.center);
        Complex64::from_polar(self.magnitude_at_complement(w), self.phase)
    }

    /// Distribution function `t -> nu({|F| > t})`.
    pub fn distribution(&self, t: f64) -> f64 {
        match self.shape {
            WeightShape::Single { lambda, alpha } => {
                if t >= lambda {
                    0.0
                } else if t <= 0.0 {
                    f64::INFINITY
                } else {
                    FOUR_PI * (-alpha * (t / lambda).ln()).exp_m1()
                }
            }
            WeightShape::Dual { multipliers, params } => crate::solver::u_eval(t, &multipliers, &params),
        }
    }

    /// Single-regime weights as a closed-form radial profile.
    pub fn radial_profile(&self) -> Option<RadialProfile> {
        match self.shape {
            WeightShape::Single { lambda, alpha } => Some(RadialProfile::Power { lambda, alpha }),
            WeightShape::Dual { .. } => None,
        }
    }
}

/// `||F||_e` through the radial reduction
/// `int |F|^e dnu = int_0^1 rho(d)^e 4 pi / (1 - d)^2 dd`.
pub fn weight_norm(w: &ExtremalWeight, exponent: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if w.peak() <= 0.0 {
        return Ok(0.0);
    }
    let alpha = w.decay_alpha();
    // In u = 1 - d the integrand behaves like u^(e/alpha - 2) at u = 0.
    let gamma = exponent / alpha - 2.0;
    if gamma <= -1.0 {
        return Ok(f64::INFINITY);
    }
    let r = integrate_graded(
        |u| {
            let m = w.magnitude_at_complement(u);
            if m == 0.0 {
                0.0
            } else {
                FOUR_PI * (exponent * m.ln() - 2.0 * u.ln()).exp()
            }
        },
        0.0,
        1.0,
        1.0 / (gamma + 1.0),
        cfg,
    )?;
    Ok(r.value.powf(1.0 / exponent))
}

/// `(||F||_p, ||F||_q)`.
pub fn weight_norms(w: &ExtremalWeight, params: &ProblemParams, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    Ok((weight_norm(w, params.p, cfg)?, weight_norm(w, params.q, cfg)?))
}

/// `||F||_e` for a weight that need not be radial, in pseudo-hyperbolic
/// polar coordinates about `center`:
/// `int |F|^e dnu = int_0^1 int_0^(2 pi) |F|^e 2 / (1 - s)^2 dtheta ds` with
/// `z = (z0 - conj(z0) zeta) / (1 - zeta)`, `zeta = sqrt(s) e^(i theta)`.
///
/// The angular integral uses `n_theta` trapezoid nodes; `grading` is the
/// exponent of the substitution clustering nodes at the boundary `s = 1`.
pub fn field_norm<F: Fn(HalfPlanePoint) -> f64>(
    magnitude: F,
    center: HalfPlanePoint,
    exponent: f64,
    grading: f64,
    n_theta: usize,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let z0 = Complex64::new(center.x, center.y);
    let h = std::f64::consts::TAU / n_theta as f64;
    let r = integrate_graded(
        |u| {
            if u <= 0.0 {
                return 0.0;
            }
            let rad = (1.0 - u).max(0.0).sqrt();
            let ring: f64 = (0..n_theta)
                .map(|k| {
                    let zeta = Complex64::from_polar(rad, k as f64 * h);
                    let z = (z0 - z0.conj() * zeta) / (1.0 - zeta);
                    let m = magnitude(HalfPlanePoint { x: z.re, y: z.im.max(f64::MIN_POSITIVE) });
                    if m > 0.0 {
                        m.powf(exponent)
                    } else {
                        0.0
                    }
                })
                .sum();
            2.0 * ring * h / (u * u)
        },
        0.0,
        1.0,
        grading,
        cfg,
    )?;
    Ok(r.value.powf(1.0 / exponent))
}

/// Distribution function of `|F|` measured from samples on a grid of
/// `samples` points log-spaced in `1 - d`, interpolating level crossings in
/// log-log coordinates.
pub fn measured_distribution(w: &ExtremalWeight, levels: &[f64], samples: usize) -> Vec<f64> {
    let samples = samples.max(8);
    let lo = BOUNDARY_CUTOFF.ln();
    let grid: Vec<f64> = (0..samples)
        .map(|k| lo * (1.0 - k as f64 / (samples - 1) as f64))
        .collect();
    let mags: Vec<f64> = grid.iter().map(|&lw| w.magnitude_at_complement(lw.exp())).collect();
    let peak = w.peak();
    levels
        .iter()
        .map(|&t| {
            if t >= peak {
                return 0.0;
            }
            // Magnitude increases with w, so {|F| > t} = {w > w*}.
            let k = mags.partition_point(|&m| m <= t);
            let ln_wstar = if k == 0 {
                extrapolate(grid[0], grid[1], mags[0], mags[1], t)
            } else if k >= samples {
                0.0
            } else {
                extrapolate(grid[k - 1], grid[k], mags[k - 1], mags[k], t)
            };
            let wstar = ln_wstar.exp();
            FOUR_PI * (1.0 - wstar) / wstar
        })
        .collect()
}

fn extrapolate(x0: f64, x1: f64, m0: f64, m1: f64, t: f64) -> f64 {
    if m0 <= 0.0 || m1 <= 0.0 || m1 == m0 {
        return x1;
    }
    let (y0, y1) = (m0.ln(), m1.ln());
    x0 + (t.ln() - y0) * (x1 - x0) / (y1 - y0)
}

/// `(d, |F|)` samples at `d = k / n`, `k = 0..n`.
pub fn sample_profile(w: &ExtremalWeight, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|k| {
            let d = k as f64 / n as f64;
            let u = (n - k) as f64 / n as f64;
            (d, w.magnitude_at_complement(u))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::derive_constants;
    use crate::quadrature::QuadratureConfig;
    use crate::solver::{solve_multipliers, u_eval};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(x: f64, y: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(x, y).unwrap()
    }

    #[test]
    fn pseudo_hyperbolic_examples() {
        let i = HalfPlanePoint::I;
        assert_eq!(pseudo_hyperbolic(i, i), 0.0);
        assert_relative_eq!(pseudo_hyperbolic(pt(0.0, 2.0), i), 1.0 / 9.0, max_relative = 1e-15);
        assert_relative_eq!(pseudo_hyperbolic(pt(1.0, 1.0), i), 0.2, max_relative = 1e-15);
        let (a, b) = (pt(-0.3, 0.7), pt(2.0, 5.0));
        assert_relative_eq!(pseudo_hyperbolic(a, b), pseudo_hyperbolic(b, a), max_relative = 1e-15);
        assert_relative_eq!(
            pseudo_hyperbolic(a, b) + pseudo_hyperbolic_complement(a, b),
            1.0,
            max_relative = 1e-15
        );
        assert!(HalfPlanePoint::new(0.0, 0.0).is_err());
    }

    #[test]
    fn psi_examples() {
        let params = ProblemParams::new(0.5, 2.0, 4.0, 1.0, 1.0).unwrap();
        let m = Multipliers::new(1.0, 0.0, &params).unwrap();
        assert_eq!(psi_inverse(0.0, &m, &params).unwrap(), m.t_end);
        assert_relative_eq!(psi_inverse(1.0, &m, &params).unwrap(), 0.25, max_relative = 1e-14);
        assert!(psi_inverse(-1.0, &m, &params).is_err());
    }

    #[test]
    fn psi_round_trip() {
        let params = ProblemParams::new(0.5, 2.0, 4.0, 1.0, 0.4).unwrap();
        let m = Multipliers::new(0.8, 1.7, &params).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let t = m.t_end * rng.gen_range(1e-6..1.0f64);
            let s = forward_map(t, &m, &params);
            let back = psi_inverse(s, &m, &params).unwrap();
            assert_relative_eq!(back, t, max_relative = 1e-12);
            let again = forward_map(back, &m, &params);
            assert!((again - s).abs() <= 1e-10 * (1.0 + s));
        }
    }

    #[test]
    fn zero_weight_has_zero_norms() {
        let params = ProblemParams::new(0.5, 2.0, 4.0, 1.0, 1.0).unwrap();
        let w = ExtremalWeight::single(RegimeKind::SingleP, 0.0, 0.5, HalfPlanePoint::I, 0.0);
        assert_eq!(weight_norms(&w, &params, &QuadratureConfig::default()).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn single_weight_norms() {
        let params = ProblemParams::new(0.5, 2.0, 4.0, 1.0, 1.0).unwrap();
        let consts = derive_constants(&params).unwrap();
        let report = crate::solver::compute_bound(&params).unwrap();
        let w = ExtremalWeight::from_report(&report, HalfPlanePoint::I, 0.0).unwrap();
        let (np, nq) = weight_norms(&w, &params, &QuadratureConfig::default()).unwrap();
        assert_relative_eq!(np, 1.0, max_relative = 1e-9);
        assert_relative_eq!(nq, consts.r2.value().unwrap(), max_relative = 1e-9);
    }

    #[test]
    fn dual_weight_reconstruction() {
        let params = ProblemParams::new(0.5, 2.0, 4.0, 1.0, 0.4).unwrap();
        let consts = derive_constants(&params).unwrap();
        let cfg = QuadratureConfig::default();
        let sol = solve_multipliers(&params, &consts, &cfg).unwrap();
        let m = sol.multipliers;
        let w = ExtremalWeight::dual(m, params, pt(0.5, 2.0), 1.0);

        let centre = w.eval(pt(0.5, 2.0));
        assert_relative_eq!(centre.norm(), m.t_end, max_relative = 1e-14);
        assert!(w.eval(pt(0.5, 1e-9)).norm() < 1e-6);

        let (np, nq) = weight_norms(&w, &params, &cfg).unwrap();
        assert_relative_eq!(np, 1.0, max_relative = 1e-6);
        assert_relative_eq!(nq, 0.4, max_relative = 1e-6);

        let levels: Vec<f64> = (1..20).map(|k| m.t_end * k as f64 / 20.0).collect();
        let measured = measured_distribution(&w, &levels, 4000);
        for (t, v) in levels.iter().zip(measured) {
            let u = u_eval(*t, &m, &params);
            assert!(((v - u) / u).abs() < 1e-4, "t = {t}: measured {v}, u {u}");
        }
    }

    #[test]
    fn magnitude_depends_only_on_distance() {
        let params = ProblemParams::new(0.5, 2.0, 4.0, 1.0, 0.4).unwrap();
        let m = Multipliers::new(0.9, 2.0, &params).unwrap();
        let z0 = pt(-1.0, 0.5);
        let w = ExtremalWeight::dual(m, params, z0, 0.3);
        // Points on a hyperbolic circle about z0: Mobius image of a Euclidean
        // circle about 0 in the disc model.
        let r = 0.6f64;
        let mut mags = Vec::new();
        for k in 0..12 {
            let th = k as f64 * 0.5;
            let zeta = num_complex::Complex64::from_polar(r, th);
            let z0c = num_complex::Complex64::new(z0.x, z0.y);
            let z = (z0c - z0c.conj() * zeta) / (1.0 - zeta);
            let d = pseudo_hyperbolic(pt(z.re, z.im), z0);
            assert_relative_eq!(d, r * r, max_relative = 1e-12);
            mags.push(w.eval(pt(z.re, z.im)).norm());
        }
        for m in &mags {
            assert_relative_eq!(*m, mags[0], max_relative = 1e-12);
        }
    }

    #[test]
    fn phase_leaves_magnitude() {
        let params = ProblemParams::new(0.5, 2.0, 4.0, 1.0, 0.4).unwrap();
        let m = Multipliers::new(0.9, 2.0, &params).unwrap();
        let a = ExtremalWeight::dual(m, params, HalfPlanePoint::I, 0.0);
        let b = ExtremalWeight::dual(m, params, HalfPlanePoint::I, std::f64::consts::PI / 3.0);
        let z = pt(0.3, 0.8);
        assert_relative_eq!(a.eval(z).norm(), b.eval(z).norm(), max_relative = 1e-15);
        let cfg = QuadratureConfig::default();
        assert_eq!(weight_norms(&a, &params, &cfg).unwrap(), weight_norms(&b, &params, &cfg).unwrap());
    }

    #[test]
    fn single_distribution_matches_profile() {
        let w = ExtremalWeight::single(RegimeKind::SingleP, 0.8, 0.5, HalfPlanePoint::I, 0.0);
        let v = crate::profile::distribution_of_profile(&w.radial_profile().unwrap());
        for t in [0.01, 0.2, 0.5, 0.79] {
            assert_relative_eq!(w.distribution(t), v.eval(t), max_relative = 1e-13);
        }
        assert_eq!(w.distribution(0.8), 0.0);
        let measured = measured_distribution(&w, &[0.2, 0.5], 4000);
        assert_relative_eq!(measured[0], w.distribution(0.2), max_relative = 1e-5);
        assert_relative_eq!(measured[1], w.distribution(0.5), max_relative = 1e-5);
    }

    #[test]
    fn sampled_profile_is_nonincreasing() {
        let params = ProblemParams::new(0.5, 2.0, 4.0, 1.0, 0.4).unwrap();
        let m = Multipliers::new(0.9, 2.0, &params).unwrap();
        let w = ExtremalWeight::dual(m, params, HalfPlanePoint::I, 0.0);
        let rows = sample_profile(&w, 500);
        assert_eq!(rows[0].1, m.t_end);
        assert!(rows.windows(2).all(|r| r[1].1 <= r[0].1));
    }

    #[test]
    fn planar_norm_matches_radial_reduction() {
        let params = ProblemParams::new(0.5, 2.0, 4.0, 1.0, 0.4).unwrap();
        let m = Multipliers::new(0.9, 2.0, &params).unwrap();
        let center = pt(0.7, 1.8);
        let w = ExtremalWeight::dual(m, params, center, 0.0);
        let cfg = QuadratureConfig::default();
        let alpha = w.decay_alpha();
        for e in [params.p, params.q] {
            let radial = weight_norm(&w, e, &cfg).unwrap();
            let planar =
                field_norm(|z| w.eval(z).norm(), center, e, 1.0 / (e / alpha - 1.0), 16, &cfg).unwrap();
            assert_relative_eq!(planar, radial, max_relative = 1e-8);
        }
        // A non-radial factor about an off-axis centre.
        let planar = field_norm(|z| w.eval(z).norm() * (1.0 + 0.5 * z.x.tanh()), center, 2.0, 1.0, 64, &cfg);
        assert!(planar.unwrap().is_finite());
    }
}
