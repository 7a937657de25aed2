use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::transform::{Discretization, HardyVector, PlaneField};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerOptions {
    /// Relative change of the eigenvalue estimate that counts as converged.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions { tol: 1e-8, max_iter: 500 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Rayleigh quotients, one per iteration.
    pub history: Vec<f64>,
}

/// Deterministic start vector with broad frequency content.
pub fn default_seed(disc: &Discretization) -> HardyVector {
    disc.vector(|w| Complex64::new(w.powf(0.75) * (-0.6 * w).exp() * (1.0 + 0.3 * (2.5 * w).cos()), 0.1 * w * (-w).exp()))
}

/// Largest singular value of the discretized `L_F` by power iteration.
///
/// For a real nonnegative weight the operator is positive and the iteration
/// runs on `L_F` itself; otherwise it runs on `L_F^* L_F = L_conj(F) L_F`.
pub fn operator_norm(
    disc: &Discretization,
    weight: &PlaneField,
    seed: Option<&HardyVector>,
    opts: &PowerOptions,
) -> Result<NormEstimate> {
    let positive = weight.is_real_nonnegative();
    let conj = if positive { None } else { Some(weight.map(|v| v.conj())) };
    let apply = |f: &HardyVector| -> HardyVector {
        let lf = disc.localization_apply(weight, f);
        match &conj {
            None => lf,
            Some(c) => disc.localization_apply(c, &lf),
        }
    };

    let mut v = seed.cloned().unwrap_or_else(|| default_seed(disc));
    let n0 = v.norm_sqr(&disc.freq).sqrt();
    if !(n0 > 0.0) {
        return Err(Error::invalid("power iteration seed has zero norm"));
    }
    v.scale(1.0 / n0);
    let mut history = Vec::new();
    let mut last = f64::NAN;
    for it in 1..=opts.max_iter {
        let w = apply(&v);
        let rq = v.inner(&w, &disc.freq).re;
        history.push(rq);
        let nw = w.norm_sqr(&disc.freq).sqrt();
        if nw == 0.0 {
            return Ok(NormEstimate { norm: 0.0, iterations: it, converged: true, history });
        }
        if (rq - last).abs() <= opts.tol * rq.abs() {
            let norm = if positive { rq } else { rq.max(0.0).sqrt() };
            return Ok(NormEstimate { norm, iterations: it, converged: true, history });
        }
        last = rq;
        v = w;
        v.scale(1.0 / nw);
    }
    let tail: Vec<String> = history.iter().rev().take(5).map(|x| format!("{x:.12e}")).collect();
    Err(Error::NonConvergence {
        what: "power iteration",
        iterations: opts.max_iter,
        detail: format!("last Rayleigh quotients {}", tail.join(", ")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::g_eval;
    use crate::profile::disc_radius;
    use crate::verifier::grids::GridSpec;
    use crate::weight::{pseudo_hyperbolic, HalfPlanePoint};

    fn disc() -> Discretization {
        Discretization::new(
            0.5,
            GridSpec { half_width: 21.0, n_omega: 128, n_x: 128, y_min: 1e-3, y_max: 50.0, n_y: 96 },
        )
        .unwrap()
    }

    #[test]
    fn indicator_of_disc_respects_concentration_bound() {
        let d = disc();
        for s in [1.0, 5.0, 20.0] {
            let r = disc_radius(s);
            let w = d.sample_weight(|z| {
                Complex64::new(if pseudo_hyperbolic(z, HalfPlanePoint::I) < r { 1.0 } else { 0.0 }, 0.0)
            });
            let est = operator_norm(&d, &w, None, &PowerOptions::default()).unwrap();
            let g = g_eval(s, 0.5).unwrap();
            assert!(est.norm <= g * 1.02, "s = {s}: {} vs {g}", est.norm);
            assert!(est.norm >= g * 0.8, "s = {s}: {} vs {g}", est.norm);
        }
    }

    #[test]
    fn phase_leaves_norm_unchanged() {
        let d = disc();
        let base = |z: HalfPlanePoint| (1.0 - pseudo_hyperbolic(z, HalfPlanePoint::I)).powi(3);
        let real = d.sample_weight(|z| Complex64::new(base(z), 0.0));
        let rotated = d.sample_weight(|z| Complex64::from_polar(base(z), std::f64::consts::PI / 3.0));
        let opts = PowerOptions { tol: 1e-12, max_iter: 2000 };
        let a = operator_norm(&d, &real, None, &opts).unwrap().norm;
        let b = operator_norm(&d, &rotated, None, &opts).unwrap().norm;
        assert!((a - b).abs() <= 1e-6 * a, "{a} vs {b}");
    }

    #[test]
    fn rayleigh_quotients_are_nonnegative() {
        let d = disc();
        let w = d.sample_weight(|z| Complex64::new((-(z.x * z.x) - z.y).exp(), 0.0));
        let est = operator_norm(&d, &w, None, &PowerOptions::default()).unwrap();
        assert!(est.history.iter().all(|&r| r >= 0.0));
        assert!(est.history.windows(2).all(|h| h[1] >= h[0] * (1.0 - 1e-12)));
    }

    #[test]
    fn zero_seed_is_rejected() {
        let d = disc();
        let w = d.sample_weight(|_| Complex64::new(1.0, 0.0));
        let zero = d.vector(|_| Complex64::new(0.0, 0.0));
        assert!(operator_norm(&d, &w, Some(&zero), &PowerOptions::default()).is_err());
    }
}
