use num_complex::Complex64;
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use super::grids::{FrequencyGrid, GridSpec, PlaneGrid};
use crate::error::{Error, Result};
use crate::weight::HalfPlanePoint;

/// `c_beta = 2^beta / sqrt(2 pi Gamma(2 beta))`, so that
/// `2 pi int |psi_hat|^2 dw / w = 1`.
pub fn cauchy_constant(beta: f64) -> f64 {
    (beta * std::f64::consts::LN_2 - 0.5 * ((2.0 * std::f64::consts::PI).ln() + ln_gamma(2.0 * beta))).exp()
}

/// `c_beta w^beta e^(-w)` for `w > 0`, zero otherwise.
pub fn cauchy_wavelet_hat(omega: f64, beta: f64) -> f64 {
    if omega <= 0.0 {
        return 0.0;
    }
    (cauchy_constant(beta).ln() + beta * omega.ln() - omega).exp()
}

/// Fourier coefficients of an `H^2` function at the frequency nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct HardyVector {
    pub coeffs: Vec<Complex64>,
}

impl HardyVector {
    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: &FrequencyGrid, f: F) -> Self {
        HardyVector {
            coeffs: grid.nodes.iter().map(|&w| f(w)).collect(),
        }
    }

    pub fn inner(&self, other: &HardyVector, grid: &FrequencyGrid) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .zip(&grid.weights)
            .map(|((a, b), w)| a.conj() * b * *w)
            .sum()
    }

    pub fn norm_sqr(&self, grid: &FrequencyGrid) -> f64 {
        self.coeffs
            .iter()
            .zip(&grid.weights)
            .map(|(a, w)| a.norm_sqr() * w)
            .sum()
    }

    pub fn scale(&mut self, s: f64) {
        self.coeffs.iter_mut().for_each(|c| *c *= s);
    }
}

/// Complex samples on a plane grid, row-major in `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneField {
    pub n_x: usize,
    pub values: Vec<Complex64>,
}

impl PlaneField {
    pub fn sample<F: Fn(HalfPlanePoint) -> Complex64 + Sync>(plane: &PlaneGrid, f: F) -> Self {
        let values = plane
            .ys
            .par_iter()
            .flat_map_iter(|&y| plane.xs.iter().map(move |&x| (x, y)).collect::<Vec<_>>())
            .map(|(x, y)| f(HalfPlanePoint { x, y }))
            .collect();
        PlaneField { n_x: plane.xs.len(), values }
    }

    pub fn row(&self, l: usize) -> &[Complex64] {
        &self.values[l * self.n_x..(l + 1) * self.n_x]
    }

    pub fn is_real_nonnegative(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0 && v.re >= 0.0)
    }

    /// `(sum |F|^e nu)^(1/e)` over the grid.
    pub fn lebesgue_norm(&self, plane: &PlaneGrid, exponent: f64) -> f64 {
        let total: f64 = (0..plane.ys.len())
            .map(|l| plane.nu(l) * self.row(l).iter().map(|v| v.norm().powf(exponent)).sum::<f64>())
            .sum();
        total.powf(1.0 / exponent)
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        PlaneField {
            n_x: self.n_x,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// Precomputed tables for one `(beta, grid)` pair.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub beta: f64,
    pub spec: GridSpec,
    pub freq: FrequencyGrid,
    pub plane: PlaneGrid,
    /// `e^(i x_j w_k)`, row-major in `j`.
    phases: Vec<Complex64>,
    /// `sqrt(y_l) psi_hat(y_l w_k)`, row-major in `l`.
    windows: Vec<f64>,
}

impl Discretization {
    pub fn new(beta: f64, spec: GridSpec) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::invalid(format!("beta must be positive, got {beta}")));
        }
        spec.validate()?;
        let freq = FrequencyGrid::new(&spec);
        let plane = PlaneGrid::new(&spec);
        let mut phases = Vec::with_capacity(plane.xs.len() * freq.len());
        for &x in &plane.xs {
            phases.extend(freq.nodes.iter().map(|&w| Complex64::from_polar(1.0, x * w)));
        }
        let mut windows = Vec::with_capacity(plane.ys.len() * freq.len());
        for &y in &plane.ys {
            windows.extend(freq.nodes.iter().map(|&w| y.sqrt() * cauchy_wavelet_hat(y * w, beta)));
        }
        Ok(Discretization {
            beta,
            spec,
            freq,
            plane,
            phases,
            windows,
        })
    }

    fn n_omega(&self) -> usize {
        self.freq.len()
    }

    fn window(&self, l: usize) -> &[f64] {
        &self.windows[l * self.n_omega()..(l + 1) * self.n_omega()]
    }

    fn phase_row(&self, j: usize) -> &[Complex64] {
        &self.phases[j * self.n_omega()..(j + 1) * self.n_omega()]
    }

    pub fn vector<F: Fn(f64) -> Complex64>(&self, f: F) -> HardyVector {
        HardyVector::from_fn(&self.freq, f)
    }

    /// `Wf(x, y) = sqrt(y) int f_hat(w) psi_hat(y w) e^(i x w) dw` at every node.
    pub fn wavelet_transform(&self, f: &HardyVector) -> PlaneField {
        let n_x = self.plane.xs.len();
        let values: Vec<Complex64> = (0..self.plane.ys.len())
            .into_par_iter()
            .flat_map_iter(|l| {
                let a: Vec<Complex64> = f
                    .coeffs
                    .iter()
                    .zip(self.window(l))
                    .zip(&self.freq.weights)
                    .map(|((c, s), w)| c * (s * w))
                    .collect();
                (0..n_x)
                    .map(|j| a.iter().zip(self.phase_row(j)).map(|(x, e)| x * e).sum::<Complex64>())
                    .collect::<Vec<_>>()
            })
            .collect();
        PlaneField { n_x, values }
    }

    /// Adjoint of [`Self::wavelet_transform`] applied to `g * nu`.
    fn adjoint(&self, g: &PlaneField) -> HardyVector {
        let n_w = self.n_omega();
        let rows: Vec<Vec<Complex64>> = (0..self.plane.ys.len())
            .into_par_iter()
            .map(|l| {
                let nu = self.plane.nu(l);
                let mut acc = vec![Complex64::new(0.0, 0.0); n_w];
                for (j, gv) in g.row(l).iter().enumerate() {
                    if *gv == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for (a, e) in acc.iter_mut().zip(self.phase_row(j)) {
                        *a += gv * e.conj();
                    }
                }
                for (a, s) in acc.iter_mut().zip(self.window(l)) {
                    *a *= s * nu;
                }
                acc
            })
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); n_w];
        for row in rows {
            for (o, r) in out.iter_mut().zip(row) {
                *o += r;
            }
        }
        HardyVector { coeffs: out }
    }

    /// `(L_F f)^(w') = int F Wf sqrt(y) psi_hat(y w') e^(-i x w') dnu`.
    pub fn localization_apply(&self, weight: &PlaneField, f: &HardyVector) -> HardyVector {
        let wf = self.wavelet_transform(f);
        let prod = PlaneField {
            n_x: wf.n_x,
            values: wf.values.iter().zip(&weight.values).map(|(a, b)| a * b).collect(),
        };
        self.adjoint(&prod)
    }

    /// `||Wf||^2` over the grid.
    pub fn transform_energy(&self, wf: &PlaneField) -> f64 {
        (0..self.plane.ys.len())
            .map(|l| self.plane.nu(l) * wf.row(l).iter().map(|v| v.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// `| ||Wf||^2 / ||f||^2 - 1 |`.
    pub fn isometry_defect(&self, f: &HardyVector) -> f64 {
        let e = self.transform_energy(&self.wavelet_transform(f));
        (e / f.norm_sqr(&self.freq) - 1.0).abs()
    }

    pub fn sample_weight<F: Fn(HalfPlanePoint) -> Complex64 + Sync>(&self, f: F) -> PlaneField {
        PlaneField::sample(&self.plane, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, QuadratureConfig};
    use approx::assert_relative_eq;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn wavelet_normalization() {
        let cfg = QuadratureConfig::default();
        for beta in [0.5, 1.0, 2.0] {
            let r = integrate(|w| cauchy_wavelet_hat(w, beta).powi(2) / w, 0.0, 60.0, &cfg).unwrap();
            assert_relative_eq!(2.0 * std::f64::consts::PI * r.value, 1.0, max_relative = 1e-10);
        }
        assert_eq!(cauchy_wavelet_hat(0.0, 0.5), 0.0);
        assert!(cauchy_wavelet_hat(1e-12, 0.5) < 1e-6);
        let b = 1.3;
        assert!(cauchy_wavelet_hat(b, b) > cauchy_wavelet_hat(b * 0.999, b));
        assert!(cauchy_wavelet_hat(b, b) > cauchy_wavelet_hat(b * 1.001, b));
    }

    fn small() -> Discretization {
        Discretization::new(
            0.5,
            GridSpec {
                half_width: 15.0,
                n_omega: 64,
                n_x: 64,
                y_min: 1e-3,
                y_max: 40.0,
                n_y: 64,
            },
        )
        .unwrap()
    }

    #[test]
    fn transform_at_i_is_inner_product() {
        let disc = Discretization::new(
            0.5,
            GridSpec {
                half_width: 15.0,
                n_omega: 64,
                n_x: 64,
                y_min: 1e-2,
                y_max: 1.0,
                n_y: 9,
            },
        )
        .unwrap();
        let f = disc.vector(|w| Complex64::new(w * (-w).exp(), 0.3 * w));
        let wf = disc.wavelet_transform(&f);
        let psi = disc.vector(|w| c(cauchy_wavelet_hat(w, 0.5)));
        let expected = psi.inner(&f, &disc.freq);
        // Row for y = 1 is the last, column for x = 0 is the middle.
        let got = wf.row(8)[32];
        assert!(disc.plane.xs[32].abs() < 1e-14);
        assert!((got - expected).norm() < 1e-13 * expected.norm());
    }

    #[test]
    fn transform_is_linear() {
        let disc = small();
        let f = disc.vector(|w| c(w * (-w).exp()));
        let g = disc.vector(|w| Complex64::new(0.0, w * w * (-w).exp()));
        let sum = HardyVector {
            coeffs: f.coeffs.iter().zip(&g.coeffs).map(|(a, b)| a * 2.0 + b).collect(),
        };
        let (wf, wg, ws) = (disc.wavelet_transform(&f), disc.wavelet_transform(&g), disc.wavelet_transform(&sum));
        for i in 0..ws.values.len() {
            assert!((ws.values[i] - (wf.values[i] * 2.0 + wg.values[i])).norm() < 1e-12);
        }
    }

    #[test]
    fn localization_is_self_adjoint_for_real_weight() {
        let disc = small();
        let weight = disc.sample_weight(|z| c((-(z.x * z.x) - (z.y - 1.0).powi(2)).exp()));
        let f = disc.vector(|w| Complex64::new(w * (-w).exp(), 0.2 * w.sqrt() * (-w).exp()));
        let g = disc.vector(|w| c(w * w * (-0.7 * w).exp()));
        let lf = disc.localization_apply(&weight, &f);
        let lg = disc.localization_apply(&weight, &g);
        let a = lf.inner(&g, &disc.freq);
        let b = f.inner(&lg, &disc.freq);
        assert!((a - b).norm() <= 1e-10 * a.norm());
        let rq = lf.inner(&f, &disc.freq);
        assert!(rq.re > 0.0 && rq.im.abs() < 1e-12 * rq.re);
    }

    #[test]
    fn zero_weight_gives_zero() {
        let disc = small();
        let weight = disc.sample_weight(|_| c(0.0));
        let f = disc.vector(|w| c(w * (-w).exp()));
        assert!(disc.localization_apply(&weight, &f).coeffs.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn constant_weight_resolves_identity() {
        let f_hat = |w: f64| c(w * (-w).exp());
        let mut last = f64::INFINITY;
        for spec in GridSpec::ladder() {
            let disc = Discretization::new(0.5, spec).unwrap();
            let f = disc.vector(f_hat);
            let one = disc.sample_weight(|_| c(1.0));
            let rq = disc.localization_apply(&one, &f).inner(&f, &disc.freq).re;
            let gap = (rq / f.norm_sqr(&disc.freq) - 1.0).abs();
            assert!(gap < last, "{gap} !< {last}");
            last = gap;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn scaling_covariance() {
        // With s = 1/2, g_hat(w) = sqrt(s) f_hat(s w) sampled on grid B picks up
        // exactly the nodes of grid A, whose frequency step is half as large.
        let s = 0.5;
        let a = Discretization::new(
            0.5,
            GridSpec { half_width: 20.0, n_omega: 64, n_x: 64, y_min: 0.02, y_max: 20.48, n_y: 11 },
        )
        .unwrap();
        let b = Discretization::new(
            0.5,
            GridSpec { half_width: 10.0, n_omega: 64, n_x: 64, y_min: 0.01, y_max: 10.24, n_y: 11 },
        )
        .unwrap();
        let f_hat = |w: f64| Complex64::new(w * (-w).exp(), 0.5 * w * w * (-w).exp());
        let f = a.vector(f_hat);
        let g = b.vector(|w| f_hat(s * w) * s.sqrt());
        let (wf, wg) = (a.wavelet_transform(&f), b.wavelet_transform(&g));
        let scale = wf.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for l in 0..11 {
            assert!((b.plane.ys[l] / s - a.plane.ys[l]).abs() < 1e-12 * a.plane.ys[l]);
            for j in 0..64 {
                assert!((b.plane.xs[j] / s - a.plane.xs[j]).abs() < 1e-12);
                assert!((wg.row(l)[j] - wf.row(l)[j]).norm() < 1e-12 * scale);
            }
        }
    }
}
