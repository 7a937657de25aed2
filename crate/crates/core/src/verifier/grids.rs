use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Resolution of a discretization of the wavelet transform.
///
/// The frequency nodes are the midpoints `(k + 1/2) dw` of a uniform grid
/// and the `x` nodes sample one period `[-X, X)` with `dw = pi / X`. With
/// `n_x >= n_omega` the discrete `x` sum is then exactly orthogonal across
/// frequency nodes, so the only isometry loss comes from the `y` rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub half_width: f64,
    pub n_omega: usize,
    pub n_x: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub n_y: usize,
}

impl GridSpec {
    /// Grids used by the acceptance checks.
    pub fn desk() -> Self {
        GridSpec {
            half_width: 30.0,
            n_omega: 256,
            n_x: 256,
            y_min: 1e-4,
            y_max: 100.0,
            n_y: 144,
        }
    }

    /// Three levels of simultaneous refinement ending at [`GridSpec::desk`].
    pub fn ladder() -> [GridSpec; 3] {
        [
            GridSpec {
                half_width: 15.0,
                n_omega: 64,
                n_x: 64,
                y_min: 1e-2,
                y_max: 25.0,
                n_y: 48,
            },
            GridSpec {
                half_width: 21.0,
                n_omega: 128,
                n_x: 128,
                y_min: 1e-3,
                y_max: 50.0,
                n_y: 96,
            },
            GridSpec::desk(),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.half_width > 0.0
            && self.half_width.is_finite()
            && self.n_omega >= 8
            && self.n_x >= self.n_omega
            && self.y_min > 0.0
            && self.y_max > self.y_min
            && self.y_max.is_finite()
            && self.n_y >= 8;
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "invalid grid {self:?}: need X > 0, n_omega >= 8, n_x >= n_omega, 0 < y_min < y_max, n_y >= 8"
            )))
        }
    }

    pub fn omega_step(&self) -> f64 {
        std::f64::consts::PI / self.half_width
    }

    pub fn omega_max(&self) -> f64 {
        self.n_omega as f64 * self.omega_step()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(spec: &GridSpec) -> Self {
        let dw = spec.omega_step();
        FrequencyGrid {
            nodes: (0..spec.n_omega).map(|k| (k as f64 + 0.5) * dw).collect(),
            weights: vec![dw; spec.n_omega],
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlaneGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub dx: f64,
    /// Trapezoid weights in `ln y`.
    pub log_weights: Vec<f64>,
}

impl PlaneGrid {
    pub fn new(spec: &GridSpec) -> Self {
        let dx = 2.0 * spec.half_width / spec.n_x as f64;
        let xs = (0..spec.n_x).map(|j| -spec.half_width + j as f64 * dx).collect();
        let (lo, hi) = (spec.y_min.ln(), spec.y_max.ln());
        let h = (hi - lo) / (spec.n_y - 1) as f64;
        let ys = (0..spec.n_y).map(|l| (lo + l as f64 * h).exp()).collect();
        let mut log_weights = vec![h; spec.n_y];
        log_weights[0] *= 0.5;
        log_weights[spec.n_y - 1] *= 0.5;
        PlaneGrid { xs, ys, dx, log_weights }
    }

    /// Cell weight for `dx dy / y^2` at row `l`.
    pub fn nu(&self, l: usize) -> f64 {
        self.dx * self.log_weights[l] / self.ys[l]
    }

    pub fn len(&self) -> usize {
        self.xs.len() * self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
