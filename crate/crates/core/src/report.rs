use serde::{Deserialize, Serialize};

use crate::problem::{DerivedConstants, ProblemParams, Regime, RegimeKind};

/// Version tag carried by every serialized report.
pub const SCHEMA: &str = "wavelock/1";

/// Outcome of [`crate::solver::compute_bound`]. Quantities that do not apply
/// to the regime are `None`, never zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub schema: String,
    pub params: ProblemParams,
    pub regime: RegimeKind,
    pub boundary: bool,
    pub bound: f64,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub lambda1: f64,
    pub lambda2: f64,
    #[serde(rename = "T")]
    pub t_end: Option<f64>,
    /// Centre value of the single-regime extremal profile.
    pub amplitude: Option<f64>,
    /// Norm of the single-regime extremal in the slack exponent.
    pub cross_norm: Option<f64>,
    pub residual_p: Option<f64>,
    pub residual_q: Option<f64>,
    pub diagnostics: Vec<String>,
    #[serde(rename = "wall_time_s")]
    pub elapsed: Option<f64>,
}

impl BoundReport {
    pub(crate) fn new(params: ProblemParams, regime: Regime, consts: &DerivedConstants) -> Self {
        BoundReport {
            schema: SCHEMA.to_string(),
            params,
            regime: regime.kind,
            boundary: regime.boundary,
            bound: f64::NAN,
            r1: consts.r1.value(),
            r2: consts.r2.value(),
            lambda1: 0.0,
            lambda2: 0.0,
            t_end: None,
            amplitude: None,
            cross_norm: None,
            residual_p: None,
            residual_q: None,
            diagnostics: Vec::new(),
            elapsed: None,
        }
    }
}
