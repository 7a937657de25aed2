//! Problem parameters, the exponent constants derived from them, and the
//! classification of an instance into one of the three regimes.
//!
//! An instance is the five scalars `(beta, p, q, A, B)`: the Cauchy wavelet
//! exponent and two Lebesgue budgets `||F||_p <= A`, `||F||_q <= B` on the
//! weight. Whether one or both budgets bind depends only on the ratio `B/A`
//! relative to the thresholds `r1 < r2`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) const FOUR_PI: f64 = 4.0 * PI;

/// Relative tolerance under which `B/A` is considered to sit on a threshold.
pub const BOUNDARY_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub beta: f64,
    pub p: f64,
    pub q: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

impl ProblemParams {
    pub fn new(beta: f64, p: f64, q: f64, a: f64, b: f64) -> Result<Self> {
        let params = ProblemParams { beta, p, q, a, b };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("beta", self.beta),
            ("p", self.p),
            ("q", self.q),
            ("A", self.a),
            ("B", self.b),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite, got {value}")));
            }
        }
        if self.beta <= 0.0 {
            return Err(Error::invalid(format!("beta must be positive, got {}", self.beta)));
        }
        if self.p <= 1.0 || self.q <= 1.0 {
            return Err(Error::invalid(format!(
                "exponents must exceed 1, got p = {}, q = {}",
                self.p, self.q
            )));
        }
        if self.p == self.q {
            return Err(Error::EqualExponents(self.p));
        }
        if self.a <= 0.0 || self.b <= 0.0 {
            return Err(Error::invalid(format!(
                "budgets must be positive, got A = {}, B = {}",
                self.a, self.b
            )));
        }
        Ok(())
    }

    /// The mirrored instance `(q, p, B, A)`.
    pub fn swapped(&self) -> Self {
        ProblemParams {
            beta: self.beta,
            p: self.q,
            q: self.p,
            a: self.b,
            b: self.a,
        }
    }

    /// Orders the exponents so that `p < q`. The flag records whether the
    /// roles were exchanged.
    pub fn canonical(&self) -> (Self, bool) {
        if self.p < self.q {
            (*self, false)
        } else {
            (self.swapped(), true)
        }
    }

    pub fn ratio(&self) -> f64 {
        self.b / self.a
    }

    pub fn with_budgets(&self, a: f64, b: f64) -> Self {
        ProblemParams { a, b, ..*self }
    }
}

/// Which of the two Lebesgue constraints a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    P,
    Q,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::P => Side::Q,
            Side::Q => Side::P,
        }
    }
}

/// `alpha`, `sigma` and `kappa` for one exponent `e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentConstants {
    pub exponent: f64,
    /// `(e - 1) / (2 beta + 1)`
    pub alpha: f64,
    /// `(e - 1) / (2 beta e + 1)`
    pub sigma: f64,
    /// `(e - 1) / e`
    pub kappa: f64,
}

impl ExponentConstants {
    pub fn new(exponent: f64, beta: f64) -> Self {
        let m = exponent - 1.0;
        ExponentConstants {
            exponent,
            alpha: m / (2.0 * beta + 1.0),
            sigma: m / (2.0 * beta * exponent + 1.0),
            kappa: m / exponent,
        }
    }
}

/// A regime threshold. It is undefined when the single-constraint extremal
/// of the other side has an infinite cross norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Threshold {
    Finite(f64),
    Undefined,
}

impl Threshold {
    pub fn value(self) -> Option<f64> {
        match self {
            Threshold::Finite(v) => Some(v),
            Threshold::Undefined => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Threshold::Finite(_))
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(v) => write!(f, "{v}"),
            Threshold::Undefined => f.write_str("undefined"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub beta: f64,
    pub p: ExponentConstants,
    pub q: ExponentConstants,
    pub r1: Threshold,
    pub r2: Threshold,
}

impl DerivedConstants {
    pub fn side(&self, side: Side) -> &ExponentConstants {
        match side {
            Side::P => &self.p,
            Side::Q => &self.q,
        }
    }

    /// Reports a violated threshold ordering instead of failing.
    pub fn threshold_diagnostic(&self) -> Option<String> {
        match (self.r1, self.r2) {
            (Threshold::Finite(r1), Threshold::Finite(r2)) if r1 >= r2 => Some(format!(
                "threshold ordering violated: r1 = {r1:e} >= r2 = {r2:e}"
            )),
            _ => None,
        }
    }
}

/// Logarithm of `||F_e||_{e'} / budget_e` for the single-constraint extremal
/// of exponent `e`, or `None` when that norm is infinite (`e' <= alpha_e`).
///
/// `r2 = exp(cross_log_ratio(p, q))` and `r1 = exp(-cross_log_ratio(q, p))`.
pub(crate) fn cross_log_ratio(active: &ExponentConstants, other_exponent: f64) -> Option<f64> {
    let alpha = active.alpha;
    if other_exponent <= alpha {
        return None;
    }
    let e = active.exponent;
    let f = other_exponent;
    Some(
        (1.0 / f - 1.0 / e) * FOUR_PI.ln() + (alpha / (f - alpha)).ln() / f
            - active.sigma.ln() / e,
    )
}

pub fn derive_constants(params: &ProblemParams) -> Result<DerivedConstants> {
    params.validate()?;
    let cp = ExponentConstants::new(params.p, params.beta);
    let cq = ExponentConstants::new(params.q, params.beta);
    let r2 = match cross_log_ratio(&cp, params.q) {
        Some(l) => Threshold::Finite(l.exp()),
        None => Threshold::Undefined,
    };
    let r1 = match cross_log_ratio(&cq, params.p) {
        Some(l) => Threshold::Finite((-l).exp()),
        None => Threshold::Undefined,
    };
    Ok(DerivedConstants {
        beta: params.beta,
        p: cp,
        q: cq,
        r1,
        r2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeKind {
    /// Only the `L^p` budget binds.
    SingleP,
    /// Only the `L^q` budget binds.
    SingleQ,
    /// Both budgets bind.
    Dual,
}

impl RegimeKind {
    pub fn swapped(self) -> Self {
        match self {
            RegimeKind::SingleP => RegimeKind::SingleQ,
            RegimeKind::SingleQ => RegimeKind::SingleP,
            RegimeKind::Dual => RegimeKind::Dual,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RegimeKind::SingleP => "SingleP",
            RegimeKind::SingleQ => "SingleQ",
            RegimeKind::Dual => "Dual",
        }
    }
}

impl fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regime {
    pub kind: RegimeKind,
    /// `B/A` equals `r1` or `r2` up to [`BOUNDARY_REL_TOL`].
    pub boundary: bool,
}

pub fn classify_regime(params: &ProblemParams, consts: &DerivedConstants) -> Regime {
    let ratio = params.ratio();
    let near = |r: f64| (ratio - r).abs() <= BOUNDARY_REL_TOL * r;

    if let Threshold::Finite(r2) = consts.r2 {
        if ratio >= r2 || near(r2) {
            return Regime {
                kind: RegimeKind::SingleP,
                boundary: near(r2),
            };
        }
    }
    if let Threshold::Finite(r1) = consts.r1 {
        if ratio <= r1 || near(r1) {
            return Regime {
                kind: RegimeKind::SingleQ,
                boundary: near(r1),
            };
        }
    }
    Regime {
        kind: RegimeKind::Dual,
        boundary: false,
    }
}
