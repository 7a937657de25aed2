//! Sharp operator-norm bounds for Cauchy-wavelet localization operators whose
//! weight is constrained in two Lebesgue norms at once.
//!
//! Given `(beta, p, q, A, B)` the crate
//!
//! * classifies the instance into the regime where only the `L^p` budget
//!   binds, only the `L^q` budget binds, or both bind ([`problem`]);
//! * evaluates the sharp bound in closed form ([`closed_form`]) or by solving
//!   the two-multiplier system ([`solver`]);
//! * reconstructs the extremal weights on the upper half-plane ([`weight`]);
//! * checks the results against a discrete variational solver ([`oracle`])
//!   and a direct discretization of the localization operator ([`verifier`]).

pub mod closed_form;
pub mod error;
pub mod isotonic;
pub mod kernel;
pub mod oracle;
pub mod problem;
pub mod profile;
pub mod quadrature;
pub mod report;
pub mod roots;
pub mod solver;
pub mod verifier;
pub mod weight;

pub use closed_form::{single_bound, single_profile, CrossNorm, SingleConstraintResult};
pub use error::{Error, Result};
pub use kernel::{g_eval, g_prime};
pub use problem::{
    classify_regime, derive_constants, DerivedConstants, ExponentConstants, ProblemParams, Regime, RegimeKind,
    Side, Threshold,
};
pub use profile::{distribution_of_profile, RadialProfile};
pub use quadrature::QuadratureConfig;
pub use report::{BoundReport, SCHEMA};
pub use solver::{compute_bound, compute_bound_with, Multipliers};
pub use weight::{ExtremalWeight, HalfPlanePoint};
