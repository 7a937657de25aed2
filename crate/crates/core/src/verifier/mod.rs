//! Direct discretization of the Cauchy wavelet transform and of localization
//! operators, used to check the analytic bounds from first principles.

pub mod grids;
pub mod operator;
pub mod transform;

pub use grids::{FrequencyGrid, GridSpec, PlaneGrid};
pub use operator::{default_seed, operator_norm, NormEstimate, PowerOptions};
pub use transform::{cauchy_constant, cauchy_wavelet_hat, Discretization, HardyVector, PlaneField};
