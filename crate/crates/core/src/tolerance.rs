//! Pass/fail thresholds used by the checks and the acceptance suite.

use crate::field::DerivativeMode;

/// Relative budget for quadrature identities with analytic derivatives.
pub const ANALYTIC_REL: f64 = 1e-9;
/// Same, when divergences come from finite differences.
pub const FD_REL: f64 = 1e-5;
/// Analytic stress against central differences of the energy.
pub const CONSTITUTIVE_REL: f64 = 1e-6;
pub const ESHELBY_FIXTURE_ABS: f64 = 1e-9;
/// Observer-change coefficients, relative to the power scale.
pub const INVARIANCE_COEFFICIENT_REL: f64 = 1e-8;
pub const AFFINE_FIT_REL: f64 = crate::harness::invariance::AFFINE_FIT_TOL;
/// Required error reduction from quadrature order 4 to order 8.
pub const CONVERGENCE_FACTOR: f64 = 100.0;
/// Errors below this, relative to the integrand magnitude, count as
/// rounding.
pub const FLOAT_FLOOR_REL: f64 = 1e-13;
pub const SURFACE_INDEPENDENCE_REL: f64 = 1e-6;
pub const SURFACE_CONTROL_REL: f64 = 1e-5;
pub const NOETHER_CONDITION_ABS: f64 = 1e-10;
pub const NOETHER_DIVERGENCE_ABS: f64 = 1e-6;
pub const NOETHER_GRADED_ABS: f64 = 1e-8;
pub const TORQUE_REL: f64 = 1e-10;
pub const STANDARD_POWER_REL: f64 = 1e-12;
/// Conditioning below which fitted grouping weights are not identifiable.
pub const GROUPING_CONDITIONING_MIN: f64 = 1e-6;

pub fn budget(mode: DerivativeMode) -> f64 {
    match mode {
        DerivativeMode::Analytic => ANALYTIC_REL,
        DerivativeMode::FiniteDifference => FD_REL,
    }
}
