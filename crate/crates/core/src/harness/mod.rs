//! Quadrature over parts, the power functionals, the invariance defect and
//! the surface-independence check.

pub mod invariance;
pub mod part;
pub mod power;
pub mod quadrature;
pub mod surface;

pub use invariance::{grouping_comparison, invariance_decomposition, GroupingComparison, InvarianceDecomposition};
pub use part::{BodyPart, Geometry, QuadratureSpec};
pub use power::{
    inner_relative_power, integral_balance_residuals, relative_power, standard_external_power, IntegralBalances,
    PartEvaluation, PowerTerms, RelativePower,
};
pub use quadrature::{AngularRule, Quantity};
pub use surface::{surface_flux_difference, surface_independence_check, Sphere, SurfaceReport};
