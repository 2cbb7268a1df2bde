//! Relative power of observer-dependent actions on elastic bodies: stresses,
//! configurational balances, quadrature of the power functionals and a
//! scenario runner.

pub mod configurational;
pub mod error;
pub mod fd;
pub mod harness;
pub mod field;
pub mod material;
pub mod scenario;
pub mod tensor;
pub mod tolerance;

pub use configurational::{BodyForce, ClosureFields, PointState, PointwiseResiduals, Scenario, Sources};
pub use error::{Error, Result};
pub use field::{DerivativeMode, Domain, FieldPreset, Motion, MotionPreset, ObserverChange, VirtualFieldPair};
pub use material::{MaterialModel, ModelKind, ModulusField, Potential};
pub use tensor::{Tensor33, Vector3};
