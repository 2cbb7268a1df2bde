//! Motions, virtual velocity fields and isometric observer changes.
//!
//! A [`Motion`] maps reference points to ambient points. Virtual fields are
//! evaluated over the reference place: `v` takes values in ambient space and
//! `w` in material space. Observer changes superpose rigid rates on both,
//!
//! ```text
//! v* = ĉ + q̂ × (y − y₀) + v
//! w* = c + q × (x − x₀) + w
//! ```
//!
//! Analytic derivatives are used whenever a preset provides them; otherwise
//! central differences are taken with the configured steps.

use std::fmt;
use std::sync::Arc;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd;
use crate::tensor::{Tensor33, Vector3};

pub const DEFAULT_H_MOTION: f64 = 1e-5;
pub const DEFAULT_H_SECOND: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeMode {
    /// Analytic derivatives where the presets supply them, differences otherwise.
    #[default]
    Analytic,
    /// Central differences everywhere, even when analytic forms exist.
    FiniteDifference,
}

/// A placement map with optional analytic derivatives.
pub trait Placement: Send + Sync + fmt::Debug {
    fn place(&self, x: Vector3) -> Vector3;

    fn gradient(&self, _x: Vector3) -> Option<Tensor33> {
        None
    }

    /// `∂F/∂x_k` for k = 0, 1, 2.
    fn second_gradient(&self, _x: Vector3) -> Option<[Tensor33; 3]> {
        None
    }
}

/// Shipped motion presets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MotionPreset {
    Identity,
    /// `y = F₀ x`.
    Homogeneous { gradient: [[f64; 3]; 3] },
    /// `y = R x` with `R` the rotation about `axis` by `angle`.
    RigidRotation { axis: [f64; 3], angle: f64 },
    /// `y = x + γ x₂ e₁`.
    SimpleShear { gamma: f64 },
    /// `y = x + α (x₁² − x₂², −2 x₁ x₂, 0)`; componentwise harmonic.
    Harmonic { alpha: f64 },
    /// `y = x + a sin(k·x) d`.
    Sinusoidal {
        amplitude: f64,
        wavevector: [f64; 3],
        direction: [f64; 3],
    },
    /// `y = R ŷ(x) + t` for a base motion `ŷ`.
    Superposed {
        axis: [f64; 3],
        angle: f64,
        #[serde(default)]
        translation: [f64; 3],
        base: Box<MotionPreset>,
    },
}

impl MotionPreset {
    pub fn name(&self) -> &'static str {
        match self {
            MotionPreset::Identity => "identity",
            MotionPreset::Homogeneous { .. } => "homogeneous",
            MotionPreset::RigidRotation { .. } => "rigid_rotation",
            MotionPreset::SimpleShear { .. } => "simple_shear",
            MotionPreset::Harmonic { .. } => "harmonic",
            MotionPreset::Sinusoidal { .. } => "sinusoidal",
            MotionPreset::Superposed { .. } => "superposed",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|c| c.is_finite());
        let ok = match self {
            MotionPreset::Identity => true,
            MotionPreset::Homogeneous { gradient } => finite(gradient.as_flattened()),
            MotionPreset::RigidRotation { axis, angle } => finite(axis) && angle.is_finite(),
            MotionPreset::SimpleShear { gamma } => gamma.is_finite(),
            MotionPreset::Harmonic { alpha } => alpha.is_finite(),
            MotionPreset::Sinusoidal {
                amplitude,
                wavevector,
                direction,
            } => amplitude.is_finite() && finite(wavevector) && finite(direction),
            MotionPreset::Superposed {
                axis,
                angle,
                translation,
                base,
            } => {
                base.validate()?;
                finite(axis) && angle.is_finite() && finite(translation)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ConfigInvalid(format!(
                "motion preset `{}` has non-finite parameters",
                self.name()
            )))
        }
    }
}

impl Placement for MotionPreset {
    fn place(&self, x: Vector3) -> Vector3 {
        match self {
            MotionPreset::Identity => x,
            MotionPreset::Homogeneous { gradient } => Tensor33(*gradient) * x,
            MotionPreset::RigidRotation { axis, angle } => {
                Tensor33::rotation(Vector3(*axis), *angle) * x
            }
            MotionPreset::SimpleShear { gamma } => x + Vector3::unit(0) * (gamma * x[1]),
            MotionPreset::Harmonic { alpha } => {
                x + Vector3::new(x[0] * x[0] - x[1] * x[1], -2.0 * x[0] * x[1], 0.0) * *alpha
            }
            MotionPreset::Sinusoidal {
                amplitude,
                wavevector,
                direction,
            } => x + Vector3(*direction) * (amplitude * Vector3(*wavevector).dot(&x).sin()),
            MotionPreset::Superposed {
                axis,
                angle,
                translation,
                base,
            } => Tensor33::rotation(Vector3(*axis), *angle) * base.place(x) + Vector3(*translation),
        }
    }

    fn gradient(&self, x: Vector3) -> Option<Tensor33> {
        Some(match self {
            MotionPreset::Identity => Tensor33::IDENTITY,
            MotionPreset::Homogeneous { gradient } => Tensor33(*gradient),
            MotionPreset::RigidRotation { axis, angle } => Tensor33::rotation(Vector3(*axis), *angle),
            MotionPreset::SimpleShear { gamma } => {
                Tensor33::IDENTITY + Vector3::unit(0).outer(&Vector3::unit(1)) * *gamma
            }
            MotionPreset::Harmonic { alpha } => {
                let h = Tensor33([
                    [2.0 * x[0], -2.0 * x[1], 0.0],
                    [-2.0 * x[1], -2.0 * x[0], 0.0],
                    [0.0; 3],
                ]);
                Tensor33::IDENTITY + h * *alpha
            }
            MotionPreset::Sinusoidal {
                amplitude,
                wavevector,
                direction,
            } => {
                let k = Vector3(*wavevector);
                Tensor33::IDENTITY + Vector3(*direction).outer(&k) * (amplitude * k.dot(&x).cos())
            }
            MotionPreset::Superposed {
                axis, angle, base, ..
            } => Tensor33::rotation(Vector3(*axis), *angle) * base.gradient(x)?,
        })
    }

    fn second_gradient(&self, x: Vector3) -> Option<[Tensor33; 3]> {
        Some(match self {
            MotionPreset::Identity
            | MotionPreset::Homogeneous { .. }
            | MotionPreset::RigidRotation { .. }
            | MotionPreset::SimpleShear { .. } => [Tensor33::ZERO; 3],
            MotionPreset::Harmonic { alpha } => [
                Tensor33::diag([2.0, -2.0, 0.0]) * *alpha,
                Tensor33([[0.0, -2.0, 0.0], [-2.0, 0.0, 0.0], [0.0; 3]]) * *alpha,
                Tensor33::ZERO,
            ],
            MotionPreset::Sinusoidal {
                amplitude,
                wavevector,
                direction,
            } => {
                let k = Vector3(*wavevector);
                let base = Vector3(*direction).outer(&k) * (-amplitude * k.dot(&x).sin());
                [base * k[0], base * k[1], base * k[2]]
            }
            MotionPreset::Superposed {
                axis, angle, base, ..
            } => {
                let r = Tensor33::rotation(Vector3(*axis), *angle);
                base.second_gradient(x)?.map(|g| r * g)
            }
        })
    }
}

/// Placement given by a closure; derivatives come from finite differences.
pub struct FnPlacement<F>(pub F);

impl<F> fmt::Debug for FnPlacement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("FnPlacement")
    }
}

impl<F> Placement for FnPlacement<F>
where
    F: Fn(Vector3) -> Vector3 + Send + Sync,
{
    fn place(&self, x: Vector3) -> Vector3 {
        (self.0)(x)
    }
}

/// Region in which fields may be evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Unbounded,
    Box { lo: Vector3, hi: Vector3 },
    Ball { center: Vector3, radius: f64 },
}

impl Domain {
    pub fn contains(&self, x: Vector3, margin: f64) -> bool {
        if !x.is_finite() {
            return false;
        }
        match self {
            Domain::Unbounded => true,
            Domain::Box { lo, hi } => {
                (0..3).all(|i| x[i] >= lo[i] - margin && x[i] <= hi[i] + margin)
            }
            Domain::Ball { center, radius } => (x - *center).norm() <= radius + margin,
        }
    }
}

#[derive(Clone)]
pub struct Motion {
    placement: Arc<dyn Placement>,
    pub h_motion: f64,
    pub h_second: f64,
    pub mode: DerivativeMode,
    pub domain: Domain,
}

impl fmt::Debug for Motion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Motion")
            .field("placement", &self.placement)
            .field("h_motion", &self.h_motion)
            .field("h_second", &self.h_second)
            .field("mode", &self.mode)
            .finish()
    }
}

impl Motion {
    pub fn new(placement: Arc<dyn Placement>) -> Self {
        Motion {
            placement,
            h_motion: DEFAULT_H_MOTION,
            h_second: DEFAULT_H_SECOND,
            mode: DerivativeMode::Analytic,
            domain: Domain::Unbounded,
        }
    }

    pub fn preset(p: MotionPreset) -> Self {
        Motion::new(Arc::new(p))
    }

    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(Vector3) -> Vector3 + Send + Sync + 'static,
    {
        Motion::new(Arc::new(FnPlacement(f)))
    }

    pub fn with_steps(mut self, h_motion: f64, h_second: f64) -> Self {
        self.h_motion = h_motion;
        self.h_second = h_second;
        self
    }

    pub fn with_mode(mut self, mode: DerivativeMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn placement(&self) -> &Arc<dyn Placement> {
        &self.placement
    }

    fn check_domain(&self, x: Vector3) -> Result<()> {
        // FD stencils of second derivatives reach 2·h_second past the boundary.
        if self.domain.contains(x, 4.0 * self.h_second) {
            Ok(())
        } else {
            Err(Error::EvaluationOutOfDomain { x: x.0 })
        }
    }

    pub fn place(&self, x: Vector3) -> Result<Vector3> {
        self.check_domain(x)?;
        Ok(self.placement.place(x))
    }

    /// True when `F` and `∂F/∂x` come from closed forms in the current mode.
    pub fn has_analytic_second(&self) -> bool {
        self.mode == DerivativeMode::Analytic
            && self.placement.second_gradient(Vector3::ZERO).is_some()
    }

    /// `F = Dy(x)` without the orientation check.
    pub fn raw_gradient(&self, x: Vector3) -> Result<Tensor33> {
        self.check_domain(x)?;
        if self.mode == DerivativeMode::Analytic {
            if let Some(f) = self.placement.gradient(x) {
                return Ok(f);
            }
        }
        let p = &self.placement;
        fd::vector_gradient(|z| Ok(p.place(z)), x, self.h_motion)
    }

    /// `F = Dy(x)`, required to satisfy `det F > 0`.
    pub fn deformation_gradient(&self, x: Vector3) -> Result<Tensor33> {
        let f = self.raw_gradient(x)?;
        let det = f.det();
        if !(det > 0.0) {
            return Err(Error::NonPositiveJacobian { det, x: x.0 });
        }
        Ok(f)
    }

    /// `∂F/∂x_k`, analytic when available, nested differences otherwise.
    pub fn second_gradient(&self, x: Vector3) -> Result<[Tensor33; 3]> {
        self.check_domain(x)?;
        if self.mode == DerivativeMode::Analytic {
            if let Some(g) = self.placement.second_gradient(x) {
                return Ok(g);
            }
        }
        fd::tensor_partials(|z| self.raw_gradient(z), x, self.h_second)
    }
}

/// A vector field over the reference place.
pub trait VectorField: Send + Sync + fmt::Debug {
    fn value(&self, x: Vector3) -> Vector3;

    /// `∇u` with components `∂u_i/∂x_j`.
    fn gradient(&self, _x: Vector3) -> Option<Tensor33> {
        None
    }
}

/// Shipped virtual-field (and source-field) presets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldPreset {
    Zero,
    Constant { value: [f64; 3] },
    /// `c + q × (x − x₀)`.
    Rigid {
        translation: [f64; 3],
        rotation: [f64; 3],
        pivot: [f64; 3],
    },
    /// `A x + b`.
    Linear {
        matrix: [[f64; 3]; 3],
        #[serde(default)]
        offset: [f64; 3],
    },
    /// `a sin(k·x + φ) d`.
    Sinusoidal {
        amplitude: f64,
        wavevector: [f64; 3],
        direction: [f64; 3],
        #[serde(default)]
        phase: f64,
    },
    Sum(Vec<FieldPreset>),
}

impl FieldPreset {
    pub fn name(&self) -> &'static str {
        match self {
            FieldPreset::Zero => "zero",
            FieldPreset::Constant { .. } => "constant",
            FieldPreset::Rigid { .. } => "rigid",
            FieldPreset::Linear { .. } => "linear",
            FieldPreset::Sinusoidal { .. } => "sinusoidal",
            FieldPreset::Sum(_) => "sum",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|c| c.is_finite());
        let ok = match self {
            FieldPreset::Zero => true,
            FieldPreset::Constant { value } => finite(value),
            FieldPreset::Rigid {
                translation,
                rotation,
                pivot,
            } => finite(translation) && finite(rotation) && finite(pivot),
            FieldPreset::Linear { matrix, offset } => finite(matrix.as_flattened()) && finite(offset),
            FieldPreset::Sinusoidal {
                amplitude,
                wavevector,
                direction,
                phase,
            } => amplitude.is_finite() && phase.is_finite() && finite(wavevector) && finite(direction),
            FieldPreset::Sum(parts) => {
                for p in parts {
                    p.validate()?;
                }
                true
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ConfigInvalid(format!(
                "field preset `{}` has non-finite parameters",
                self.name()
            )))
        }
    }
}

impl VectorField for FieldPreset {
    fn value(&self, x: Vector3) -> Vector3 {
        match self {
            FieldPreset::Zero => Vector3::ZERO,
            FieldPreset::Constant { value } => Vector3(*value),
            FieldPreset::Rigid {
                translation,
                rotation,
                pivot,
            } => Vector3(*translation) + Vector3(*rotation).cross(&(x - Vector3(*pivot))),
            FieldPreset::Linear { matrix, offset } => Tensor33(*matrix) * x + Vector3(*offset),
            FieldPreset::Sinusoidal {
                amplitude,
                wavevector,
                direction,
                phase,
            } => Vector3(*direction) * (amplitude * (Vector3(*wavevector).dot(&x) + phase).sin()),
            FieldPreset::Sum(parts) => parts.iter().map(|p| p.value(x)).sum(),
        }
    }

    fn gradient(&self, x: Vector3) -> Option<Tensor33> {
        Some(match self {
            FieldPreset::Zero | FieldPreset::Constant { .. } => Tensor33::ZERO,
            FieldPreset::Rigid { rotation, .. } => Vector3(*rotation).cross_matrix(),
            FieldPreset::Linear { matrix, .. } => Tensor33(*matrix),
            FieldPreset::Sinusoidal {
                amplitude,
                wavevector,
                direction,
                phase,
            } => {
                let k = Vector3(*wavevector);
                Vector3(*direction).outer(&k) * (amplitude * (k.dot(&x) + phase).cos())
            }
            FieldPreset::Sum(parts) => {
                let mut g = Tensor33::ZERO;
                for p in parts {
                    g += p.gradient(x)?;
                }
                g
            }
        })
    }
}

/// Closure-backed field without analytic gradient.
pub struct FnField<F>(pub F);

impl<F> fmt::Debug for FnField<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("FnField")
    }
}

impl<F> VectorField for FnField<F>
where
    F: Fn(Vector3) -> Vector3 + Send + Sync,
{
    fn value(&self, x: Vector3) -> Vector3 {
        (self.0)(x)
    }
}

/// Rates of a synchronous isometric change of observer in ambient and
/// material space.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ObserverChange {
    pub ambient_translation: Vector3,
    pub ambient_rotation: Vector3,
    pub ambient_pivot: Vector3,
    pub material_translation: Vector3,
    pub material_rotation: Vector3,
    pub material_pivot: Vector3,
}

impl ObserverChange {
    pub fn is_finite(&self) -> bool {
        [
            self.ambient_translation,
            self.ambient_rotation,
            self.ambient_pivot,
            self.material_translation,
            self.material_rotation,
            self.material_pivot,
        ]
        .iter()
        .all(Vector3::is_finite)
    }
}

/// The ambient field `v` and the material field `w`.
#[derive(Clone)]
pub struct VirtualFieldPair {
    pub v: Arc<dyn VectorField>,
    pub w: Arc<dyn VectorField>,
    pub h: f64,
    pub mode: DerivativeMode,
}

impl fmt::Debug for VirtualFieldPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VirtualFieldPair")
            .field("v", &self.v)
            .field("w", &self.w)
            .finish()
    }
}

fn check_point(x: Vector3) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::EvaluationOutOfDomain { x: x.0 })
    }
}

fn field_gradient(f: &dyn VectorField, x: Vector3, h: f64, mode: DerivativeMode) -> Result<Tensor33> {
    check_point(x)?;
    if mode == DerivativeMode::Analytic {
        if let Some(g) = f.gradient(x) {
            return Ok(g);
        }
    }
    fd::vector_gradient(|z| Ok(f.value(z)), x, h)
}

impl VirtualFieldPair {
    pub fn new(v: Arc<dyn VectorField>, w: Arc<dyn VectorField>) -> Self {
        VirtualFieldPair {
            v,
            w,
            h: DEFAULT_H_MOTION,
            mode: DerivativeMode::Analytic,
        }
    }

    pub fn from_presets(v: FieldPreset, w: FieldPreset) -> Self {
        VirtualFieldPair::new(Arc::new(v), Arc::new(w))
    }

    pub fn with_step(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    pub fn with_mode(mut self, mode: DerivativeMode) -> Self {
        self.mode = mode;
        self
    }

    /// Same `v`, with `w ≡ 0`.
    pub fn without_material_rate(&self) -> Self {
        VirtualFieldPair {
            w: Arc::new(FieldPreset::Zero),
            ..self.clone()
        }
    }

    pub fn v(&self, x: Vector3) -> Result<Vector3> {
        check_point(x)?;
        Ok(self.v.value(x))
    }

    pub fn w(&self, x: Vector3) -> Result<Vector3> {
        check_point(x)?;
        Ok(self.w.value(x))
    }

    pub fn grad_v(&self, x: Vector3) -> Result<Tensor33> {
        field_gradient(self.v.as_ref(), x, self.h, self.mode)
    }

    pub fn grad_w(&self, x: Vector3) -> Result<Tensor33> {
        field_gradient(self.w.as_ref(), x, self.h, self.mode)
    }

    /// `curl w`, the axial vector of `∇w − ∇wᵀ`.
    pub fn curl_w(&self, x: Vector3) -> Result<Vector3> {
        let g = self.grad_w(x)?;
        (g - g.transpose()).axial_vector()
    }

    pub fn div_w(&self, x: Vector3) -> Result<f64> {
        Ok(self.grad_w(x)?.trace())
    }

    /// The pair seen by the changed observer.
    pub fn changed(&self, motion: &Motion, ch: &ObserverChange) -> Self {
        VirtualFieldPair {
            v: Arc::new(AmbientChanged {
                base: self.v.clone(),
                placement: motion.placement.clone(),
                analytic: motion.mode == DerivativeMode::Analytic,
                h: motion.h_motion,
                translation: ch.ambient_translation,
                rotation: ch.ambient_rotation,
                pivot: ch.ambient_pivot,
            }),
            w: Arc::new(MaterialChanged {
                base: self.w.clone(),
                translation: ch.material_translation,
                rotation: ch.material_rotation,
                pivot: ch.material_pivot,
            }),
            h: self.h,
            mode: self.mode,
        }
    }
}

/// `v* = ĉ + q̂ × (y − y₀) + v`.
pub fn apply_ambient_change(
    pair: &VirtualFieldPair,
    motion: &Motion,
    ch: &ObserverChange,
    x: Vector3,
) -> Result<Vector3> {
    let y = motion.place(x)?;
    Ok(ch.ambient_translation + ch.ambient_rotation.cross(&(y - ch.ambient_pivot)) + pair.v(x)?)
}

/// `w* = c + q × (x − x₀) + w`.
pub fn apply_material_change(pair: &VirtualFieldPair, ch: &ObserverChange, x: Vector3) -> Result<Vector3> {
    Ok(ch.material_translation + ch.material_rotation.cross(&(x - ch.material_pivot)) + pair.w(x)?)
}

#[derive(Debug)]
struct AmbientChanged {
    base: Arc<dyn VectorField>,
    placement: Arc<dyn Placement>,
    analytic: bool,
    h: f64,
    translation: Vector3,
    rotation: Vector3,
    pivot: Vector3,
}

impl VectorField for AmbientChanged {
    fn value(&self, x: Vector3) -> Vector3 {
        let y = self.placement.place(x);
        self.translation + self.rotation.cross(&(y - self.pivot)) + self.base.value(x)
    }

    fn gradient(&self, x: Vector3) -> Option<Tensor33> {
        let f = if self.analytic {
            self.placement.gradient(x)
        } else {
            None
        };
        let f = match f {
            Some(f) => f,
            None => fd::vector_gradient(|z| Ok(self.placement.place(z)), x, self.h).ok()?,
        };
        Some(self.rotation.cross_matrix() * f + self.base.gradient(x)?)
    }
}

#[derive(Debug)]
struct MaterialChanged {
    base: Arc<dyn VectorField>,
    translation: Vector3,
    rotation: Vector3,
    pivot: Vector3,
}

impl VectorField for MaterialChanged {
    fn value(&self, x: Vector3) -> Vector3 {
        self.translation + self.rotation.cross(&(x - self.pivot)) + self.base.value(x)
    }

    fn gradient(&self, x: Vector3) -> Option<Tensor33> {
        Some(self.rotation.cross_matrix() + self.base.gradient(x)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(i: usize) -> Vector3 {
        Vector3::unit(i)
    }

    #[test]
    fn identity_and_stretch_gradients() {
        let m = Motion::preset(MotionPreset::Identity);
        assert_eq!(m.deformation_gradient(Vector3::new(0.3, 0.1, -0.2)).unwrap(), Tensor33::IDENTITY);
        let f0 = Tensor33::diag([1.2, 1.0, 1.0]);
        let m = Motion::preset(MotionPreset::Homogeneous { gradient: f0.0 });
        assert_eq!(m.deformation_gradient(Vector3::new(1.0, 2.0, 3.0)).unwrap(), f0);
    }

    #[test]
    fn sinusoidal_gradient_at_origin_by_hand() {
        // y = x + 0.01 sin(x₁) e₂  ⇒  F(0) = I + 0.01 e₂ ⊗ e₁
        let m = Motion::preset(MotionPreset::Sinusoidal {
            amplitude: 0.01,
            wavevector: [1.0, 0.0, 0.0],
            direction: [0.0, 1.0, 0.0],
        });
        let expected = Tensor33::IDENTITY + e(1).outer(&e(0)) * 0.01;
        let f = m.deformation_gradient(Vector3::ZERO).unwrap();
        assert_abs_diff_eq!((f - expected).max_abs(), 0.0, epsilon = 1e-15);
        let f_fd = m.clone().with_mode(DerivativeMode::FiniteDifference);
        let f_fd = f_fd.deformation_gradient(Vector3::ZERO).unwrap();
        assert_abs_diff_eq!((f_fd - expected).max_abs(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn inverted_motion_is_rejected() {
        let m = Motion::preset(MotionPreset::Homogeneous {
            gradient: Tensor33::diag([-1.0, 1.0, 1.0]).0,
        });
        let err = m.deformation_gradient(Vector3::ZERO).unwrap_err();
        assert!(matches!(err, Error::NonPositiveJacobian { .. }));
    }

    #[test]
    fn out_of_domain_evaluation_is_rejected() {
        let m = Motion::preset(MotionPreset::Identity).with_domain(Domain::Ball {
            center: Vector3::ZERO,
            radius: 1.0,
        });
        assert!(m.place(Vector3::new(0.5, 0.0, 0.0)).is_ok());
        assert!(matches!(
            m.place(Vector3::new(2.0, 0.0, 0.0)),
            Err(Error::EvaluationOutOfDomain { .. })
        ));
        let pair = VirtualFieldPair::from_presets(FieldPreset::Zero, FieldPreset::Zero);
        assert!(pair.v(Vector3::new(f64::NAN, 0.0, 0.0)).is_err());
    }

    fn pair(v: FieldPreset, w: FieldPreset) -> VirtualFieldPair {
        VirtualFieldPair::from_presets(v, w)
    }

    fn change() -> ObserverChange {
        ObserverChange::default()
    }

    #[test]
    fn ambient_change_examples() {
        let m = Motion::preset(MotionPreset::Identity);
        let p = pair(FieldPreset::Constant { value: [0.1, 0.2, 0.3] }, FieldPreset::Zero);
        let x = Vector3::new(0.4, -0.1, 0.7);
        assert_eq!(apply_ambient_change(&p, &m, &change(), x).unwrap(), Vector3::new(0.1, 0.2, 0.3));

        let p = pair(FieldPreset::Zero, FieldPreset::Zero);
        let ch = ObserverChange {
            ambient_rotation: e(2),
            ..change()
        };
        // y − y₀ = e₁ with identity motion at x = e₁.
        assert_eq!(apply_ambient_change(&p, &m, &ch, e(0)).unwrap(), e(1));

        let p = pair(FieldPreset::Constant { value: [0.0, 0.0, 1.0] }, FieldPreset::Zero);
        let ch = ObserverChange {
            ambient_translation: Vector3::new(1.0, 2.0, 3.0),
            ambient_rotation: e(0),
            ..change()
        };
        assert_eq!(apply_ambient_change(&p, &m, &ch, e(1)).unwrap(), Vector3::new(1.0, 2.0, 5.0));
    }

    #[test]
    fn material_change_examples() {
        let p = pair(FieldPreset::Zero, FieldPreset::Constant { value: [0.5, 0.0, 0.0] });
        let x = Vector3::new(0.2, 0.3, 0.4);
        assert_eq!(apply_material_change(&p, &change(), x).unwrap(), Vector3::new(0.5, 0.0, 0.0));

        let p = pair(FieldPreset::Zero, FieldPreset::Zero);
        let ch = ObserverChange {
            material_rotation: e(0),
            ..change()
        };
        assert_eq!(apply_material_change(&p, &ch, e(1)).unwrap(), e(2));

        let p = pair(FieldPreset::Zero, FieldPreset::Constant { value: [0.0, -1.0, 0.0] });
        let ch = ObserverChange {
            material_translation: e(0),
            material_rotation: e(2),
            ..change()
        };
        assert_eq!(apply_material_change(&p, &ch, e(0)).unwrap(), e(0));
    }

    #[test]
    fn curl_examples() {
        let x = Vector3::new(0.3, -0.4, 0.2);
        let p = pair(FieldPreset::Zero, FieldPreset::Constant { value: [1.0, 2.0, 3.0] });
        assert_eq!(p.curl_w(x).unwrap(), Vector3::ZERO);

        let q = Vector3::new(0.3, -1.2, 0.8);
        let rigid = FieldPreset::Rigid {
            translation: [0.0; 3],
            rotation: q.0,
            pivot: [0.1, 0.2, 0.3],
        };
        let p = pair(FieldPreset::Zero, rigid.clone());
        assert_abs_diff_eq!((p.curl_w(x).unwrap() - q * 2.0).norm(), 0.0, epsilon = 1e-15);
        let p_fd = pair(FieldPreset::Zero, rigid).with_mode(DerivativeMode::FiniteDifference);
        assert_abs_diff_eq!((p_fd.curl_w(x).unwrap() - q * 2.0).norm(), 0.0, epsilon = 1e-9);

        // w = (x₂, 0, 0)
        let shear = FieldPreset::Linear {
            matrix: [[0.0, 1.0, 0.0], [0.0; 3], [0.0; 3]],
            offset: [0.0; 3],
        };
        let p = pair(FieldPreset::Zero, shear);
        assert_eq!(p.curl_w(x).unwrap(), Vector3::new(0.0, 0.0, -1.0));
    }

    fn presets() -> Vec<MotionPreset> {
        vec![
            MotionPreset::SimpleShear { gamma: 0.3 },
            MotionPreset::Harmonic { alpha: 0.1 },
            MotionPreset::Sinusoidal {
                amplitude: 0.05,
                wavevector: [1.0, 2.0, -0.5],
                direction: [0.3, 0.4, 0.5],
            },
            MotionPreset::Superposed {
                axis: [1.0, 1.0, 0.0],
                angle: 0.4,
                translation: [0.1, 0.0, 0.2],
                base: Box::new(MotionPreset::Harmonic { alpha: 0.1 }),
            },
            MotionPreset::RigidRotation {
                axis: [0.0, 0.0, 1.0],
                angle: 1.1,
            },
        ]
    }

    #[test]
    fn analytic_and_fd_gradients_agree_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for preset in presets() {
            let analytic = Motion::preset(preset.clone());
            let fd = analytic.clone().with_mode(DerivativeMode::FiniteDifference);
            for _ in 0..100 {
                let x = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let fa = analytic.deformation_gradient(x).unwrap();
                let ff = fd.deformation_gradient(x).unwrap();
                assert!((fa - ff).norm() <= 1e-6 * fa.norm(), "{preset:?}");
                let ga = analytic.second_gradient(x).unwrap();
                let gf = fd.second_gradient(x).unwrap();
                for k in 0..3 {
                    assert!((ga[k] - gf[k]).norm() <= 1e-6 * (1.0 + ga[k].norm()), "{preset:?}");
                }
            }
        }
    }

    #[test]
    fn field_presets_gradients_match_fd() {
        let fields = vec![
            FieldPreset::Rigid {
                translation: [1.0, 0.0, 0.0],
                rotation: [0.2, 0.3, -0.1],
                pivot: [0.0; 3],
            },
            FieldPreset::Linear {
                matrix: [[0.1, 0.2, 0.3], [0.4, 0.5, 0.6], [0.7, 0.8, 0.9]],
                offset: [0.1, 0.2, 0.3],
            },
            FieldPreset::Sum(vec![
                FieldPreset::Sinusoidal {
                    amplitude: 0.4,
                    wavevector: [1.0, -2.0, 0.5],
                    direction: [0.0, 1.0, 1.0],
                    phase: 0.3,
                },
                FieldPreset::Constant { value: [1.0, 1.0, 1.0] },
            ]),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in fields {
            for _ in 0..100 {
                let x = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let ga = f.gradient(x).unwrap();
                let gf = fd::vector_gradient(|z| Ok(f.value(z)), x, 1e-5).unwrap();
                assert!((ga - gf).norm() <= 1e-6 * (1.0 + ga.norm()));
            }
        }
    }

    #[test]
    fn changes_are_affine_in_generators() {
        let m = Motion::preset(MotionPreset::Harmonic { alpha: 0.1 });
        let p = pair(
            FieldPreset::Constant { value: [0.3, 0.1, 0.2] },
            FieldPreset::Constant { value: [0.0, 0.4, 0.1] },
        );
        let x = Vector3::new(0.2, 0.5, -0.3);
        let g1 = ObserverChange {
            ambient_translation: Vector3::new(0.1, 0.2, 0.3),
            ambient_rotation: Vector3::new(-0.4, 0.5, 0.6),
            material_translation: Vector3::new(0.7, 0.8, -0.9),
            material_rotation: Vector3::new(1.0, 1.1, 1.2),
            ..change()
        };
        let g2 = ObserverChange {
            ambient_translation: Vector3::new(0.3, -0.2, 0.1),
            ambient_rotation: Vector3::new(0.2, 0.1, 0.0),
            material_translation: Vector3::new(-0.5, 0.5, 0.5),
            material_rotation: Vector3::new(0.0, 0.3, -0.3),
            ..change()
        };
        let sum = ObserverChange {
            ambient_translation: g1.ambient_translation + g2.ambient_translation,
            ambient_rotation: g1.ambient_rotation + g2.ambient_rotation,
            material_translation: g1.material_translation + g2.material_translation,
            material_rotation: g1.material_rotation + g2.material_rotation,
            ..change()
        };
        let base = p.v(x).unwrap();
        let lhs = apply_ambient_change(&p, &m, &sum, x).unwrap() - base;
        let rhs = (apply_ambient_change(&p, &m, &g1, x).unwrap() - base)
            + (apply_ambient_change(&p, &m, &g2, x).unwrap() - base);
        assert_abs_diff_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-14);
        let base = p.w(x).unwrap();
        let lhs = apply_material_change(&p, &sum, x).unwrap() - base;
        let rhs = (apply_material_change(&p, &g1, x).unwrap() - base)
            + (apply_material_change(&p, &g2, x).unwrap() - base);
        assert_abs_diff_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn rigid_ambient_field_gradient_follows_chain_rule() {
        // ∇ₓ[q̂ × (y(x) − y₀)] = (q̂×) F
        let m = Motion::preset(MotionPreset::Sinusoidal {
            amplitude: 0.1,
            wavevector: [0.5, 1.0, 0.0],
            direction: [1.0, 0.0, 1.0],
        });
        let p = pair(FieldPreset::Zero, FieldPreset::Zero);
        let ch = ObserverChange {
            ambient_rotation: Vector3::new(0.3, -0.7, 0.2),
            ambient_pivot: Vector3::new(0.1, 0.1, 0.1),
            ..change()
        };
        let changed = p.changed(&m, &ch);
        let x = Vector3::new(0.3, 0.2, 0.1);
        let analytic = ch.ambient_rotation.cross_matrix() * m.deformation_gradient(x).unwrap();
        let fd_grad = fd::vector_gradient(|z| Ok(changed.v.value(z)), x, 1e-5).unwrap();
        assert!((analytic - fd_grad).norm() < 1e-9);
        assert!((changed.grad_v(x).unwrap() - analytic).norm() < 1e-14);
    }
}
