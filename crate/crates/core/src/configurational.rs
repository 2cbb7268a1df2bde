//! Eshelby stress, pointwise balances, manufactured closure sources and the
//! Nöther flux.
//!
//! Conventions: `Div T` contracts the second (reference) index,
//! `(Div T)_i = Σ_j ∂T_ij/∂x_j`, and `F*` is the plain transpose.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd;
use crate::field::{FieldPreset, Motion, VectorField, VirtualFieldPair};
use crate::material::{MaterialModel, Potential};
use crate::tensor::{Tensor33, Vector3};

/// Isochoric virtual fields must satisfy `|div w| ≤ ISOCHORIC_TOL`.
pub const ISOCHORIC_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BodyForce {
    /// `b(x)` given directly over the reference place.
    Field(FieldPreset),
    /// `b = −∂_y u(y(x))`.
    Potential(Potential),
}

/// Where `b`, `f` and `μ` come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Sources {
    /// Manufactured so that every pointwise balance holds exactly.
    Closure,
    Preset {
        body_force: BodyForce,
        driving_force: FieldPreset,
        couple: FieldPreset,
    },
}

impl Sources {
    pub fn zero() -> Self {
        Sources::Preset {
            body_force: BodyForce::Field(FieldPreset::Zero),
            driving_force: FieldPreset::Zero,
            couple: FieldPreset::Zero,
        }
    }

    pub fn is_closure(&self) -> bool {
        matches!(self, Sources::Closure)
    }
}

/// Everything needed to evaluate stresses and balances at a point.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub motion: Motion,
    pub material: MaterialModel,
    pub sources: Sources,
    /// `x₀`
    pub material_pivot: Vector3,
    /// `y₀`
    pub ambient_pivot: Vector3,
}

/// Local fields at one reference point.
#[derive(Debug, Clone, Copy)]
pub struct PointState {
    pub x: Vector3,
    pub y: Vector3,
    pub f: Tensor33,
    pub energy: f64,
    pub stress: Tensor33,
    pub eshelby: Tensor33,
    /// `∂ₓe` at fixed `F`.
    pub explicit_gradient: Vector3,
}

/// Body force, driving force and couple at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceValues {
    pub body_force: Vector3,
    pub driving_force: Vector3,
    pub couple: Vector3,
}

/// The four pointwise balance residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseResiduals {
    /// `Div P + b`
    pub force: Vector3,
    /// axial vector of `2 Skw(P Fᵀ)`
    pub torque: Vector3,
    /// `Div ℙ − Fᵀ b + ∂ₓe − f`
    pub configurational_force: Vector3,
    /// axial vector of `2 Skw ℙ` minus `μ`
    pub configurational_torque: Vector3,
}

impl PointwiseResiduals {
    pub fn max_norm(&self) -> f64 {
        [
            self.force,
            self.torque,
            self.configurational_force,
            self.configurational_torque,
        ]
        .iter()
        .map(Vector3::norm)
        .fold(0.0, f64::max)
    }
}

/// `ℙ = e I − Fᵀ P`.
pub fn eshelby_from(energy: f64, f: &Tensor33, stress: &Tensor33) -> Tensor33 {
    Tensor33::IDENTITY * energy - f.transpose() * *stress
}

impl Scenario {
    pub fn new(motion: Motion, material: MaterialModel, sources: Sources) -> Self {
        Scenario {
            motion,
            material,
            sources,
            material_pivot: Vector3::ZERO,
            ambient_pivot: Vector3::ZERO,
        }
    }

    pub fn with_pivots(mut self, material_pivot: Vector3, ambient_pivot: Vector3) -> Self {
        self.material_pivot = material_pivot;
        self.ambient_pivot = ambient_pivot;
        self
    }

    pub fn with_sources(mut self, sources: Sources) -> Self {
        self.sources = sources;
        self
    }

    /// Whether divergences use closed-form second derivatives.
    pub fn analytic_divergence(&self) -> bool {
        self.motion.has_analytic_second()
    }

    pub fn state(&self, x: Vector3) -> Result<PointState> {
        let y = self.motion.place(x)?;
        let f = self.motion.deformation_gradient(x)?;
        let energy = self.material.energy(x, &f)?;
        let stress = self.material.first_pk_stress(x, &f)?;
        Ok(PointState {
            x,
            y,
            f,
            energy,
            stress,
            eshelby: eshelby_from(energy, &f, &stress),
            explicit_gradient: self.material.explicit_material_gradient(x, &f)?,
        })
    }

    pub fn eshelby_stress(&self, x: Vector3) -> Result<Tensor33> {
        Ok(self.state(x)?.eshelby)
    }

    fn stress_at(&self, x: Vector3) -> Result<Tensor33> {
        let f = self.motion.deformation_gradient(x)?;
        self.material.first_pk_stress(x, &f)
    }

    /// Total partial derivatives `∂P/∂x_j` along the motion.
    fn stress_partials(&self, x: Vector3, f: &Tensor33) -> Result<[Tensor33; 3]> {
        let g = self.motion.second_gradient(x)?;
        let explicit = self.material.explicit_stress_gradient(x, f)?;
        let mut out = [Tensor33::ZERO; 3];
        for j in 0..3 {
            out[j] = explicit[j] + self.material.stress_increment(x, f, &g[j])?;
        }
        Ok(out)
    }

    /// `Div P`.
    pub fn div_stress(&self, x: Vector3) -> Result<Vector3> {
        if self.analytic_divergence() {
            let f = self.motion.deformation_gradient(x)?;
            let dp = self.stress_partials(x, &f)?;
            Ok((0..3).map(|j| dp[j].column(j)).sum())
        } else {
            fd::tensor_divergence(|z| self.stress_at(z), x, self.motion.h_second)
        }
    }

    /// `Div ℙ`.
    pub fn div_eshelby(&self, x: Vector3) -> Result<Vector3> {
        if self.analytic_divergence() {
            let s = self.state(x)?;
            let g = self.motion.second_gradient(x)?;
            let dp = self.stress_partials(x, &s.f)?;
            let mut div = s.explicit_gradient;
            for k in 0..3 {
                div[k] += s.stress.double_contraction(&g[k]);
            }
            for j in 0..3 {
                let d = g[j].transpose() * s.stress + s.f.transpose() * dp[j];
                div -= d.column(j);
            }
            Ok(div)
        } else {
            fd::tensor_divergence(|z| self.eshelby_stress(z), x, self.motion.h_second)
        }
    }

    /// `b`, `f` and `μ` as prescribed by the source mode.
    pub fn sources_at(&self, x: Vector3) -> Result<SourceValues> {
        match &self.sources {
            Sources::Closure => self.closure_fields().at(x),
            Sources::Preset {
                body_force,
                driving_force,
                couple,
            } => {
                let b = match body_force {
                    BodyForce::Field(p) => p.value(x),
                    BodyForce::Potential(u) => u.body_force(self.motion.place(x)?),
                };
                Ok(SourceValues {
                    body_force: b,
                    driving_force: driving_force.value(x),
                    couple: couple.value(x),
                })
            }
        }
    }

    pub fn body_force(&self, x: Vector3) -> Result<Vector3> {
        Ok(self.sources_at(x)?.body_force)
    }

    /// `Div P + b`.
    pub fn standard_force_residual(&self, x: Vector3) -> Result<Vector3> {
        Ok(self.div_stress(x)? + self.body_force(x)?)
    }

    /// `Div ℙ − Fᵀ b + ∂ₓe − f`.
    pub fn configurational_force_residual(&self, x: Vector3) -> Result<Vector3> {
        let s = self.state(x)?;
        let src = self.sources_at(x)?;
        Ok(self.div_eshelby(x)? - s.f.transpose() * src.body_force + s.explicit_gradient
            - src.driving_force)
    }

    /// `(axial 2 Skw(P Fᵀ), axial 2 Skw ℙ − μ)`.
    pub fn torque_residuals(&self, x: Vector3) -> Result<(Vector3, Vector3)> {
        let s = self.state(x)?;
        let mu = self.sources_at(x)?.couple;
        Ok(torque_pair(&s, mu))
    }

    pub fn pointwise_residuals(&self, x: Vector3) -> Result<PointwiseResiduals> {
        let (torque, configurational_torque) = self.torque_residuals(x)?;
        Ok(PointwiseResiduals {
            force: self.standard_force_residual(x)?,
            torque,
            configurational_force: self.configurational_force_residual(x)?,
            configurational_torque,
        })
    }

    pub fn closure_fields(&self) -> ClosureFields<'_> {
        ClosureFields { scenario: self }
    }

    /// `u(y(x))`, zero unless the body force derives from a potential.
    pub fn potential_energy(&self, x: Vector3) -> Result<f64> {
        match &self.sources {
            Sources::Preset {
                body_force: BodyForce::Potential(u),
                ..
            } => Ok(u.value(self.motion.place(x)?)),
            _ => Ok(0.0),
        }
    }

    fn potential(&self) -> Result<&Potential> {
        match &self.sources {
            Sources::Preset {
                body_force: BodyForce::Potential(u),
                ..
            } => Ok(u),
            _ => Err(Error::PreconditionViolated(
                "Nöther quantities need body forces derived from a potential".into(),
            )),
        }
    }

    /// `𝔉 = (e + u) w + Pᵀ (v − F w)`.
    pub fn noether_flux(&self, pair: &VirtualFieldPair, x: Vector3) -> Result<Vector3> {
        let u = self.potential()?;
        let s = self.state(x)?;
        let (v, w) = (pair.v(x)?, pair.w(x)?);
        Ok(w * (s.energy + u.value(s.y)) + s.stress.transpose() * (v - s.f * w))
    }

    /// `(∂_y u · v + P · ∇v, ∂ₓe · w − P · F ∇w)`.
    pub fn noether_condition_residuals(&self, pair: &VirtualFieldPair, x: Vector3) -> Result<(f64, f64)> {
        let u = self.potential()?;
        let s = self.state(x)?;
        let ambient = u.gradient(s.y).dot(&pair.v(x)?) + s.stress.double_contraction(&pair.grad_v(x)?);
        let material = s.explicit_gradient.dot(&pair.w(x)?)
            - s.stress.double_contraction(&(s.f * pair.grad_w(x)?));
        Ok((ambient, material))
    }

    /// `Div 𝔉` by central differences of the flux; requires isochoric `w`.
    pub fn noether_flux_divergence(&self, pair: &VirtualFieldPair, x: Vector3) -> Result<f64> {
        let div_w = pair.div_w(x)?;
        if div_w.abs() > ISOCHORIC_TOL {
            return Err(Error::PreconditionViolated(format!(
                "material field is not isochoric (div w = {div_w:e})"
            )));
        }
        fd::vector_divergence(|z| self.noether_flux(pair, z), x, self.motion.h_second)
    }
}

fn torque_pair(s: &PointState, couple: Vector3) -> (Vector3, Vector3) {
    let standard = (s.stress * s.f.transpose()).axial_of_skew() * 2.0;
    let configurational = s.eshelby.axial_of_skew() * 2.0 - couple;
    (standard, configurational)
}

/// Sources manufactured from the motion and material:
/// `b = −Div P`, `f = Div ℙ − Fᵀ b + ∂ₓe`, `μ = axial(2 Skw ℙ)`.
#[derive(Debug, Clone, Copy)]
pub struct ClosureFields<'a> {
    scenario: &'a Scenario,
}

impl ClosureFields<'_> {
    pub fn body_force(&self, x: Vector3) -> Result<Vector3> {
        Ok(-self.scenario.div_stress(x)?)
    }

    pub fn driving_force(&self, x: Vector3) -> Result<Vector3> {
        Ok(self.at(x)?.driving_force)
    }

    pub fn couple(&self, x: Vector3) -> Result<Vector3> {
        Ok(self.scenario.eshelby_stress(x)?.axial_of_skew() * 2.0)
    }

    pub fn at(&self, x: Vector3) -> Result<SourceValues> {
        let s = self.scenario.state(x)?;
        let b = self.body_force(x)?;
        let f = self.scenario.div_eshelby(x)? - s.f.transpose() * b + s.explicit_gradient;
        Ok(SourceValues {
            body_force: b,
            driving_force: f,
            couple: s.eshelby.axial_of_skew() * 2.0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{DerivativeMode, MotionPreset};
    use crate::material::{ModelKind, ModulusField};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn stvk() -> MaterialModel {
        MaterialModel::homogeneous(ModelKind::StVenantKirchhoff, 1.0, 1.0)
    }

    fn graded_stvk(beta: f64) -> MaterialModel {
        MaterialModel::new(
            ModelKind::StVenantKirchhoff,
            ModulusField::Constant(1.0),
            ModulusField::Affine {
                value: 1.0,
                gradient: [beta, 0.0, 0.0],
            },
        )
    }

    fn quadratic(mu: f64) -> MaterialModel {
        MaterialModel::homogeneous(ModelKind::Quadratic, 0.0, mu)
    }

    fn scenario(motion: MotionPreset, material: MaterialModel, sources: Sources) -> Scenario {
        Scenario::new(Motion::preset(motion), material, sources)
    }

    fn random_point(rng: &mut ChaCha8Rng, r: f64) -> Vector3 {
        Vector3::new(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r))
    }

    #[test]
    fn eshelby_uniaxial_fixture() {
        let s = scenario(
            MotionPreset::Homogeneous {
                gradient: Tensor33::diag([1.2, 1.0, 1.0]).0,
            },
            stvk(),
            Sources::Closure,
        );
        let p = s.eshelby_stress(Vector3::new(0.1, 0.2, 0.3)).unwrap();
        let expected = Tensor33::diag([-0.8778, -0.1474, -0.1474]);
        assert_abs_diff_eq!((p - expected).max_abs(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn eshelby_vanishes_in_natural_and_rotated_states() {
        let x = Vector3::new(0.3, 0.1, 0.2);
        let s = scenario(MotionPreset::Identity, stvk(), Sources::Closure);
        assert_eq!(s.eshelby_stress(x).unwrap().max_abs(), 0.0);
        let s = scenario(
            MotionPreset::RigidRotation {
                axis: [1.0, 2.0, 3.0],
                angle: 0.8,
            },
            MaterialModel::homogeneous(ModelKind::NeoHookean, 1.0, 1.0),
            Sources::Closure,
        );
        assert_abs_diff_eq!(s.eshelby_stress(x).unwrap().max_abs(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn eshelby_is_invariant_under_superposed_rotation() {
        let base = MotionPreset::Sinusoidal {
            amplitude: 0.1,
            wavevector: [1.0, 0.5, -0.3],
            direction: [0.2, 1.0, 0.1],
        };
        let rotated = MotionPreset::Superposed {
            axis: [0.3, -0.2, 1.0],
            angle: 1.3,
            translation: [1.0, 2.0, 3.0],
            base: Box::new(base.clone()),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for kind in [ModelKind::StVenantKirchhoff, ModelKind::NeoHookean] {
            let m = MaterialModel::homogeneous(kind, 1.2, 0.8);
            let a = scenario(base.clone(), m.clone(), Sources::Closure);
            let b = scenario(rotated.clone(), m, Sources::Closure);
            for _ in 0..20 {
                let x = random_point(&mut rng, 1.0);
                let pa = a.eshelby_stress(x).unwrap();
                let pb = b.eshelby_stress(x).unwrap();
                assert!((pa - pb).norm() <= 1e-10 * (1.0 + pa.norm()));
            }
        }
    }

    #[test]
    fn homogeneous_deformation_is_in_equilibrium() {
        let s = scenario(
            MotionPreset::Homogeneous {
                gradient: [[1.1, 0.2, 0.0], [0.0, 0.95, 0.1], [0.05, 0.0, 1.02]],
            },
            MaterialModel::homogeneous(ModelKind::NeoHookean, 1.0, 1.0),
            Sources::zero(),
        );
        let x = Vector3::new(0.2, -0.3, 0.4);
        assert_abs_diff_eq!(s.standard_force_residual(x).unwrap().norm(), 0.0, epsilon = 1e-14);
        let fd = s.clone();
        let fd = Scenario {
            motion: fd.motion.with_mode(DerivativeMode::FiniteDifference),
            ..fd
        };
        assert!(fd.standard_force_residual(x).unwrap().norm() < 1e-6);
    }

    #[test]
    fn harmonic_displacement_balances_quadratic_model() {
        let s = scenario(MotionPreset::Harmonic { alpha: 0.2 }, quadratic(1.5), Sources::zero());
        let fd = Scenario {
            motion: s.motion.clone().with_mode(DerivativeMode::FiniteDifference),
            ..s.clone()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let x = random_point(&mut rng, 0.8);
            assert_abs_diff_eq!(s.standard_force_residual(x).unwrap().norm(), 0.0, epsilon = 1e-14);
            assert!(fd.standard_force_residual(x).unwrap().norm() < 1e-6);
            // Homogeneous, equilibrium, b = f = 0: Div ℙ = 0.
            assert_abs_diff_eq!(s.configurational_force_residual(x).unwrap().norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn closure_makes_shear_force_residual_vanish() {
        let s = scenario(
            MotionPreset::SimpleShear { gamma: 0.4 },
            MaterialModel::homogeneous(ModelKind::NeoHookean, 2.0, 1.0),
            Sources::Closure,
        );
        let x = Vector3::new(0.1, 0.2, 0.3);
        assert_eq!(s.standard_force_residual(x).unwrap(), Vector3::ZERO);
    }

    /// Differential identity `Div ℙ + Fᵀ Div P − ∂ₓe = 0`, checked with the
    /// finite-difference divergence as an independent route.
    #[test]
    fn eshelby_divergence_identity() {
        let motions = [
            MotionPreset::Sinusoidal {
                amplitude: 0.08,
                wavevector: [1.2, -0.7, 0.5],
                direction: [0.5, 0.3, -0.4],
            },
            MotionPreset::Harmonic { alpha: 0.15 },
        ];
        let materials = [
            MaterialModel::homogeneous(ModelKind::NeoHookean, 1.5, 0.6),
            graded_stvk(0.4),
            MaterialModel::new(
                ModelKind::Quadratic,
                ModulusField::Constant(0.0),
                ModulusField::Sinusoidal {
                    mean: 1.0,
                    amplitude: 0.2,
                    wavevector: [0.0, 1.0, 1.0],
                },
            ),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for m in &motions {
            for mat in &materials {
                let s = scenario(m.clone(), mat.clone(), Sources::zero());
                let fd = Scenario {
                    motion: s.motion.clone().with_mode(DerivativeMode::FiniteDifference),
                    ..s.clone()
                };
                for _ in 0..10 {
                    let x = random_point(&mut rng, 0.9);
                    let st = s.state(x).unwrap();
                    let lhs = s.div_eshelby(x).unwrap() + st.f.transpose() * s.div_stress(x).unwrap()
                        - st.explicit_gradient;
                    assert!(lhs.norm() < 1e-12, "{lhs:?}");
                    let lhs_fd = fd.div_eshelby(x).unwrap() + st.f.transpose() * fd.div_stress(x).unwrap()
                        - st.explicit_gradient;
                    assert!(lhs_fd.norm() < 1e-5, "{lhs_fd:?}");
                    assert!((fd.div_stress(x).unwrap() - s.div_stress(x).unwrap()).norm() < 1e-5);
                }
            }
        }
    }

    #[test]
    fn graded_identity_motion_closure() {
        let s = scenario(MotionPreset::Identity, graded_stvk(0.5), Sources::Closure);
        let x = Vector3::new(0.3, 0.0, 0.1);
        let c = s.closure_fields().at(x).unwrap();
        assert_eq!(c.body_force, Vector3::ZERO);
        assert_eq!(c.driving_force, Vector3::ZERO);
        assert_eq!(c.couple, Vector3::ZERO);
        // With preset f = ∂ₓe the residual vanishes too.
        let s = Scenario::new(
            Motion::preset(MotionPreset::Homogeneous {
                gradient: Tensor33::diag([1.2, 1.0, 1.0]).0,
            }),
            graded_stvk(0.5),
            Sources::zero(),
        );
        let st = s.state(x).unwrap();
        let r = s.configurational_force_residual(x).unwrap();
        // Div ℙ = ∂ₓe − Fᵀ Div P for constant F; residual = Div ℙ + ∂ₓe.
        let div_p = s.div_stress(x).unwrap();
        let expected = st.explicit_gradient * 2.0 - st.f.transpose() * div_p;
        assert!((r - expected).norm() < 1e-14);
    }

    #[test]
    fn homogeneous_stretch_closure_is_constant() {
        let s = scenario(
            MotionPreset::Homogeneous {
                gradient: [[1.2, 0.1, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.9]],
            },
            quadratic(1.0),
            Sources::Closure,
        );
        let a = s.closure_fields().at(Vector3::new(0.1, 0.2, 0.3)).unwrap();
        let b = s.closure_fields().at(Vector3::new(-0.4, 0.5, 0.0)).unwrap();
        assert_eq!(a.body_force, Vector3::ZERO);
        assert_eq!(a.driving_force, Vector3::ZERO);
        assert_eq!(a.couple, b.couple);
        assert!(a.couple.norm() > 0.0);
    }

    #[test]
    fn closure_zeroes_all_pointwise_residuals() {
        let cases = [
            (
                MotionPreset::Sinusoidal {
                    amplitude: 0.1,
                    wavevector: [1.0, 0.5, 0.2],
                    direction: [0.0, 0.6, 0.8],
                },
                MaterialModel::homogeneous(ModelKind::NeoHookean, 1.0, 1.0),
            ),
            (MotionPreset::SimpleShear { gamma: 0.3 }, graded_stvk(0.3)),
            (MotionPreset::Harmonic { alpha: 0.1 }, quadratic(2.0)),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (m, mat) in cases {
            let s = scenario(m, mat, Sources::Closure);
            let fd = Scenario {
                motion: s.motion.clone().with_mode(DerivativeMode::FiniteDifference),
                ..s.clone()
            };
            for _ in 0..10 {
                let x = random_point(&mut rng, 1.0);
                let r = s.pointwise_residuals(x).unwrap();
                let scale = 1.0 + s.state(x).unwrap().eshelby.norm();
                assert!(r.max_norm() <= 1e-9 * scale);
                // In FD mode the closure uses FD divergences as well.
                assert!(fd.pointwise_residuals(x).unwrap().max_norm() <= 1e-5 * scale);
            }
        }
    }

    #[test]
    fn torque_residual_examples() {
        let x = Vector3::new(0.2, 0.1, 0.0);
        let nh = scenario(
            MotionPreset::Sinusoidal {
                amplitude: 0.2,
                wavevector: [1.0, 1.0, 0.0],
                direction: [0.0, 0.0, 1.0],
            },
            MaterialModel::homogeneous(ModelKind::NeoHookean, 1.0, 1.0),
            Sources::zero(),
        );
        let (t1, t2) = nh.torque_residuals(x).unwrap();
        let s = nh.state(x).unwrap();
        assert!(t1.norm() <= 1e-10 * (s.stress * s.f.transpose()).norm());
        assert!(t2.norm() <= 1e-10 * s.eshelby.norm());

        // Quadratic under shear: P Fᵀ = μγ [[γ,1,0],[0,0,0],[0,0,0]], axial(2 Skw) = (0, 0, −μγ).
        let (gamma, mu) = (0.3, 2.0);
        let q = scenario(MotionPreset::SimpleShear { gamma }, quadratic(mu), Sources::zero());
        let (t1, _) = q.torque_residuals(x).unwrap();
        assert_abs_diff_eq!((t1 - Vector3::new(0.0, 0.0, -mu * gamma)).norm(), 0.0, epsilon = 1e-15);
    }

    fn noether_scenario(material: MaterialModel) -> Scenario {
        scenario(
            MotionPreset::Harmonic { alpha: 0.2 },
            material,
            Sources::Preset {
                body_force: BodyForce::Potential(Potential::Zero),
                driving_force: FieldPreset::Zero,
                couple: FieldPreset::Zero,
            },
        )
    }

    #[test]
    fn noether_flux_special_cases() {
        let s = noether_scenario(quadratic(1.0));
        let x = Vector3::new(0.3, 0.2, 0.1);
        let st = s.state(x).unwrap();
        let w = Vector3::new(0.1, -0.2, 0.3);
        // v = F w pointwise: flux = e w.
        let fw = st.f * w;
        let pair = VirtualFieldPair::from_presets(
            FieldPreset::Constant { value: fw.0 },
            FieldPreset::Constant { value: w.0 },
        );
        let flux = s.noether_flux(&pair, x).unwrap();
        assert!((flux - w * st.energy).norm() < 1e-15);
        let v = Vector3::new(1.0, 0.5, -0.5);
        let pair = VirtualFieldPair::from_presets(FieldPreset::Constant { value: v.0 }, FieldPreset::Zero);
        assert_eq!(s.noether_flux(&pair, x).unwrap(), st.stress.transpose() * v);
    }

    #[test]
    fn noether_conditions() {
        let w = [0.2, -0.1, 0.4];
        let pair = VirtualFieldPair::from_presets(
            FieldPreset::Constant { value: [1.0, 0.0, 2.0] },
            FieldPreset::Constant { value: w },
        );
        let x = Vector3::new(0.1, -0.2, 0.3);
        let s = noether_scenario(quadratic(1.0));
        let (a, m) = s.noether_condition_residuals(&pair, x).unwrap();
        assert_eq!((a, m), (0.0, 0.0));
        assert!(s.noether_flux_divergence(&pair, x).unwrap().abs() < 1e-8);

        let graded = MaterialModel::new(
            ModelKind::Quadratic,
            ModulusField::Constant(0.0),
            ModulusField::Affine {
                value: 1.0,
                gradient: [0.0, 0.0, 0.5],
            },
        );
        let s = noether_scenario(graded);
        let (_, m) = s.noether_condition_residuals(&pair, x).unwrap();
        let st = s.state(x).unwrap();
        assert!((m - st.explicit_gradient.dot(&Vector3(w))).abs() < 1e-15);
        assert!(m.abs() > 0.0);
    }

    #[test]
    fn noether_requires_potential_and_isochoric_field() {
        let s = scenario(MotionPreset::Identity, quadratic(1.0), Sources::Closure);
        let pair = VirtualFieldPair::from_presets(FieldPreset::Zero, FieldPreset::Zero);
        assert!(matches!(
            s.noether_flux(&pair, Vector3::ZERO),
            Err(Error::PreconditionViolated(_))
        ));
        let s = noether_scenario(quadratic(1.0));
        let dilation = VirtualFieldPair::from_presets(
            FieldPreset::Zero,
            FieldPreset::Linear {
                matrix: Tensor33::IDENTITY.0,
                offset: [0.0; 3],
            },
        );
        assert!(matches!(
            s.noether_flux_divergence(&dilation, Vector3::ZERO),
            Err(Error::PreconditionViolated(_))
        ));
    }
}
