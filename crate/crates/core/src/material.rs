//! Hyperelastic free energies `e(x, F)` with closed-form stresses.
//!
//! Every shipped energy is linear in the two moduli,
//! `e = λ(x) e_λ(F) + μ(x) e_μ(F)`, so the explicit material gradient at
//! fixed `F` is `∇λ e_λ + ∇μ e_μ`. Inhomogeneity enters only through the
//! moduli fields.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{Tensor33, Vector3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub enum ModelKind {
    /// `e = (λ/2)(tr E)² + μ tr(E²)`, `E = (FᵀF − I)/2`.
    #[serde(rename = "stvk")]
    StVenantKirchhoff,
    /// `e = (μ/2)(tr FᵀF − 3) − μ ln J + (λ/2)(ln J)²`.
    #[serde(rename = "neo-hookean")]
    NeoHookean,
    /// `e = (μ/2)|F − I|²`; not frame-indifferent.
    #[serde(rename = "quadratic")]
    Quadratic,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::StVenantKirchhoff => "stvk",
            ModelKind::NeoHookean => "neo-hookean",
            ModelKind::Quadratic => "quadratic",
        }
    }
}

/// A modulus as a function of the reference point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModulusField {
    Constant(f64),
    /// `value + gradient · x`.
    Affine { value: f64, gradient: [f64; 3] },
    /// `mean + amplitude sin(k · x)`.
    Sinusoidal {
        mean: f64,
        amplitude: f64,
        wavevector: [f64; 3],
    },
}

impl ModulusField {
    pub fn value(&self, x: Vector3) -> f64 {
        match self {
            ModulusField::Constant(c) => *c,
            ModulusField::Affine { value, gradient } => value + Vector3(*gradient).dot(&x),
            ModulusField::Sinusoidal {
                mean,
                amplitude,
                wavevector,
            } => mean + amplitude * Vector3(*wavevector).dot(&x).sin(),
        }
    }

    pub fn gradient(&self, x: Vector3) -> Vector3 {
        match self {
            ModulusField::Constant(_) => Vector3::ZERO,
            ModulusField::Affine { gradient, .. } => Vector3(*gradient),
            ModulusField::Sinusoidal {
                amplitude,
                wavevector,
                ..
            } => {
                let k = Vector3(*wavevector);
                k * (amplitude * k.dot(&x).cos())
            }
        }
    }

    pub fn is_uniform(&self) -> bool {
        match self {
            ModulusField::Constant(_) => true,
            ModulusField::Affine { gradient, .. } => gradient.iter().all(|g| *g == 0.0),
            ModulusField::Sinusoidal {
                amplitude,
                wavevector,
                ..
            } => *amplitude == 0.0 || wavevector.iter().all(|k| *k == 0.0),
        }
    }

    fn is_finite(&self) -> bool {
        match self {
            ModulusField::Constant(c) => c.is_finite(),
            ModulusField::Affine { value, gradient } => {
                value.is_finite() && gradient.iter().all(|g| g.is_finite())
            }
            ModulusField::Sinusoidal {
                mean,
                amplitude,
                wavevector,
            } => mean.is_finite() && amplitude.is_finite() && wavevector.iter().all(|k| k.is_finite()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct MaterialModel {
    pub model: ModelKind,
    pub lambda: ModulusField,
    pub mu: ModulusField,
}

/// The pair `(λ-part, μ-part)` of a quantity linear in the moduli.
struct Split<T> {
    lambda: T,
    mu: T,
}

fn green_strain(f: &Tensor33) -> Tensor33 {
    (f.transpose() * *f - Tensor33::IDENTITY) * 0.5
}

impl MaterialModel {
    pub fn new(model: ModelKind, lambda: ModulusField, mu: ModulusField) -> Self {
        MaterialModel { model, lambda, mu }
    }

    pub fn homogeneous(model: ModelKind, lambda: f64, mu: f64) -> Self {
        MaterialModel::new(model, ModulusField::Constant(lambda), ModulusField::Constant(mu))
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda.is_finite() && self.mu.is_finite() {
            Ok(())
        } else {
            Err(Error::ConfigInvalid(format!(
                "material `{}` has non-finite moduli",
                self.model.name()
            )))
        }
    }

    pub fn frame_indifferent(&self) -> bool {
        self.model != ModelKind::Quadratic
    }

    pub fn isotropic(&self) -> bool {
        self.model != ModelKind::Quadratic
    }

    pub fn homogeneous_flag(&self) -> bool {
        self.lambda.is_uniform() && self.mu.is_uniform()
    }

    fn check(&self, x: Vector3, f: &Tensor33) -> Result<f64> {
        if !x.is_finite() || !f.is_finite() {
            return Err(Error::EvaluationOutOfDomain { x: x.0 });
        }
        let det = f.det();
        if !(det > 0.0) {
            return Err(Error::NonPositiveJacobian { det, x: x.0 });
        }
        Ok(det)
    }

    fn energy_split(&self, f: &Tensor33, det: f64) -> Split<f64> {
        match self.model {
            ModelKind::StVenantKirchhoff => {
                let e = green_strain(f);
                Split {
                    lambda: 0.5 * e.trace().powi(2),
                    mu: e.double_contraction(&e),
                }
            }
            ModelKind::NeoHookean => {
                let ln_j = det.ln();
                Split {
                    lambda: 0.5 * ln_j * ln_j,
                    mu: 0.5 * (f.double_contraction(f) - 3.0) - ln_j,
                }
            }
            ModelKind::Quadratic => {
                let d = *f - Tensor33::IDENTITY;
                Split {
                    lambda: 0.0,
                    mu: 0.5 * d.double_contraction(&d),
                }
            }
        }
    }

    fn stress_split(&self, f: &Tensor33, det: f64) -> Result<Split<Tensor33>> {
        Ok(match self.model {
            ModelKind::StVenantKirchhoff => {
                let e = green_strain(f);
                Split {
                    lambda: *f * e.trace(),
                    mu: (*f * e) * 2.0,
                }
            }
            ModelKind::NeoHookean => {
                let f_inv_t = f.inverse()?.transpose();
                Split {
                    lambda: f_inv_t * det.ln(),
                    mu: *f - f_inv_t,
                }
            }
            ModelKind::Quadratic => Split {
                lambda: Tensor33::ZERO,
                mu: *f - Tensor33::IDENTITY,
            },
        })
    }

    /// Directional derivative of the stress parts along `df`.
    fn tangent_split(&self, f: &Tensor33, det: f64, df: &Tensor33) -> Result<Split<Tensor33>> {
        Ok(match self.model {
            ModelKind::StVenantKirchhoff => {
                let e = green_strain(f);
                let de = (df.transpose() * *f).sym_part();
                Split {
                    lambda: *f * de.trace() + *df * e.trace(),
                    mu: (*df * e + *f * de) * 2.0,
                }
            }
            ModelKind::NeoHookean => {
                let f_inv = f.inverse()?;
                let f_inv_t = f_inv.transpose();
                let d_inv_t = f_inv_t * df.transpose() * f_inv_t;
                let d_ln_j = (f_inv * *df).trace();
                Split {
                    lambda: f_inv_t * d_ln_j - d_inv_t * det.ln(),
                    mu: *df + d_inv_t,
                }
            }
            ModelKind::Quadratic => Split {
                lambda: Tensor33::ZERO,
                mu: *df,
            },
        })
    }

    pub fn energy(&self, x: Vector3, f: &Tensor33) -> Result<f64> {
        let det = self.check(x, f)?;
        let s = self.energy_split(f, det);
        Ok(self.lambda.value(x) * s.lambda + self.mu.value(x) * s.mu)
    }

    /// `P = ∂_F e`.
    pub fn first_pk_stress(&self, x: Vector3, f: &Tensor33) -> Result<Tensor33> {
        let det = self.check(x, f)?;
        let s = self.stress_split(f, det)?;
        Ok(s.lambda * self.lambda.value(x) + s.mu * self.mu.value(x))
    }

    /// `∂ₓe` at fixed `F`.
    pub fn explicit_material_gradient(&self, x: Vector3, f: &Tensor33) -> Result<Vector3> {
        let det = self.check(x, f)?;
        let s = self.energy_split(f, det);
        Ok(self.lambda.gradient(x) * s.lambda + self.mu.gradient(x) * s.mu)
    }

    /// `σ = J⁻¹ P Fᵀ`.
    pub fn cauchy_stress(&self, x: Vector3, f: &Tensor33) -> Result<Tensor33> {
        let det = self.check(x, f)?;
        Ok(self.first_pk_stress(x, f)? * f.transpose() * (1.0 / det))
    }

    /// `∂P/∂F [df]` at fixed `x`.
    pub fn stress_increment(&self, x: Vector3, f: &Tensor33, df: &Tensor33) -> Result<Tensor33> {
        let det = self.check(x, f)?;
        let s = self.tangent_split(f, det, df)?;
        Ok(s.lambda * self.lambda.value(x) + s.mu * self.mu.value(x))
    }

    /// `∂P/∂x_k` at fixed `F`, k = 0, 1, 2.
    pub fn explicit_stress_gradient(&self, x: Vector3, f: &Tensor33) -> Result<[Tensor33; 3]> {
        let det = self.check(x, f)?;
        let s = self.stress_split(f, det)?;
        let (gl, gm) = (self.lambda.gradient(x), self.mu.gradient(x));
        Ok([0, 1, 2].map(|k| s.lambda * gl[k] + s.mu * gm[k]))
    }
}

/// Potential energy of body forces, a function of the ambient place.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Potential {
    Zero,
    /// `u = −g · y`, so `b = g`.
    Uniform { force: [f64; 3] },
    /// `u = (k/2)|y − c|²`.
    Spring { stiffness: f64, center: [f64; 3] },
}

impl Potential {
    pub fn value(&self, y: Vector3) -> f64 {
        match self {
            Potential::Zero => 0.0,
            Potential::Uniform { force } => -Vector3(*force).dot(&y),
            Potential::Spring { stiffness, center } => {
                let d = y - Vector3(*center);
                0.5 * stiffness * d.dot(&d)
            }
        }
    }

    /// `∂_y u`.
    pub fn gradient(&self, y: Vector3) -> Vector3 {
        match self {
            Potential::Zero => Vector3::ZERO,
            Potential::Uniform { force } => -Vector3(*force),
            Potential::Spring { stiffness, center } => (y - Vector3(*center)) * *stiffness,
        }
    }

    /// `b = −∂_y u`.
    pub fn body_force(&self, y: Vector3) -> Vector3 {
        -self.gradient(y)
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Potential::Zero => true,
            Potential::Uniform { force } => force.iter().all(|c| c.is_finite()),
            Potential::Spring { stiffness, center } => {
                stiffness.is_finite() && center.iter().all(|c| c.is_finite())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn stvk() -> MaterialModel {
        MaterialModel::homogeneous(ModelKind::StVenantKirchhoff, 1.0, 1.0)
    }

    fn uniaxial() -> Tensor33 {
        Tensor33::diag([1.2, 1.0, 1.0])
    }

    #[test]
    fn natural_state_is_energy_and_stress_free() {
        for kind in [ModelKind::StVenantKirchhoff, ModelKind::NeoHookean, ModelKind::Quadratic] {
            let m = MaterialModel::homogeneous(kind, 1.3, 0.7);
            let x = Vector3::new(0.1, 0.2, 0.3);
            assert_abs_diff_eq!(m.energy(x, &Tensor33::IDENTITY).unwrap(), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(m.first_pk_stress(x, &Tensor33::IDENTITY).unwrap().max_abs(), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(m.cauchy_stress(x, &Tensor33::IDENTITY).unwrap().max_abs(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn stvk_uniaxial_by_hand() {
        // E = diag(0.22, 0, 0): e = ½(0.22)² + (0.22)² = 0.0726
        let x = Vector3::ZERO;
        assert_abs_diff_eq!(stvk().energy(x, &uniaxial()).unwrap(), 0.0726, epsilon = 1e-14);
        let p = stvk().first_pk_stress(x, &uniaxial()).unwrap();
        assert_abs_diff_eq!((p - Tensor33::diag([0.792, 0.22, 0.22])).max_abs(), 0.0, epsilon = 1e-14);
        let sigma = stvk().cauchy_stress(x, &uniaxial()).unwrap();
        let expected = Tensor33::diag([0.792, 0.22 / 1.2, 0.22 / 1.2]);
        assert_abs_diff_eq!((sigma - expected).max_abs(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn neo_hookean_rotation_is_natural() {
        let r = Tensor33::rotation(Vector3::new(0.3, -1.0, 0.4), 0.9);
        let m = MaterialModel::homogeneous(ModelKind::NeoHookean, 2.0, 0.5);
        assert_abs_diff_eq!(m.energy(Vector3::ZERO, &r).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn quadratic_stress_is_linear() {
        let m = MaterialModel::homogeneous(ModelKind::Quadratic, 0.0, 2.5);
        let f = Tensor33([[1.1, 0.2, -0.1], [0.05, 0.9, 0.3], [0.0, -0.2, 1.3]]);
        let p = m.first_pk_stress(Vector3::ZERO, &f).unwrap();
        assert_abs_diff_eq!((p - (f - Tensor33::IDENTITY) * 2.5).max_abs(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn graded_stvk_material_gradient_by_hand() {
        let beta = 0.3;
        let m = MaterialModel::new(
            ModelKind::StVenantKirchhoff,
            ModulusField::Constant(1.0),
            ModulusField::Affine {
                value: 1.0,
                gradient: [beta, 0.0, 0.0],
            },
        );
        let g = m.explicit_material_gradient(Vector3::new(0.4, 0.1, 0.0), &uniaxial()).unwrap();
        assert_abs_diff_eq!((g - Vector3::new(0.0484 * beta, 0.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert!(!m.homogeneous_flag());
        let flat = MaterialModel::new(
            ModelKind::StVenantKirchhoff,
            ModulusField::Constant(1.0),
            ModulusField::Affine {
                value: 1.0,
                gradient: [0.0; 3],
            },
        );
        assert!(flat.homogeneous_flag());
        assert_eq!(flat.explicit_material_gradient(Vector3::new(0.4, 0.1, 0.0), &uniaxial()).unwrap(), Vector3::ZERO);
    }

    #[test]
    fn inverted_state_is_rejected() {
        let f = Tensor33::diag([1.0, -1.0, 1.0]);
        for kind in [ModelKind::StVenantKirchhoff, ModelKind::NeoHookean, ModelKind::Quadratic] {
            let m = MaterialModel::homogeneous(kind, 1.0, 1.0);
            assert!(matches!(m.energy(Vector3::ZERO, &f), Err(Error::NonPositiveJacobian { .. })));
            assert!(matches!(m.first_pk_stress(Vector3::ZERO, &f), Err(Error::NonPositiveJacobian { .. })));
        }
    }

    fn random_state(rng: &mut ChaCha8Rng) -> (Vector3, Tensor33) {
        loop {
            let mut f = Tensor33::IDENTITY;
            for i in 0..3 {
                for j in 0..3 {
                    f[(i, j)] += rng.gen_range(-0.4..0.4);
                }
            }
            let det = f.det();
            if (0.5..=2.0).contains(&det) {
                let x = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                return (x, f);
            }
        }
    }

    fn graded(kind: ModelKind) -> MaterialModel {
        MaterialModel::new(
            kind,
            ModulusField::Sinusoidal {
                mean: 1.5,
                amplitude: 0.3,
                wavevector: [0.7, -0.4, 1.1],
            },
            ModulusField::Affine {
                value: 1.0,
                gradient: [0.2, -0.1, 0.15],
            },
        )
    }

    #[test]
    fn tangent_matches_fd_of_stress() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in [ModelKind::StVenantKirchhoff, ModelKind::NeoHookean, ModelKind::Quadratic] {
            let m = graded(kind);
            for _ in 0..50 {
                let (x, f) = random_state(&mut rng);
                let (_, df) = random_state(&mut rng);
                let df = df - Tensor33::IDENTITY;
                let h = 1e-6;
                let fd = (m.first_pk_stress(x, &(f + df * h)).unwrap() - m.first_pk_stress(x, &(f - df * h)).unwrap())
                    * (0.5 / h);
                let an = m.stress_increment(x, &f, &df).unwrap();
                assert!((an - fd).norm() <= 1e-6 * (1.0 + an.norm()), "{kind:?}");

                let gp = m.explicit_stress_gradient(x, &f).unwrap();
                let gfd = fd::tensor_partials(|z| m.first_pk_stress(z, &f), x, 1e-5).unwrap();
                for k in 0..3 {
                    assert!((gp[k] - gfd[k]).norm() <= 1e-6 * (1.0 + gp[k].norm()));
                }
            }
        }
    }

    #[test]
    fn frame_indifference_and_symmetry_of_cauchy_stress() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for kind in [ModelKind::StVenantKirchhoff, ModelKind::NeoHookean] {
            let m = graded(kind);
            for _ in 0..50 {
                let (x, f) = random_state(&mut rng);
                let axis = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let r = Tensor33::rotation(axis, rng.gen_range(-3.0..3.0));
                let e = m.energy(x, &f).unwrap();
                let er = m.energy(x, &(r * f)).unwrap();
                assert!((e - er).abs() <= 1e-10 * e.abs().max(1e-300) + 1e-15);
                let s = m.cauchy_stress(x, &f).unwrap();
                assert!(s.skew_part().norm() <= 1e-10 * s.norm());
            }
        }
    }

    #[test]
    fn potential_force_matches_fd() {
        let u = Potential::Spring {
            stiffness: 2.0,
            center: [0.1, -0.2, 0.3],
        };
        let y = Vector3::new(0.5, 0.4, -0.1);
        let g = fd::scalar_gradient(|z| Ok(u.value(z)), y, 1e-5).unwrap();
        assert!((u.body_force(y) + g).norm() <= 1e-6 * (1.0 + g.norm()));
        let u = Potential::Uniform { force: [0.0, 0.0, -9.8] };
        assert_eq!(u.body_force(y), Vector3::new(0.0, 0.0, -9.8));
    }
}
