//! Declarative scenario files.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::configurational::{BodyForce, Scenario, Sources};
use crate::error::{Error, Result};
use crate::field::{
    DerivativeMode, FieldPreset, Motion, MotionPreset, ObserverChange, VirtualFieldPair, DEFAULT_H_MOTION,
    DEFAULT_H_SECOND,
};
use crate::harness::{BodyPart, Geometry, QuadratureSpec};
use crate::material::{MaterialModel, ModelKind};
use crate::tensor::Vector3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub geometry: Geometry,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    pub material: MaterialModel,
    pub motion: MotionPreset,
    #[serde(default)]
    pub virtual_fields: FieldPairSpec,
    #[serde(default)]
    pub observer_change: ObserverChangeSpec,
    #[serde(default = "closure")]
    pub sources: Sources,
    #[serde(default = "analytic")]
    pub derivatives: DerivativeMode,
    #[serde(default)]
    pub fd_steps: FdSteps,
    /// Defaults to the center of the geometry for both pivots.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pivots: Option<Pivots>,
    /// Output directory; the command line and environment take precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
    #[serde(default)]
    pub seed: u64,
    pub checks: Vec<Check>,
}

fn closure() -> Sources {
    Sources::Closure
}

fn analytic() -> DerivativeMode {
    DerivativeMode::Analytic
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct FieldPairSpec {
    pub v: FieldPreset,
    pub w: FieldPreset,
}

impl Default for FieldPairSpec {
    fn default() -> Self {
        FieldPairSpec {
            v: FieldPreset::Zero,
            w: FieldPreset::Zero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    #[serde(default)]
    pub ambient_translation: [f64; 3],
    #[serde(default)]
    pub ambient_rotation: [f64; 3],
    #[serde(default)]
    pub material_translation: [f64; 3],
    #[serde(default)]
    pub material_rotation: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema, Default)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ObserverChangeSpec {
    /// Unit generators one at a time.
    #[default]
    SweepUnitGenerators,
    /// A single change, evaluated in addition to the unit sweep.
    Generators(GeneratorSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct FdSteps {
    #[serde(default = "h_motion")]
    pub motion: f64,
    #[serde(default = "h_second")]
    pub second: f64,
    #[serde(default = "h_motion")]
    pub field: f64,
}

fn h_motion() -> f64 {
    DEFAULT_H_MOTION
}

fn h_second() -> f64 {
    DEFAULT_H_SECOND
}

impl Default for FdSteps {
    fn default() -> Self {
        FdSteps {
            motion: DEFAULT_H_MOTION,
            second: DEFAULT_H_SECOND,
            field: DEFAULT_H_MOTION,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct Pivots {
    pub material: [f64; 3],
    pub ambient: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceExpectation {
    /// Fluxes through the two spheres agree.
    Independent,
    /// The flux difference equals `∫ ∂ₓe` over the shell.
    ShellSource,
}

fn samples_default() -> usize {
    100
}

fn probes_default() -> usize {
    8
}

fn orders_default() -> Vec<usize> {
    vec![4, 8]
}

fn yes() -> bool {
    true
}

/// Verification steps run on a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Check {
    /// Analytic stress and explicit material gradient against central
    /// differences of the energy at random states.
    ConstitutiveOracle {
        #[serde(default = "samples_default")]
        samples: usize,
        #[serde(default)]
        extra_models: Vec<MaterialModel>,
    },
    /// Eshelby stress at the geometry center against a fixture.
    Eshelby { expected: [[f64; 3]; 3] },
    /// The four pointwise residuals at every volume node.
    PointwiseClosure {},
    /// Relative power against inner power, with a quadrature refinement
    /// and optionally a rerun with difference-quotient derivatives.
    InnerPower {
        #[serde(default = "orders_default")]
        orders: Vec<usize>,
        #[serde(default = "yes")]
        fd_rerun: bool,
    },
    /// Coefficients of the observer-change defect.
    Invariance {
        #[serde(default = "probes_default")]
        probes: usize,
        /// Extra run with both pivots moved by this vector.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pivot_shift: Option<[f64; 3]>,
    },
    /// Extracted coefficients against the integral balances.
    Grouping {
        #[serde(default)]
        pivot_shifts: Vec<[f64; 3]>,
    },
    SurfaceIndependence {
        inner_radius: f64,
        outer_radius: f64,
        expect: SurfaceExpectation,
    },
    Noether {
        #[serde(default = "samples_default")]
        samples: usize,
    },
    TorqueIdentities {
        #[serde(default = "samples_default")]
        samples: usize,
        #[serde(default)]
        extra_models: Vec<MaterialModel>,
    },
    /// Relative power with `w ≡ 0` against the standard external power.
    StandardPower {},
    IntegralBalances {
        #[serde(default)]
        expect_zero: bool,
    },
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::ConstitutiveOracle { .. } => "constitutive_oracle",
            Check::Eshelby { .. } => "eshelby",
            Check::PointwiseClosure {} => "pointwise_closure",
            Check::InnerPower { .. } => "inner_power",
            Check::Invariance { .. } => "invariance",
            Check::Grouping { .. } => "grouping",
            Check::SurfaceIndependence { .. } => "surface_independence",
            Check::Noether { .. } => "noether",
            Check::TorqueIdentities { .. } => "torque_identities",
            Check::StandardPower {} => "standard_power",
            Check::IntegralBalances { .. } => "integral_balances",
        }
    }
}

fn finite(v: &[f64]) -> bool {
    v.iter().all(|c| c.is_finite())
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::ConfigInvalid(msg.into())
}

fn validate_model(m: &MaterialModel) -> Result<()> {
    m.validate()
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return Err(invalid(format!(
                "scenario name {:?} must be nonempty ASCII letters, digits, '_' or '-'",
                self.name
            )));
        }
        self.geometry.validate()?;
        BodyPart::new(self.geometry.clone(), self.quadrature)?;
        validate_model(&self.material)?;
        self.motion.validate()?;
        self.virtual_fields.v.validate()?;
        self.virtual_fields.w.validate()?;
        if let ObserverChangeSpec::Generators(g) = &self.observer_change {
            let all = [
                g.ambient_translation,
                g.ambient_rotation,
                g.material_translation,
                g.material_rotation,
            ];
            if !all.iter().all(|v| finite(v)) {
                return Err(invalid("observer generators must be finite"));
            }
        }
        if let Sources::Preset {
            body_force,
            driving_force,
            couple,
        } = &self.sources
        {
            match body_force {
                BodyForce::Field(p) => p.validate()?,
                BodyForce::Potential(u) => {
                    if !u.is_finite() {
                        return Err(invalid("potential parameters must be finite"));
                    }
                }
            }
            driving_force.validate()?;
            couple.validate()?;
        }
        let s = &self.fd_steps;
        for h in [s.motion, s.second, s.field] {
            if !(h.is_finite() && h > 0.0 && h < 1.0) {
                return Err(invalid(format!("difference step {h} outside (0, 1)")));
            }
        }
        if let Some(p) = &self.pivots {
            if !finite(&p.material) || !finite(&p.ambient) {
                return Err(invalid("pivots must be finite"));
            }
        }
        if self.checks.is_empty() {
            return Err(invalid("at least one check is required"));
        }
        for c in &self.checks {
            self.validate_check(c)?;
        }
        Ok(())
    }

    fn validate_check(&self, c: &Check) -> Result<()> {
        let positive = |n: usize, what: &str| {
            if n == 0 || n > 100_000 {
                Err(invalid(format!("{what} must be in 1..=100000")))
            } else {
                Ok(())
            }
        };
        match c {
            Check::ConstitutiveOracle { samples, extra_models } | Check::TorqueIdentities { samples, extra_models } => {
                positive(*samples, "samples")?;
                extra_models.iter().try_for_each(validate_model)
            }
            Check::Eshelby { expected } => {
                if finite(expected.as_flattened()) {
                    Ok(())
                } else {
                    Err(invalid("expected Eshelby stress must be finite"))
                }
            }
            Check::InnerPower { orders, .. } => {
                if orders.len() < 2 {
                    return Err(invalid("inner_power needs at least two quadrature orders"));
                }
                orders.iter().try_for_each(|o| crate::harness::quadrature::check_order(*o))
            }
            Check::Invariance { probes, pivot_shift } => {
                positive(*probes, "probes")?;
                match pivot_shift {
                    Some(s) if !finite(s) => Err(invalid("pivot shift must be finite")),
                    _ => Ok(()),
                }
            }
            Check::Grouping { pivot_shifts } => {
                if pivot_shifts.iter().all(|s| finite(s)) {
                    Ok(())
                } else {
                    Err(invalid("pivot shifts must be finite"))
                }
            }
            Check::SurfaceIndependence {
                inner_radius,
                outer_radius,
                ..
            } => {
                if !(0.0 < *inner_radius && inner_radius < outer_radius && outer_radius.is_finite()) {
                    return Err(invalid("surface radii must satisfy 0 < inner < outer"));
                }
                Ok(())
            }
            Check::Noether { samples } => positive(*samples, "samples"),
            Check::PointwiseClosure {} | Check::StandardPower {} | Check::IntegralBalances { .. } => Ok(()),
        }
    }

    pub fn pivots(&self) -> (Vector3, Vector3) {
        match &self.pivots {
            Some(p) => (Vector3(p.material), Vector3(p.ambient)),
            None => {
                let c = self.geometry.center();
                (c, c)
            }
        }
    }

    pub fn motion(&self) -> Motion {
        Motion::preset(self.motion.clone())
            .with_steps(self.fd_steps.motion, self.fd_steps.second)
            .with_mode(self.derivatives)
    }

    pub fn scenario(&self) -> Scenario {
        let (x0, y0) = self.pivots();
        Scenario::new(self.motion(), self.material.clone(), self.sources.clone()).with_pivots(x0, y0)
    }

    pub fn part(&self) -> Result<BodyPart> {
        BodyPart::new(self.geometry.clone(), self.quadrature)
    }

    pub fn pair(&self) -> VirtualFieldPair {
        VirtualFieldPair::from_presets(self.virtual_fields.v.clone(), self.virtual_fields.w.clone())
            .with_step(self.fd_steps.field)
    }

    pub fn explicit_change(&self) -> Option<ObserverChange> {
        match &self.observer_change {
            ObserverChangeSpec::SweepUnitGenerators => None,
            ObserverChangeSpec::Generators(g) => {
                let (x0, y0) = self.pivots();
                Some(ObserverChange {
                    ambient_translation: Vector3(g.ambient_translation),
                    ambient_rotation: Vector3(g.ambient_rotation),
                    ambient_pivot: y0,
                    material_translation: Vector3(g.material_translation),
                    material_rotation: Vector3(g.material_rotation),
                    material_pivot: x0,
                })
            }
        }
    }
}

/// The JSON schema of [`ScenarioConfig`].
pub fn schema_json() -> String {
    let schema = schemars::schema_for!(ScenarioConfig);
    let mut s = serde_json::to_string_pretty(&schema).expect("schema serializes");
    s.push('\n');
    s
}

/// Machine-readable preset listing.
#[derive(Debug, Clone, Serialize, Deserialize, JsonSchema)]
pub struct PresetListing {
    pub materials: Vec<PresetEntry>,
    pub motions: Vec<PresetEntry>,
    pub fields: Vec<PresetEntry>,
    pub potentials: Vec<PresetEntry>,
    pub moduli: Vec<PresetEntry>,
    pub checks: Vec<PresetEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, JsonSchema)]
pub struct PresetEntry {
    pub name: String,
    pub parameters: Vec<String>,
    pub doc: String,
}

fn entry(name: &str, parameters: &[&str], doc: &str) -> PresetEntry {
    PresetEntry {
        name: name.into(),
        parameters: parameters.iter().map(|p| p.to_string()).collect(),
        doc: doc.into(),
    }
}

pub fn preset_listing() -> PresetListing {
    let materials = [ModelKind::StVenantKirchhoff, ModelKind::NeoHookean, ModelKind::Quadratic]
        .iter()
        .map(|m| {
            let doc = match m {
                ModelKind::StVenantKirchhoff => "e = (lambda/2)(tr E)^2 + mu tr(E^2), E = (F^T F - I)/2",
                ModelKind::NeoHookean => "e = (mu/2)(tr F^T F - 3) - mu ln J + (lambda/2)(ln J)^2",
                ModelKind::Quadratic => "e = (mu/2)|F - I|^2, not frame-indifferent",
            };
            entry(m.name(), &["lambda", "mu"], doc)
        })
        .collect();
    PresetListing {
        materials,
        motions: vec![
            entry("identity", &[], "y = x"),
            entry("homogeneous", &["gradient"], "y = F0 x"),
            entry("rigid_rotation", &["axis", "angle"], "y = R x"),
            entry("simple_shear", &["gamma"], "y = x + gamma x2 e1"),
            entry("harmonic", &["alpha"], "y = x + alpha (x1^2 - x2^2, -2 x1 x2, 0)"),
            entry(
                "sinusoidal",
                &["amplitude", "wavevector", "direction"],
                "y = x + a sin(k.x) d",
            ),
            entry(
                "superposed",
                &["axis", "angle", "translation", "base"],
                "y = R base(x) + t",
            ),
        ],
        fields: vec![
            entry("zero", &[], "0"),
            entry("constant", &["value"], "c"),
            entry("rigid", &["translation", "rotation", "pivot"], "c + q x (x - x0)"),
            entry("linear", &["matrix", "offset"], "A x + b"),
            entry(
                "sinusoidal",
                &["amplitude", "wavevector", "direction", "phase"],
                "a sin(k.x + phase) d",
            ),
            entry("sum", &["[fields]"], "sum of fields"),
        ],
        potentials: vec![
            entry("zero", &[], "u = 0"),
            entry("uniform", &["force"], "u = -force.y"),
            entry("spring", &["stiffness", "center"], "u = (k/2)|y - c|^2"),
        ],
        moduli: vec![
            entry("constant", &["value"], "m"),
            entry("affine", &["value", "gradient"], "m0 + g.x"),
            entry("sinusoidal", &["mean", "amplitude", "wavevector"], "m0 + a sin(k.x)"),
        ],
        checks: vec![
            entry("constitutive_oracle", &["samples", "extra_models"], "stress and material gradient against differences of the energy"),
            entry("eshelby", &["expected"], "Eshelby stress at the geometry center"),
            entry("pointwise_closure", &[], "pointwise balance residuals at volume nodes"),
            entry("inner_power", &["orders", "fd_rerun"], "relative power against inner power"),
            entry("invariance", &["probes", "pivot_shift"], "coefficients of the observer-change defect"),
            entry("grouping", &["pivot_shifts"], "extracted coefficients against the integral balances"),
            entry("surface_independence", &["inner_radius", "outer_radius", "expect"], "Eshelby flux through nested spheres"),
            entry("noether", &["samples"], "Noether conditions and flux divergence"),
            entry("torque_identities", &["samples", "extra_models"], "skew parts of P F^T and of the Eshelby stress"),
            entry("standard_power", &[], "relative power with w = 0 against the external power"),
            entry("integral_balances", &["expect_zero"], "the four integral balances"),
        ],
    }
}

/// JSON schema of the preset listing.
pub fn listing_schema_json() -> String {
    let schema = schemars::schema_for!(PresetListing);
    serde_json::to_string_pretty(&schema).expect("schema serializes") + "\n"
}
