//! Eshelby flux through nested spheres.

use super::part::{BodyPart, Geometry, QuadratureSpec};
use super::power::PartEvaluation;
use crate::configurational::{BodyForce, Scenario, Sources};
use crate::error::{Error, Result};
use crate::field::FieldPreset;
use crate::material::Potential;
use crate::tensor::Vector3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sphere {
    pub center: Vector3,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceReport {
    /// `∫ ℙn` over the inner sphere, outward normal.
    pub inner_flux: Vector3,
    pub outer_flux: Vector3,
    /// `outer_flux − inner_flux`
    pub difference: Vector3,
    /// `∫ ∂ₓe` over the shell between the spheres.
    pub shell_source: Vector3,
}

fn flux(scenario: &Scenario, s: &Sphere, rule: QuadratureSpec) -> Result<Vector3> {
    let part = BodyPart::new(
        Geometry::Ball {
            center: s.center.0,
            radius: s.radius,
        },
        rule,
    )?;
    PartEvaluation::new(scenario, &part)?.eshelby_flux()
}

fn check_nested(inner: &Sphere, outer: &Sphere) -> Result<()> {
    if (inner.center - outer.center).norm() > 0.0 || !(0.0 < inner.radius && inner.radius < outer.radius) {
        return Err(Error::PreconditionViolated(
            "surfaces must be concentric spheres with inner radius below outer radius".into(),
        ));
    }
    Ok(())
}

/// Flux difference with no check of the hypotheses.
pub fn surface_flux_difference(
    scenario: &Scenario,
    inner: &Sphere,
    outer: &Sphere,
    rule: QuadratureSpec,
) -> Result<SurfaceReport> {
    check_nested(inner, outer)?;
    let inner_flux = flux(scenario, inner, rule)?;
    let outer_flux = flux(scenario, outer, rule)?;
    let shell = BodyPart::new(
        Geometry::Shell {
            center: inner.center.0,
            inner_radius: inner.radius,
            outer_radius: outer.radius,
        },
        rule,
    )?;
    Ok(SurfaceReport {
        inner_flux,
        outer_flux,
        difference: outer_flux - inner_flux,
        shell_source: PartEvaluation::new(scenario, &shell)?.explicit_gradient_integral()?,
    })
}

fn zero_sources(sources: &Sources) -> bool {
    match sources {
        Sources::Closure => false,
        Sources::Preset {
            body_force,
            driving_force,
            couple,
        } => {
            let no_body = matches!(
                body_force,
                BodyForce::Field(FieldPreset::Zero) | BodyForce::Potential(Potential::Zero)
            );
            no_body && *driving_force == FieldPreset::Zero && *couple == FieldPreset::Zero
        }
    }
}

/// `‖∫_outer ℙn − ∫_inner ℙn‖` for a homogeneous material free of body
/// forces, driving forces and couples.
pub fn surface_independence_check(
    scenario: &Scenario,
    inner: &Sphere,
    outer: &Sphere,
    rule: QuadratureSpec,
) -> Result<f64> {
    if !scenario.material.homogeneous_flag() {
        return Err(Error::PreconditionViolated("material is not homogeneous".into()));
    }
    if !zero_sources(&scenario.sources) {
        return Err(Error::PreconditionViolated(
            "body force, driving force and couple must all be zero".into(),
        ));
    }
    Ok(surface_flux_difference(scenario, inner, outer, rule)?.difference.norm())
}
