//! The power functionals and integral balances over a part.

use rayon::prelude::*;

use super::part::BodyPart;
use super::quadrature::{ordered_sum, Quantity};
use crate::configurational::{PointState, Scenario, SourceValues};
use crate::error::Result;
use crate::field::VirtualFieldPair;
use crate::tensor::Vector3;

/// Scenario data at a volume node. Sources are evaluated once per node.
#[derive(Debug, Clone, Copy)]
pub struct VolumeSample {
    pub x: Vector3,
    pub weight: f64,
    pub state: PointState,
    pub sources: SourceValues,
}

#[derive(Debug, Clone, Copy)]
pub struct SurfaceSample {
    pub x: Vector3,
    pub normal: Vector3,
    pub weight: f64,
    pub state: PointState,
}

/// A scenario evaluated on the nodes of a part.
#[derive(Debug, Clone)]
pub struct PartEvaluation<'a> {
    pub scenario: &'a Scenario,
    pub part: &'a BodyPart,
    pub volume: Vec<VolumeSample>,
    pub surface: Vec<SurfaceSample>,
}

/// The five integrals making up the relative power.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PowerTerms {
    /// `∫ b·(v − Fw)`
    pub body: f64,
    /// `∫_∂ Pn·(v − Fw)`
    pub traction: f64,
    /// `∫_∂ (n·w) e`
    pub energy_flux: f64,
    /// `∫ (∂ₓe − f)·(w − curl w × (x − x₀))`
    pub inhomogeneity: f64,
    /// `∫ μ·curl w`
    pub couple: f64,
}

impl Quantity for PowerTerms {
    fn zero() -> Self {
        PowerTerms::default()
    }
    fn add(self, o: Self) -> Self {
        PowerTerms {
            body: self.body + o.body,
            traction: self.traction + o.traction,
            energy_flux: self.energy_flux + o.energy_flux,
            inhomogeneity: self.inhomogeneity + o.inhomogeneity,
            couple: self.couple + o.couple,
        }
    }
    fn scale(self, w: f64) -> Self {
        PowerTerms {
            body: self.body * w,
            traction: self.traction * w,
            energy_flux: self.energy_flux * w,
            inhomogeneity: self.inhomogeneity * w,
            couple: self.couple * w,
        }
    }
}

impl PowerTerms {
    fn abs(self) -> Self {
        PowerTerms {
            body: self.body.abs(),
            traction: self.traction.abs(),
            energy_flux: self.energy_flux.abs(),
            inhomogeneity: self.inhomogeneity.abs(),
            couple: self.couple.abs(),
        }
    }

    pub fn relative_active(&self) -> f64 {
        self.body + self.traction
    }

    pub fn disarrangement(&self) -> f64 {
        self.energy_flux + self.inhomogeneity + self.couple
    }

    pub fn total(&self) -> f64 {
        self.body + self.traction + self.energy_flux + self.inhomogeneity + self.couple
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativePower {
    pub terms: PowerTerms,
    /// `𝒫^rel-a`
    pub relative_active: f64,
    /// `𝒫^dis`
    pub disarrangement: f64,
    /// `𝒫^rel = 𝒫^rel-a + 𝒫^dis`
    pub relative: f64,
    /// Sum of the integrals of the absolute integrands; a size for relative
    /// comparisons.
    pub magnitude: f64,
}

/// A scalar integral with the integral of its absolute integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarIntegral {
    pub value: f64,
    pub magnitude: f64,
}

/// The four vectors of the integral balances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralBalances {
    /// `∫ b + ∫ Pn`
    pub force: Vector3,
    /// `∫ (y − y₀) × b + ∫ (y − y₀) × Pn`
    pub torque: Vector3,
    /// `∫ ℙn − ∫ Fᵀb + ∫ (∂ₓe − f)`
    pub configurational_force: Vector3,
    /// `∫ (x − x₀) × ℙn − ∫ (x − x₀) × Fᵀb + ∫ μ`
    pub configurational_torque: Vector3,
}

impl IntegralBalances {
    pub fn as_array(&self) -> [Vector3; 4] {
        [
            self.force,
            self.torque,
            self.configurational_force,
            self.configurational_torque,
        ]
    }

    pub fn max_norm(&self) -> f64 {
        self.as_array().iter().map(Vector3::norm).fold(0.0, f64::max)
    }
}

/// Separate pieces of the configurational groupings, so that their weights
/// can be compared with the coefficients of the invariance defect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfigurationalPieces {
    /// `∫_∂ ℙn`
    pub eshelby_flux: Vector3,
    /// `∫ Fᵀb`
    pub pulled_body_force: Vector3,
    /// `∫ (∂ₓe − f)`
    pub inhomogeneity: Vector3,
    /// `∫_∂ (x − x₀) × ℙn`
    pub eshelby_moment: Vector3,
    /// `∫ (x − x₀) × Fᵀb`
    pub pulled_body_moment: Vector3,
    /// `∫ (x − x₀) × (∂ₓe − f)`
    pub inhomogeneity_moment: Vector3,
    /// `∫ μ`
    pub couple: Vector3,
}

impl<'a> PartEvaluation<'a> {
    pub fn new(scenario: &'a Scenario, part: &'a BodyPart) -> Result<Self> {
        let volume = part
            .volume_nodes()
            .par_iter()
            .map(|n| {
                Ok(VolumeSample {
                    x: n.x,
                    weight: n.weight,
                    state: scenario.state(n.x)?,
                    sources: scenario.sources_at(n.x)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let surface = part
            .surface_nodes()
            .par_iter()
            .map(|n| {
                Ok(SurfaceSample {
                    x: n.x,
                    normal: n.normal,
                    weight: n.weight,
                    state: scenario.state(n.x)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PartEvaluation {
            scenario,
            part,
            volume,
            surface,
        })
    }

    pub fn integrate_volume<T, G>(&self, g: G) -> Result<T>
    where
        T: Quantity,
        G: Fn(&VolumeSample) -> Result<T> + Sync,
    {
        let vals = self
            .volume
            .par_iter()
            .map(|s| Ok(g(s)?.scale(s.weight)))
            .collect::<Result<Vec<T>>>()?;
        Ok(ordered_sum(vals))
    }

    pub fn integrate_surface<T, G>(&self, g: G) -> Result<T>
    where
        T: Quantity,
        G: Fn(&SurfaceSample) -> Result<T> + Sync,
    {
        let vals = self
            .surface
            .par_iter()
            .map(|s| Ok(g(s)?.scale(s.weight)))
            .collect::<Result<Vec<T>>>()?;
        Ok(ordered_sum(vals))
    }

    /// `𝒫^rel(v, w)` term by term.
    pub fn relative_power(&self, pair: &VirtualFieldPair) -> Result<RelativePower> {
        let x0 = self.scenario.material_pivot;
        let (vol, vol_abs) = self.integrate_volume(|s| {
            let (v, w) = (pair.v(s.x)?, pair.w(s.x)?);
            let curl = pair.curl_w(s.x)?;
            let a = s.state.explicit_gradient - s.sources.driving_force;
            let t = PowerTerms {
                body: s.sources.body_force.dot(&(v - s.state.f * w)),
                inhomogeneity: a.dot(&(w - curl.cross(&(s.x - x0)))),
                couple: s.sources.couple.dot(&curl),
                ..Default::default()
            };
            Ok((t, t.abs()))
        })?;
        let (surf, surf_abs) = self.integrate_surface(|s| {
            let (v, w) = (pair.v(s.x)?, pair.w(s.x)?);
            let t = PowerTerms {
                traction: (s.state.stress * s.normal).dot(&(v - s.state.f * w)),
                energy_flux: s.normal.dot(&w) * s.state.energy,
                ..Default::default()
            };
            Ok((t, t.abs()))
        })?;
        let terms = vol.add(surf);
        let relative_active = terms.relative_active();
        let disarrangement = terms.disarrangement();
        Ok(RelativePower {
            terms,
            relative_active,
            disarrangement,
            relative: relative_active + disarrangement,
            magnitude: vol_abs.add(surf_abs).total(),
        })
    }

    /// `𝒫^rel-inn(v, w) = ∫ P·∇v + ℙ·∇w − (x − x₀) ⊗ (∂ₓe − f)·Skw∇w + μ·curl w`.
    pub fn inner_relative_power(&self, pair: &VirtualFieldPair) -> Result<ScalarIntegral> {
        let x0 = self.scenario.material_pivot;
        let (value, magnitude) = self.integrate_volume(|s| {
            let gv = pair.grad_v(s.x)?;
            let gw = pair.grad_w(s.x)?;
            let curl = pair.curl_w(s.x)?;
            let a = s.state.explicit_gradient - s.sources.driving_force;
            let parts = [
                s.state.stress.double_contraction(&gv),
                s.state.eshelby.double_contraction(&gw),
                -(s.x - x0).outer(&a).double_contraction(&gw.skew_part()),
                s.sources.couple.dot(&curl),
            ];
            Ok((parts.iter().sum::<f64>(), parts.iter().map(|p| p.abs()).sum::<f64>()))
        })?;
        Ok(ScalarIntegral { value, magnitude })
    }

    /// `∫ b·v + ∫_∂ Pn·v`.
    pub fn standard_external_power(&self, pair: &VirtualFieldPair) -> Result<ScalarIntegral> {
        let (bv, bv_abs) = self.integrate_volume(|s| {
            let p = s.sources.body_force.dot(&pair.v(s.x)?);
            Ok((p, p.abs()))
        })?;
        let (tv, tv_abs) = self.integrate_surface(|s| {
            let p = (s.state.stress * s.normal).dot(&pair.v(s.x)?);
            Ok((p, p.abs()))
        })?;
        Ok(ScalarIntegral {
            value: bv + tv,
            magnitude: bv_abs + tv_abs,
        })
    }

    pub fn integral_balances(&self) -> Result<IntegralBalances> {
        self.integral_balances_about(self.scenario.material_pivot, self.scenario.ambient_pivot)
    }

    pub fn integral_balances_about(&self, x0: Vector3, y0: Vector3) -> Result<IntegralBalances> {
        let pieces = self.configurational_pieces_about(x0)?;
        let [b, yb] = self.integrate_volume(|s| {
            let b = s.sources.body_force;
            Ok([b, (s.state.y - y0).cross(&b)])
        })?;
        let [pn, ypn] = self.integrate_surface(|s| {
            let t = s.state.stress * s.normal;
            Ok([t, (s.state.y - y0).cross(&t)])
        })?;
        Ok(IntegralBalances {
            force: b + pn,
            torque: yb + ypn,
            configurational_force: pieces.eshelby_flux - pieces.pulled_body_force + pieces.inhomogeneity,
            configurational_torque: pieces.eshelby_moment - pieces.pulled_body_moment + pieces.couple,
        })
    }

    pub fn configurational_pieces(&self) -> Result<ConfigurationalPieces> {
        self.configurational_pieces_about(self.scenario.material_pivot)
    }

    pub fn configurational_pieces_about(&self, x0: Vector3) -> Result<ConfigurationalPieces> {
        let [ftb, a, rftb, ra, mu] = self.integrate_volume(|s| {
            let ftb = s.state.f.transpose() * s.sources.body_force;
            let a = s.state.explicit_gradient - s.sources.driving_force;
            let r = s.x - x0;
            Ok([ftb, a, r.cross(&ftb), r.cross(&a), s.sources.couple])
        })?;
        let [flux, moment] = self.integrate_surface(|s| {
            let t = s.state.eshelby * s.normal;
            Ok([t, (s.x - x0).cross(&t)])
        })?;
        Ok(ConfigurationalPieces {
            eshelby_flux: flux,
            pulled_body_force: ftb,
            inhomogeneity: a,
            eshelby_moment: moment,
            pulled_body_moment: rftb,
            inhomogeneity_moment: ra,
            couple: mu,
        })
    }

    /// Size of the integral balances: the integrals of the absolute values
    /// of their integrands, with lever arms bounded by the part diameter.
    pub fn balance_scale(&self) -> Result<f64> {
        let arm = 1.0 + self.part.geometry.diameter();
        let vol = self.integrate_volume(|s| {
            let src = s.sources;
            Ok(src.body_force.norm()
                + (s.state.f.transpose() * src.body_force).norm()
                + (s.state.explicit_gradient - src.driving_force).norm()
                + src.couple.norm())
        })?;
        let surf = self.integrate_surface(|s| Ok(s.state.stress.norm() + s.state.eshelby.norm()))?;
        Ok(arm * (vol + surf))
    }

    /// `∫_∂ ℙn`.
    pub fn eshelby_flux(&self) -> Result<Vector3> {
        self.integrate_surface(|s| Ok(s.state.eshelby * s.normal))
    }

    /// `∫ ∂ₓe`.
    pub fn explicit_gradient_integral(&self) -> Result<Vector3> {
        self.integrate_volume(|s| Ok(s.state.explicit_gradient))
    }
}

/// `𝒫^rel` of `pair` over `part`.
pub fn relative_power(scenario: &Scenario, part: &BodyPart, pair: &VirtualFieldPair) -> Result<RelativePower> {
    PartEvaluation::new(scenario, part)?.relative_power(pair)
}

pub fn inner_relative_power(scenario: &Scenario, part: &BodyPart, pair: &VirtualFieldPair) -> Result<f64> {
    Ok(PartEvaluation::new(scenario, part)?.inner_relative_power(pair)?.value)
}

pub fn standard_external_power(scenario: &Scenario, part: &BodyPart, pair: &VirtualFieldPair) -> Result<f64> {
    Ok(PartEvaluation::new(scenario, part)?.standard_external_power(pair)?.value)
}

pub fn integral_balance_residuals(scenario: &Scenario, part: &BodyPart) -> Result<IntegralBalances> {
    PartEvaluation::new(scenario, part)?.integral_balances()
}
