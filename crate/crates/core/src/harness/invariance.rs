//! Change of observer applied to the relative power: the defect
//! `Δ = 𝒫^rel(v*, w*) − 𝒫^rel(v, w)` and its coefficients.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::part::BodyPart;
use super::power::{ConfigurationalPieces, IntegralBalances, PartEvaluation};
use crate::configurational::Scenario;
use crate::error::{Error, Result};
use crate::field::{FieldPreset, ObserverChange, VirtualFieldPair};
use crate::tensor::Vector3;

/// Relative tolerance on the affine fit of the defect.
pub const AFFINE_FIT_TOL: f64 = 1e-10;

/// Generator slots in the order `ĉ, q̂, c, q`.
pub const GENERATOR_NAMES: [&str; 4] = ["ambient_translation", "ambient_rotation", "material_translation", "material_rotation"];

/// Twelve generator components `(ĉ, q̂, c, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Generators(pub [f64; 12]);

impl Generators {
    pub fn unit(k: usize) -> Self {
        let mut g = [0.0; 12];
        g[k] = 1.0;
        Generators(g)
    }

    fn slot(&self, s: usize) -> Vector3 {
        Vector3([self.0[3 * s], self.0[3 * s + 1], self.0[3 * s + 2]])
    }

    pub fn observer_change(&self, scenario: &Scenario) -> ObserverChange {
        ObserverChange {
            ambient_translation: self.slot(0),
            ambient_rotation: self.slot(1),
            ambient_pivot: scenario.ambient_pivot,
            material_translation: self.slot(2),
            material_rotation: self.slot(3),
            material_pivot: scenario.material_pivot,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceDecomposition {
    /// Coefficient of `ĉ`.
    pub ambient_translation: Vector3,
    /// Coefficient of `q̂`.
    pub ambient_rotation: Vector3,
    /// Coefficient of `c`.
    pub material_translation: Vector3,
    /// Coefficient of `q`.
    pub material_rotation: Vector3,
    /// `Δ` at the twelve unit generators.
    pub unit_defects: [f64; 12],
    /// `Δ` at zero generators.
    pub zero_defect: f64,
    /// Largest relative misfit of `Δ` at random generators against the
    /// affine model.
    pub affine_residual: f64,
    /// Power scale: the largest magnitude of `𝒫^rel` over the pure unit
    /// observer fields.
    pub scale: f64,
    pub probes: usize,
}

impl InvarianceDecomposition {
    pub fn coefficients(&self) -> [Vector3; 4] {
        [
            self.ambient_translation,
            self.ambient_rotation,
            self.material_translation,
            self.material_rotation,
        ]
    }

    pub fn max_coefficient(&self) -> f64 {
        self.coefficients().iter().map(Vector3::norm).fold(0.0, f64::max)
    }
}

fn pure_observer_pair(eval: &PartEvaluation<'_>, g: &Generators) -> VirtualFieldPair {
    let zero = VirtualFieldPair::from_presets(FieldPreset::Zero, FieldPreset::Zero);
    zero.changed(&eval.scenario.motion, &g.observer_change(eval.scenario))
}

/// `𝒫^rel(v*, w*) − 𝒫^rel(v, w)` for the observer change with generators `g`.
pub fn defect(eval: &PartEvaluation<'_>, pair: &VirtualFieldPair, base: f64, g: &Generators) -> Result<f64> {
    let changed = pair.changed(&eval.scenario.motion, &g.observer_change(eval.scenario));
    Ok(eval.relative_power(&changed)?.relative - base)
}

/// Coefficients of the defect by evaluation at unit generators, checked for
/// affinity at `probes` random generator sets.
pub fn invariance_decomposition(
    eval: &PartEvaluation<'_>,
    pair: &VirtualFieldPair,
    probes: usize,
    seed: u64,
) -> Result<InvarianceDecomposition> {
    let base = eval.relative_power(pair)?.relative;
    let zero_defect = defect(eval, pair, base, &Generators([0.0; 12]))?;
    let mut unit_defects = [0.0; 12];
    let mut scale = 0.0f64;
    for (k, d) in unit_defects.iter_mut().enumerate() {
        let g = Generators::unit(k);
        *d = defect(eval, pair, base, &g)?;
        scale = scale.max(eval.relative_power(&pure_observer_pair(eval, &g))?.magnitude);
    }
    let coef = |s: usize| {
        Vector3::new(
            unit_defects[3 * s] - zero_defect,
            unit_defects[3 * s + 1] - zero_defect,
            unit_defects[3 * s + 2] - zero_defect,
        )
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut affine_residual = 0.0f64;
    for _ in 0..probes {
        let g = Generators(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
        let got = defect(eval, pair, base, &g)?;
        let predicted = zero_defect
            + (0..4)
                .map(|s| coef(s).dot(&g.slot(s)))
                .sum::<f64>();
        let size: f64 = g.0.iter().map(|c| c.abs()).sum::<f64>() * scale;
        affine_residual = affine_residual.max((got - predicted).abs() / size.max(f64::MIN_POSITIVE));
    }
    if affine_residual > AFFINE_FIT_TOL {
        return Err(Error::NonAffineDefect {
            residual: affine_residual,
        });
    }
    Ok(InvarianceDecomposition {
        ambient_translation: coef(0),
        ambient_rotation: coef(1),
        material_translation: coef(2),
        material_rotation: coef(3),
        unit_defects,
        zero_defect,
        affine_residual,
        scale,
        probes,
    })
}

/// Weights of the proof's grouping for the `c` coefficient, on
/// `(∫ℙn, −∫Fᵀb, ∫(∂ₓe − f))`.
pub const PROOF_TRANSLATION_FACTORS: [f64; 3] = [1.0, 1.0, 1.0];
/// Weights of the proof's grouping for the `q` coefficient, on
/// `(∫(x − x₀)×ℙn, −∫(x − x₀)×Fᵀb, ∫(x − x₀)×(∂ₓe − f), ∫μ)`.
pub const PROOF_ROTATION_FACTORS: [f64; 4] = [1.0, 1.0, 0.0, 1.0];

/// Comparison of extracted coefficients with the integral balances.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupingComparison {
    /// Largest `|ĉ-coefficient − (∫b + ∫Pn)| / scale` over the samples.
    pub ambient_translation_mismatch: f64,
    /// Largest `|q̂-coefficient − (∫(y − y₀)×b + ∫(y − y₀)×Pn)| / scale`.
    pub ambient_rotation_mismatch: f64,
    /// Least-squares weights for the `c` coefficient.
    pub material_translation_factors: [f64; 3],
    /// Least-squares weights for the `q` coefficient.
    pub material_rotation_factors: [f64; 4],
    /// Relative residuals of the two fits.
    pub material_translation_fit: f64,
    pub material_rotation_fit: f64,
    /// Misfit of the proof's weights, relative to the coefficient size.
    pub proof_translation_misfit: f64,
    pub proof_rotation_misfit: f64,
    /// Smallest singular value over largest, per fit.
    pub translation_conditioning: f64,
    pub rotation_conditioning: f64,
    pub samples: usize,
    /// Largest norm of the four balance vectors over the samples.
    pub balance_size: f64,
}

/// One (part, pivot) evaluation used in the grouping fit.
#[derive(Debug, Clone)]
pub struct GroupingSample {
    pub decomposition: InvarianceDecomposition,
    pub balances: IntegralBalances,
    pub pieces: ConfigurationalPieces,
}

pub fn grouping_sample(
    scenario: &Scenario,
    part: &BodyPart,
    pair: &VirtualFieldPair,
    probes: usize,
    seed: u64,
) -> Result<GroupingSample> {
    let eval = PartEvaluation::new(scenario, part)?;
    Ok(GroupingSample {
        decomposition: invariance_decomposition(&eval, pair, probes, seed)?,
        balances: eval.integral_balances()?,
        pieces: eval.configurational_pieces()?,
    })
}

struct Fit<const N: usize> {
    factors: [f64; N],
    residual: f64,
    proof_misfit: f64,
    conditioning: f64,
}

fn least_squares<const N: usize>(rows: &[([Vector3; N], Vector3)], proof: [f64; N]) -> Result<Fit<N>> {
    let m = 3 * rows.len();
    let mut a = DMatrix::<f64>::zeros(m, N);
    let mut y = DVector::<f64>::zeros(m);
    for (r, (basis, target)) in rows.iter().enumerate() {
        for i in 0..3 {
            for (k, b) in basis.iter().enumerate() {
                a[(3 * r + i, k)] = b[i];
            }
            y[3 * r + i] = target[i];
        }
    }
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let conditioning = if sv.max() > 0.0 { sv.min() / sv.max() } else { 0.0 };
    let x = svd
        .solve(&y, 1e-14 * sv.max())
        .map_err(|e| Error::PreconditionViolated(format!("grouping fit failed: {e}")))?;
    let norm_y = y.norm().max(f64::MIN_POSITIVE);
    let residual = (&a * &x - &y).norm() / norm_y;
    let p = DVector::from_column_slice(&proof);
    let proof_misfit = (&a * &p - &y).norm() / norm_y;
    Ok(Fit {
        factors: std::array::from_fn(|k| x[k]),
        residual,
        proof_misfit,
        conditioning,
    })
}

/// Fits the `c` and `q` coefficients against the separate pieces of the
/// configurational groupings and compares `ĉ`, `q̂` with the standard
/// balances.
pub fn compare_groupings(samples: &[GroupingSample]) -> Result<GroupingComparison> {
    if samples.is_empty() {
        return Err(Error::PreconditionViolated("grouping comparison needs samples".into()));
    }
    let mut ct = 0.0f64;
    let mut cr = 0.0f64;
    let mut balance_size = 0.0f64;
    let mut translation_rows = Vec::new();
    let mut rotation_rows = Vec::new();
    for s in samples {
        let d = &s.decomposition;
        let scale = d.scale.max(f64::MIN_POSITIVE);
        ct = ct.max((d.ambient_translation - s.balances.force).norm() / scale);
        cr = cr.max((d.ambient_rotation - s.balances.torque).norm() / scale);
        balance_size = balance_size.max(s.balances.max_norm());
        let p = &s.pieces;
        translation_rows.push(([p.eshelby_flux, -p.pulled_body_force, p.inhomogeneity], d.material_translation));
        rotation_rows.push((
            [p.eshelby_moment, -p.pulled_body_moment, p.inhomogeneity_moment, p.couple],
            d.material_rotation,
        ));
    }
    let t = least_squares(&translation_rows, PROOF_TRANSLATION_FACTORS)?;
    let r = least_squares(&rotation_rows, PROOF_ROTATION_FACTORS)?;
    Ok(GroupingComparison {
        ambient_translation_mismatch: ct,
        ambient_rotation_mismatch: cr,
        material_translation_factors: t.factors,
        material_rotation_factors: r.factors,
        material_translation_fit: t.residual,
        material_rotation_fit: r.residual,
        proof_translation_misfit: t.proof_misfit,
        proof_rotation_misfit: r.proof_misfit,
        translation_conditioning: t.conditioning,
        rotation_conditioning: r.conditioning,
        samples: samples.len(),
        balance_size,
    })
}

/// Samples over `part`, its subparts and a set of pivot shifts.
pub fn grouping_comparison(
    scenario: &Scenario,
    part: &BodyPart,
    pair: &VirtualFieldPair,
    pivot_shifts: &[Vector3],
    probes: usize,
    seed: u64,
) -> Result<GroupingComparison> {
    let mut parts = vec![part.clone()];
    parts.extend(part.subparts()?);
    let mut shifts = vec![Vector3::ZERO];
    shifts.extend_from_slice(pivot_shifts);
    let mut samples = Vec::new();
    for p in &parts {
        for (i, s) in shifts.iter().enumerate() {
            let shifted = scenario
                .clone()
                .with_pivots(scenario.material_pivot + *s, scenario.ambient_pivot - *s * 0.5);
            samples.push(grouping_sample(&shifted, p, pair, probes, seed.wrapping_add(i as u64))?);
        }
    }
    compare_groupings(&samples)
}
