//! Execution of the checks listed in a scenario file.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::{Check, ScenarioConfig, SurfaceExpectation};
use super::table::{Cell, Table, Tables};
use crate::configurational::Scenario;
use crate::error::{Error, Result};
use crate::fd;
use crate::field::{DerivativeMode, VirtualFieldPair};
use crate::harness::invariance::{grouping_comparison, invariance_decomposition, InvarianceDecomposition, GENERATOR_NAMES};
use crate::harness::invariance::{PROOF_ROTATION_FACTORS, PROOF_TRANSLATION_FACTORS};
use crate::harness::surface::{surface_flux_difference, surface_independence_check, Sphere};
use crate::harness::{BodyPart, PartEvaluation};
use crate::material::MaterialModel;
use crate::tensor::{Tensor33, Vector3};
use crate::tolerance as tol;

/// Step for differences of the energy in the constitutive oracle.
pub const ORACLE_STEP: f64 = 1e-6;
/// Smallest balance size for the grouping comparison to count as nontrivial.
pub const NONTRIVIAL_BALANCE_MIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
    /// Reported without a threshold.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub relation: Relation,
    pub passed: bool,
}

impl Metric {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Metric {
            name: name.into(),
            value,
            threshold,
            relation: Relation::AtMost,
            passed: value <= threshold,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Metric {
            name: name.into(),
            value,
            threshold,
            relation: Relation::AtLeast,
            passed: value >= threshold,
        }
    }

    pub fn info(name: impl Into<String>, value: f64) -> Self {
        Metric {
            name: name.into(),
            value,
            threshold: f64::NAN,
            relation: Relation::Info,
            passed: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub metrics: Vec<Metric>,
}

impl CheckOutcome {
    fn new(check: &str) -> Self {
        CheckOutcome {
            check: check.into(),
            metrics: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.metrics.iter().all(|m| m.passed)
    }

    fn push(&mut self, m: Metric) {
        self.metrics.push(m);
    }
}

/// Fitted grouping weights, recorded in the manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupingFactors {
    pub material_translation: [f64; 3],
    pub material_translation_proof: [f64; 3],
    pub material_rotation: [f64; 4],
    pub material_rotation_proof: [f64; 4],
    pub material_translation_pieces: [&'static str; 3],
    pub material_rotation_pieces: [&'static str; 4],
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub name: String,
    pub outcomes: Vec<CheckOutcome>,
    pub tables: Tables,
    pub grouping: Option<GroupingFactors>,
    pub derivatives: DerivativeMode,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(CheckOutcome::passed)
    }

    pub fn failed_checks(&self) -> usize {
        self.outcomes.iter().filter(|o| !o.passed()).count()
    }
}

struct Context<'a> {
    cfg: &'a ScenarioConfig,
    scenario: Scenario,
    part: BodyPart,
    pair: VirtualFieldPair,
    budget: f64,
}

fn shifted_pivot(part: &BodyPart) -> Vector3 {
    Vector3::new(1.0, 1.0, 1.0) * (0.25 * part.geometry.diameter() / 3f64.sqrt())
}

fn with_mode(s: &Scenario, mode: DerivativeMode) -> Scenario {
    Scenario {
        motion: s.motion.clone().with_mode(mode),
        ..s.clone()
    }
}

/// Random `F = I + H` with entries of `H` in `[-0.4, 0.4]` and `det F` in
/// `[0.5, 2]`.
pub fn random_deformation<R: Rng>(rng: &mut R) -> Tensor33 {
    loop {
        let h = Tensor33(std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-0.4..0.4))));
        let f = Tensor33::IDENTITY + h;
        let det = f.det();
        if (0.5..=2.0).contains(&det) {
            return f;
        }
    }
}

fn vec_cells(v: Vector3) -> [Cell; 3] {
    [Cell::Num(v[0]), Cell::Num(v[1]), Cell::Num(v[2])]
}

pub fn run_checks(cfg: &ScenarioConfig) -> Result<RunReport> {
    cfg.validate()?;
    let scenario = cfg.scenario();
    let part = cfg.part()?;
    let mode = if scenario.analytic_divergence() {
        DerivativeMode::Analytic
    } else {
        DerivativeMode::FiniteDifference
    };
    let ctx = Context {
        cfg,
        pair: cfg.pair(),
        budget: tol::budget(mode),
        scenario,
        part,
    };
    let mut tables = Tables::default();
    let eval = PartEvaluation::new(&ctx.scenario, &ctx.part)?;
    base_tables(&ctx, &eval, &mut tables)?;
    let mut outcomes = Vec::new();
    let mut grouping = None;
    for (i, check) in cfg.checks.iter().enumerate() {
        let seed = cfg.seed.wrapping_add(1000 * i as u64);
        let outcome = match check {
            Check::ConstitutiveOracle { samples, extra_models } => {
                constitutive(&ctx, *samples, extra_models, seed, &mut tables)?
            }
            Check::Eshelby { expected } => eshelby(&ctx, expected)?,
            Check::PointwiseClosure {} => pointwise(&ctx, &mut tables)?,
            Check::InnerPower { orders, fd_rerun } => inner_power(&ctx, orders, *fd_rerun, &mut tables)?,
            Check::Invariance { probes, pivot_shift } => {
                invariance(&ctx, &eval, *probes, pivot_shift.map(Vector3), seed, &mut tables)?
            }
            Check::Grouping { pivot_shifts } => {
                let (o, g) = grouping_check(&ctx, pivot_shifts, seed, &mut tables)?;
                grouping = Some(g);
                o
            }
            Check::SurfaceIndependence {
                inner_radius,
                outer_radius,
                expect,
            } => surface(&ctx, *inner_radius, *outer_radius, *expect, &mut tables)?,
            Check::Noether { samples } => noether(&ctx, *samples, seed, &mut tables)?,
            Check::TorqueIdentities { samples, extra_models } => {
                torque(&ctx, *samples, extra_models, seed, &mut tables)?
            }
            Check::StandardPower {} => standard_power(&ctx, &eval)?,
            Check::IntegralBalances { expect_zero } => balances(&ctx, &eval, *expect_zero)?,
        };
        outcomes.push(outcome);
    }
    let mut summary = Table::new("checks", &["check", "metric", "value", "relation", "threshold", "passed"]);
    for o in &outcomes {
        for m in &o.metrics {
            let rel = match m.relation {
                Relation::AtMost => "<=",
                Relation::AtLeast => ">=",
                Relation::Info => "info",
            };
            summary.push(vec![
                Cell::text(&o.check),
                Cell::text(&m.name),
                Cell::Num(m.value),
                Cell::text(rel),
                if m.relation == Relation::Info {
                    Cell::Empty
                } else {
                    Cell::Num(m.threshold)
                },
                Cell::Bool(m.passed),
            ]);
        }
    }
    tables.insert_front(summary);
    Ok(RunReport {
        name: cfg.name.clone(),
        outcomes,
        tables,
        grouping,
        derivatives: mode,
    })
}

fn base_tables(ctx: &Context<'_>, eval: &PartEvaluation<'_>, tables: &mut Tables) -> Result<()> {
    let mut t = Table::new("balances", &["quantity", "pivot", "c0", "c1", "c2"]);
    let s = &ctx.scenario;
    let shift = shifted_pivot(&ctx.part);
    for (label, x0, y0) in [
        ("base", s.material_pivot, s.ambient_pivot),
        ("shifted", s.material_pivot + shift, s.ambient_pivot + shift),
    ] {
        let b = eval.integral_balances_about(x0, y0)?;
        for (name, v) in [
            ("force", b.force),
            ("torque", b.torque),
            ("configurational_force", b.configurational_force),
            ("configurational_torque", b.configurational_torque),
        ] {
            let [a, bb, c] = vec_cells(v);
            t.push(vec![Cell::text(name), Cell::text(label), a, bb, c]);
        }
    }
    let center = ctx.part.center();
    let p = s.eshelby_stress(center)?;
    for i in 0..3 {
        t.push(vec![
            Cell::text(&format!("eshelby_row{i}")),
            Cell::text("center"),
            Cell::Num(p[(i, 0)]),
            Cell::Num(p[(i, 1)]),
            Cell::Num(p[(i, 2)]),
        ]);
    }
    tables.push(t);

    let rel = eval.relative_power(&ctx.pair)?;
    let inner = eval.inner_relative_power(&ctx.pair)?;
    let standard = eval.standard_external_power(&ctx.pair.without_material_rate())?;
    let mut t = Table::new("powers", &["quantity", "value"]);
    for (name, v) in [
        ("relative_active", rel.relative_active),
        ("disarrangement", rel.disarrangement),
        ("relative", rel.relative),
        ("inner", inner.value),
        ("body", rel.terms.body),
        ("traction", rel.terms.traction),
        ("energy_flux", rel.terms.energy_flux),
        ("inhomogeneity", rel.terms.inhomogeneity),
        ("couple", rel.terms.couple),
        ("standard_external_without_w", standard.value),
        ("magnitude", rel.magnitude),
    ] {
        t.push(vec![Cell::text(name), Cell::Num(v)]);
    }
    tables.push(t);
    Ok(())
}

fn relative_error(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if b == 0.0 {
        d
    } else {
        d / b.abs()
    }
}

fn constitutive(
    ctx: &Context<'_>,
    samples: usize,
    extra: &[MaterialModel],
    seed: u64,
    tables: &mut Tables,
) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("constitutive_oracle");
    let mut t = Table::new(
        "constitutive",
        &["model_index", "model", "sample", "det", "stress_rel_error", "gradient_rel_error"],
    );
    let models: Vec<&MaterialModel> = std::iter::once(&ctx.cfg.material).chain(extra).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (mi, m) in models.iter().enumerate() {
        let graded = !m.homogeneous_flag();
        let (mut worst_p, mut worst_g) = (0.0f64, 0.0f64);
        for k in 0..samples {
            let x = ctx.part.geometry.sample_interior(&mut rng, 0.05);
            let f = random_deformation(&mut rng);
            let p = m.first_pk_stress(x, &f)?;
            let p_fd = fd::tensor_derivative(|g| m.energy(x, &g), f, ORACLE_STEP)?;
            let ep = relative_error((p - p_fd).norm() + p.norm(), p.norm());
            worst_p = worst_p.max(ep);
            let eg = if graded {
                let g = m.explicit_material_gradient(x, &f)?;
                let g_fd = fd::scalar_gradient(|z| m.energy(z, &f), x, ORACLE_STEP)?;
                let e = relative_error((g - g_fd).norm() + g.norm(), g.norm());
                worst_g = worst_g.max(e);
                Cell::Num(e)
            } else {
                Cell::Empty
            };
            t.push(vec![
                Cell::Int(mi),
                Cell::text(m.model.name()),
                Cell::Int(k),
                Cell::Num(f.det()),
                Cell::Num(ep),
                eg,
            ]);
        }
        out.push(Metric::at_most(
            format!("model{mi}_{}_stress_rel_error", m.model.name()),
            worst_p,
            tol::CONSTITUTIVE_REL,
        ));
        if graded {
            out.push(Metric::at_most(
                format!("model{mi}_{}_gradient_rel_error", m.model.name()),
                worst_g,
                tol::CONSTITUTIVE_REL,
            ));
        }
    }
    tables.push(t);
    Ok(out)
}

fn eshelby(ctx: &Context<'_>, expected: &[[f64; 3]; 3]) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("eshelby");
    let p = ctx.scenario.eshelby_stress(ctx.part.center())?;
    out.push(Metric::at_most(
        "max_abs_deviation",
        (p - Tensor33(*expected)).max_abs(),
        tol::ESHELBY_FIXTURE_ABS,
    ));
    Ok(out)
}

fn pointwise(ctx: &Context<'_>, tables: &mut Tables) -> Result<CheckOutcome> {
    use rayon::prelude::*;
    let mut out = CheckOutcome::new("pointwise_closure");
    let s = &ctx.scenario;
    let rows = ctx
        .part
        .volume_nodes()
        .par_iter()
        .map(|n| {
            let r = s.pointwise_residuals(n.x)?;
            let st = s.state(n.x)?;
            let scale = 1.0 + st.stress.norm() + st.eshelby.norm();
            Ok((n.x, r, r.max_norm() / scale))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(
        "pointwise",
        &[
            "x0",
            "x1",
            "x2",
            "force",
            "torque",
            "configurational_force",
            "configurational_torque",
            "relative",
        ],
    );
    let mut worst = 0.0f64;
    for (x, r, rel) in rows {
        worst = worst.max(rel);
        let [a, b, c] = vec_cells(x);
        t.push(vec![
            a,
            b,
            c,
            Cell::Num(r.force.norm()),
            Cell::Num(r.torque.norm()),
            Cell::Num(r.configurational_force.norm()),
            Cell::Num(r.configurational_torque.norm()),
            Cell::Num(rel),
        ]);
    }
    tables.push(t);
    out.push(Metric::at_most("max_relative_residual", worst, ctx.budget));
    Ok(out)
}

/// `(|𝒫^rel − 𝒫^rel-inn|, 𝒫^rel, 𝒫^rel-inn, magnitude)`.
pub fn power_gap(scenario: &Scenario, part: &BodyPart, pair: &VirtualFieldPair) -> Result<(f64, f64, f64, f64)> {
    let eval = PartEvaluation::new(scenario, part)?;
    let rel = eval.relative_power(pair)?;
    let inn = eval.inner_relative_power(pair)?;
    Ok((
        (rel.relative - inn.value).abs(),
        rel.relative,
        inn.value,
        rel.magnitude.max(inn.magnitude),
    ))
}

fn inner_power(ctx: &Context<'_>, orders: &[usize], fd_rerun: bool, tables: &mut Tables) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("inner_power");
    let (err, rel, _, _) = power_gap(&ctx.scenario, &ctx.part, &ctx.pair)?;
    out.push(Metric::at_most("relative_gap", err / (1.0 + rel.abs()), ctx.budget));

    let mut t = Table::new("convergence", &["axis", "value", "relative", "inner", "error", "ratio"]);
    let mut errors = Vec::new();
    let mut prev: Option<f64> = None;
    for &o in orders {
        let part = ctx.part.with_order(o)?;
        let (e, r, i, mag) = power_gap(&ctx.scenario, &part, &ctx.pair)?;
        let ratio = prev.map(|p| p / e).unwrap_or(f64::NAN);
        t.push(vec![
            Cell::text("quad"),
            Cell::Int(o),
            Cell::Num(r),
            Cell::Num(i),
            Cell::Num(e),
            Cell::Num(ratio),
        ]);
        prev = Some(e);
        errors.push((e, mag));
    }
    tables.push(t);
    let (first, _) = errors[0];
    let (last, mag) = errors[errors.len() - 1];
    let floor = tol::FLOAT_FLOOR_REL * (1.0 + mag);
    if last <= floor {
        out.push(Metric::at_most("finest_error_at_float_floor", last, floor));
    } else {
        out.push(Metric::at_least("refinement_reduction", first / last, tol::CONVERGENCE_FACTOR));
    }
    if fd_rerun {
        let fd = with_mode(&ctx.scenario, DerivativeMode::FiniteDifference);
        let pair = ctx.pair.clone().with_mode(DerivativeMode::FiniteDifference);
        let (e, r, _, _) = power_gap(&fd, &ctx.part, &pair)?;
        out.push(Metric::at_most("relative_gap_fd", e / (1.0 + r.abs()), tol::FD_REL));
    }
    Ok(out)
}

fn invariance_rows(t: &mut Table, label: &str, d: &InvarianceDecomposition) {
    for (s, name) in GENERATOR_NAMES.iter().enumerate() {
        let c = d.coefficients()[s];
        for i in 0..3 {
            t.push(vec![
                Cell::text(label),
                Cell::text(name),
                Cell::Int(i),
                Cell::Num(d.unit_defects[3 * s + i]),
                Cell::Num(c[i]),
            ]);
        }
    }
}

fn invariance(
    ctx: &Context<'_>,
    eval: &PartEvaluation<'_>,
    probes: usize,
    shift: Option<Vector3>,
    seed: u64,
    tables: &mut Tables,
) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("invariance");
    let mut t = Table::new(
        "invariance",
        &["pivot", "generator", "component", "unit_defect", "coefficient"],
    );
    let mut record = |label: &str, res: Result<InvarianceDecomposition>, out: &mut CheckOutcome| -> Result<()> {
        match res {
            Ok(d) => {
                out.push(Metric::at_most(
                    format!("{label}_max_coefficient_over_scale"),
                    d.max_coefficient() / d.scale.max(f64::MIN_POSITIVE),
                    tol::INVARIANCE_COEFFICIENT_REL,
                ));
                out.push(Metric::at_most(
                    format!("{label}_affine_residual"),
                    d.affine_residual,
                    tol::AFFINE_FIT_REL,
                ));
                out.push(Metric::info(format!("{label}_power_scale"), d.scale));
                invariance_rows(&mut t, label, &d);
                Ok(())
            }
            Err(Error::NonAffineDefect { residual }) => {
                out.push(Metric::at_most(format!("{label}_affine_residual"), residual, tol::AFFINE_FIT_REL));
                Ok(())
            }
            Err(e) => Err(e),
        }
    };
    record("base", invariance_decomposition(eval, &ctx.pair, probes, seed), &mut out)?;
    if let Some(s) = shift {
        let shifted = ctx
            .scenario
            .clone()
            .with_pivots(ctx.scenario.material_pivot + s, ctx.scenario.ambient_pivot + s);
        let e = PartEvaluation::new(&shifted, &ctx.part)?;
        record("shifted", invariance_decomposition(&e, &ctx.pair, probes, seed ^ 1), &mut out)?;
    }
    if let Some(ch) = ctx.cfg.explicit_change() {
        let base = eval.relative_power(&ctx.pair)?.relative;
        let changed = eval
            .relative_power(&ctx.pair.changed(&ctx.scenario.motion, &ch))?
            .relative;
        t.push(vec![
            Cell::text("base"),
            Cell::text("configured_change"),
            Cell::Empty,
            Cell::Num(changed - base),
            Cell::Empty,
        ]);
        out.push(Metric::info("configured_change_defect", changed - base));
    }
    tables.push(t);
    Ok(out)
}

const TRANSLATION_PIECES: [&str; 3] = ["eshelby_flux", "minus_pulled_body_force", "inhomogeneity"];
const ROTATION_PIECES: [&str; 4] = [
    "eshelby_moment",
    "minus_pulled_body_moment",
    "inhomogeneity_moment",
    "couple",
];

fn grouping_check(
    ctx: &Context<'_>,
    shifts: &[[f64; 3]],
    seed: u64,
    tables: &mut Tables,
) -> Result<(CheckOutcome, GroupingFactors)> {
    let mut out = CheckOutcome::new("grouping");
    let shifts: Vec<Vector3> = shifts.iter().map(|s| Vector3(*s)).collect();
    let g = grouping_comparison(&ctx.scenario, &ctx.part, &ctx.pair, &shifts, 2, seed)?;
    out.push(Metric::at_least("balance_size", g.balance_size, NONTRIVIAL_BALANCE_MIN));
    out.push(Metric::at_most("ambient_translation_vs_force_balance", g.ambient_translation_mismatch, ctx.budget));
    out.push(Metric::at_most("ambient_rotation_vs_torque_balance", g.ambient_rotation_mismatch, ctx.budget));
    out.push(Metric::at_most("material_translation_fit", g.material_translation_fit, ctx.budget));
    out.push(Metric::at_most("material_rotation_fit", g.material_rotation_fit, ctx.budget));
    out.push(Metric::at_least(
        "material_translation_conditioning",
        g.translation_conditioning,
        tol::GROUPING_CONDITIONING_MIN,
    ));
    out.push(Metric::at_least(
        "material_rotation_conditioning",
        g.rotation_conditioning,
        tol::GROUPING_CONDITIONING_MIN,
    ));
    out.push(Metric::info("proof_translation_misfit", g.proof_translation_misfit));
    out.push(Metric::info("proof_rotation_misfit", g.proof_rotation_misfit));
    out.push(Metric::info("samples", g.samples as f64));
    let mut t = Table::new("grouping", &["coefficient", "piece", "fitted_factor", "proof_factor"]);
    for (k, p) in TRANSLATION_PIECES.iter().enumerate() {
        t.push(vec![
            Cell::text("material_translation"),
            Cell::text(p),
            Cell::Num(g.material_translation_factors[k]),
            Cell::Num(PROOF_TRANSLATION_FACTORS[k]),
        ]);
    }
    for (k, p) in ROTATION_PIECES.iter().enumerate() {
        t.push(vec![
            Cell::text("material_rotation"),
            Cell::text(p),
            Cell::Num(g.material_rotation_factors[k]),
            Cell::Num(PROOF_ROTATION_FACTORS[k]),
        ]);
    }
    tables.push(t);
    let factors = GroupingFactors {
        material_translation: g.material_translation_factors,
        material_translation_proof: PROOF_TRANSLATION_FACTORS,
        material_rotation: g.material_rotation_factors,
        material_rotation_proof: PROOF_ROTATION_FACTORS,
        material_translation_pieces: TRANSLATION_PIECES,
        material_rotation_pieces: ROTATION_PIECES,
    };
    Ok((out, factors))
}

fn surface(
    ctx: &Context<'_>,
    inner_radius: f64,
    outer_radius: f64,
    expect: SurfaceExpectation,
    tables: &mut Tables,
) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("surface_independence");
    let c = ctx.part.center();
    let inner = Sphere {
        center: c,
        radius: inner_radius,
    };
    let outer = Sphere {
        center: c,
        radius: outer_radius,
    };
    let rule = ctx.part.quadrature;
    let r = surface_flux_difference(&ctx.scenario, &inner, &outer, rule)?;
    let mut t = Table::new("surface", &["quantity", "c0", "c1", "c2"]);
    for (name, v) in [
        ("inner_flux", r.inner_flux),
        ("outer_flux", r.outer_flux),
        ("difference", r.difference),
        ("shell_source", r.shell_source),
    ] {
        let [a, b, cc] = vec_cells(v);
        t.push(vec![Cell::text(name), a, b, cc]);
    }
    tables.push(t);
    match expect {
        SurfaceExpectation::Independent => {
            let d = surface_independence_check(&ctx.scenario, &inner, &outer, rule)?;
            let scale = 1f64.max(r.inner_flux.norm()).max(r.outer_flux.norm());
            out.push(Metric::at_most("flux_difference_over_scale", d / scale, tol::SURFACE_INDEPENDENCE_REL));
        }
        SurfaceExpectation::ShellSource => {
            let dev = (r.difference - r.shell_source).norm() / r.shell_source.norm().max(f64::MIN_POSITIVE);
            out.push(Metric::info("shell_source_norm", r.shell_source.norm()));
            out.push(Metric::at_most("difference_vs_shell_source", dev, tol::SURFACE_CONTROL_REL));
        }
    }
    Ok(out)
}

fn noether(ctx: &Context<'_>, samples: usize, seed: u64, tables: &mut Tables) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("noether");
    let s = &ctx.scenario;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Table::new(
        "noether",
        &[
            "x0",
            "x1",
            "x2",
            "ambient_condition",
            "material_condition",
            "explicit_gradient_dot_w",
            "flux_divergence",
        ],
    );
    let (mut r1, mut r2, mut graded_dev, mut div) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let x = ctx.part.geometry.sample_interior(&mut rng, 0.05);
        let (a, m) = s.noether_condition_residuals(&ctx.pair, x)?;
        let dot = s.state(x)?.explicit_gradient.dot(&ctx.pair.w(x)?);
        let d = s.noether_flux_divergence(&ctx.pair, x)?;
        r1 = r1.max(a.abs());
        r2 = r2.max(m.abs());
        graded_dev = graded_dev.max((m - dot).abs());
        div = div.max(d.abs());
        let [c0, c1, c2] = vec_cells(x);
        t.push(vec![c0, c1, c2, Cell::Num(a), Cell::Num(m), Cell::Num(dot), Cell::Num(d)]);
    }
    tables.push(t);
    out.push(Metric::at_most("max_ambient_condition", r1, tol::NOETHER_CONDITION_ABS));
    if s.material.homogeneous_flag() {
        out.push(Metric::at_most("max_material_condition", r2, tol::NOETHER_CONDITION_ABS));
        out.push(Metric::at_most("max_flux_divergence", div, tol::NOETHER_DIVERGENCE_ABS));
    } else {
        out.push(Metric::at_most(
            "max_material_condition_minus_gradient_dot_w",
            graded_dev,
            tol::NOETHER_GRADED_ABS,
        ));
        out.push(Metric::info("max_material_condition", r2));
        out.push(Metric::info("max_flux_divergence", div));
    }
    Ok(out)
}

fn torque(
    ctx: &Context<'_>,
    samples: usize,
    extra: &[MaterialModel],
    seed: u64,
    tables: &mut Tables,
) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("torque_identities");
    let mut t = Table::new(
        "torque",
        &["model_index", "model", "sample", "standard_skew_rel", "eshelby_skew_rel"],
    );
    let models: Vec<&MaterialModel> = std::iter::once(&ctx.cfg.material).chain(extra).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (mi, m) in models.iter().enumerate() {
        let frame = m.frame_indifferent();
        let symmetric = m.homogeneous_flag() && m.isotropic();
        let (mut ws, mut we) = (0.0f64, 0.0f64);
        for k in 0..samples {
            let x = ctx.part.geometry.sample_interior(&mut rng, 0.05);
            let f = random_deformation(&mut rng);
            let p = m.first_pk_stress(x, &f)?;
            let pft = p * f.transpose();
            let esh = crate::configurational::eshelby_from(m.energy(x, &f)?, &f, &p);
            let rs = pft.skew_part().norm() / pft.norm().max(f64::MIN_POSITIVE);
            let re = esh.skew_part().norm() / esh.norm().max(f64::MIN_POSITIVE);
            ws = ws.max(rs);
            we = we.max(re);
            t.push(vec![
                Cell::Int(mi),
                Cell::text(m.model.name()),
                Cell::Int(k),
                Cell::Num(rs),
                Cell::Num(re),
            ]);
        }
        let name = format!("model{mi}_{}", m.model.name());
        if frame {
            out.push(Metric::at_most(format!("{name}_standard_skew"), ws, tol::TORQUE_REL));
        } else {
            out.push(Metric::info(format!("{name}_standard_skew"), ws));
        }
        if symmetric {
            out.push(Metric::at_most(format!("{name}_eshelby_skew"), we, tol::TORQUE_REL));
        } else {
            out.push(Metric::info(format!("{name}_eshelby_skew"), we));
        }
    }
    tables.push(t);
    Ok(out)
}

fn standard_power(ctx: &Context<'_>, eval: &PartEvaluation<'_>) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("standard_power");
    let pair = ctx.pair.without_material_rate();
    let rel = eval.relative_power(&pair)?.relative;
    let std = eval.standard_external_power(&pair)?.value;
    out.push(Metric::at_most("relative_difference", relative_error(rel, std), tol::STANDARD_POWER_REL));
    out.push(Metric::info("standard_external_power", std));
    Ok(out)
}

fn balances(ctx: &Context<'_>, eval: &PartEvaluation<'_>, expect_zero: bool) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("integral_balances");
    let b = eval.integral_balances()?;
    let scale = eval.balance_scale()?.max(f64::MIN_POSITIVE);
    let names = ["force", "torque", "configurational_force", "configurational_torque"];
    for (name, v) in names.iter().zip(b.as_array()) {
        if expect_zero {
            out.push(Metric::at_most(format!("{name}_over_scale"), v.norm() / scale, ctx.budget));
        } else {
            out.push(Metric::info(format!("{name}_norm"), v.norm()));
        }
    }
    Ok(out)
}
