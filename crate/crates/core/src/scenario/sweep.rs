//! Convergence sweeps over quadrature order or difference step.

use serde::{Deserialize, Serialize};

use super::checks::power_gap;
use super::config::ScenarioConfig;
use super::table::{Cell, Table};
use crate::error::Result;
use crate::field::DerivativeMode;

pub const SWEEP_ORDERS: [usize; 4] = [2, 4, 6, 8];
pub const SWEEP_STEPS: [f64; 5] = [1e-3, 1e-4, 1e-5, 1e-6, 1e-7];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Quad,
    Fd,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Quad => "quad",
            SweepAxis::Fd => "fd",
        }
    }
}

/// One row per axis value. `power_error` is `|𝒫^rel − 𝒫^rel-inn|`;
/// `divergence_error` is the largest deviation of the difference-quotient
/// `Div ℙ` from the analytic one over the volume nodes (fd axis only, and
/// only when the motion has analytic second derivatives); `ratio` is the
/// previous `power_error` over this one.
pub fn sweep(cfg: &ScenarioConfig, axis: SweepAxis) -> Result<Table> {
    cfg.validate()?;
    let mut t = Table::new(
        "convergence",
        &["axis", "value", "relative", "inner", "power_error", "divergence_error", "ratio"],
    );
    let base = cfg.scenario();
    let part = cfg.part()?;
    let mut prev: Option<f64> = None;
    let mut push = |t: &mut Table, value: Cell, gap: (f64, f64, f64, f64), div: Option<f64>| {
        let (e, r, i, _) = gap;
        let ratio = prev.map(|p| p / e).unwrap_or(f64::NAN);
        prev = Some(e);
        t.push(vec![
            Cell::text(axis.name()),
            value,
            Cell::Num(r),
            Cell::Num(i),
            Cell::Num(e),
            div.map(Cell::Num).unwrap_or(Cell::Empty),
            Cell::Num(ratio),
        ]);
    };
    match axis {
        SweepAxis::Quad => {
            let pair = cfg.pair();
            for o in SWEEP_ORDERS {
                let p = part.with_order(o)?;
                push(&mut t, Cell::Int(o), power_gap(&base, &p, &pair)?, None);
            }
        }
        SweepAxis::Fd => {
            let exact = base.clone();
            let reference = exact.analytic_divergence().then_some(&exact);
            for h in SWEEP_STEPS {
                let s = crate::configurational::Scenario {
                    motion: base
                        .motion
                        .clone()
                        .with_steps(h, h)
                        .with_mode(DerivativeMode::FiniteDifference),
                    ..base.clone()
                };
                let pair = cfg.pair().with_step(h).with_mode(DerivativeMode::FiniteDifference);
                let div = match reference {
                    Some(r) => {
                        let mut worst = 0.0f64;
                        for n in part.volume_nodes() {
                            worst = worst.max((s.div_eshelby(n.x)? - r.div_eshelby(n.x)?).max_abs());
                        }
                        Some(worst)
                    }
                    None => None,
                };
                push(&mut t, Cell::Num(h), power_gap(&s, &part, &pair)?, div);
            }
        }
    }
    Ok(t)
}
