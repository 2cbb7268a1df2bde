//! Gauss-Legendre and spherical quadrature rules.

use std::f64::consts::PI;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{Tensor33, Vector3};

pub const MAX_ORDER: usize = 64;

/// Values that can be accumulated by quadrature.
pub trait Quantity: Copy + Send + Sync {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, w: f64) -> Self;
}

impl Quantity for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, w: f64) -> Self {
        self * w
    }
}

impl Quantity for Vector3 {
    fn zero() -> Self {
        Vector3::ZERO
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, w: f64) -> Self {
        self * w
    }
}

impl Quantity for Tensor33 {
    fn zero() -> Self {
        Tensor33::ZERO
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, w: f64) -> Self {
        self * w
    }
}

impl<A: Quantity, B: Quantity> Quantity for (A, B) {
    fn zero() -> Self {
        (A::zero(), B::zero())
    }
    fn add(self, other: Self) -> Self {
        (self.0.add(other.0), self.1.add(other.1))
    }
    fn scale(self, w: f64) -> Self {
        (self.0.scale(w), self.1.scale(w))
    }
}

impl<T: Quantity, const N: usize> Quantity for [T; N] {
    fn zero() -> Self {
        [T::zero(); N]
    }
    fn add(self, other: Self) -> Self {
        let mut out = self;
        for (o, b) in out.iter_mut().zip(other) {
            *o = o.add(b);
        }
        out
    }
    fn scale(self, w: f64) -> Self {
        self.map(|t| t.scale(w))
    }
}

/// Sum in slice order, so results do not depend on how values were produced.
pub fn ordered_sum<T: Quantity>(values: impl IntoIterator<Item = T>) -> T {
    values.into_iter().fold(T::zero(), T::add)
}

pub fn check_order(order: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&order) {
        Ok(())
    } else {
        Err(Error::ConfigInvalid(format!(
            "quadrature order {order} outside 1..={MAX_ORDER}"
        )))
    }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    // P_n and P_n' at z by the three-term recurrence.
    let legendre = |z: f64| {
        let (mut prev, mut p) = (1.0, z);
        for k in 2..=n {
            let k = k as f64;
            let next = ((2.0 * k - 1.0) * z * p - (k - 1.0) * prev) / k;
            prev = p;
            p = next;
        }
        (p, n as f64 * (z * p - prev) / (z * z - 1.0))
    };
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(z);
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss-Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    x.iter().zip(&w).map(|(x, w)| (mid + half * x, half * w)).collect()
}

/// Rule on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema, Default)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AngularRule {
    /// Lebedev 26-point rule, exact through degree 7.
    #[default]
    Lebedev26,
    /// Lebedev 50-point rule, exact through degree 11.
    Lebedev50,
    /// Gauss-Legendre in `cos θ` times the trapezoid rule in `φ`.
    Product { polar: usize, azimuthal: usize },
}

fn octahedral_orbit(a: [f64; 3], out: &mut Vec<Vector3>) {
    // All sign changes and coordinate permutations of `a`, deduplicated.
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let start = out.len();
    for p in PERMS {
        for s in 0..8 {
            let mut v = Vector3::ZERO;
            for k in 0..3 {
                let sign = if s & (1 << k) != 0 { -1.0 } else { 1.0 };
                v[k] = sign * a[p[k]];
            }
            if !out[start..].iter().any(|u| (*u - v).max_abs() < 1e-14) {
                out.push(v);
            }
        }
    }
}

impl AngularRule {
    pub fn validate(&self) -> Result<()> {
        if let AngularRule::Product { polar, azimuthal } = self {
            check_order(*polar)?;
            if *azimuthal == 0 || *azimuthal > 4 * MAX_ORDER {
                return Err(Error::ConfigInvalid(format!(
                    "azimuthal count {azimuthal} outside 1..={}",
                    4 * MAX_ORDER
                )));
            }
        }
        Ok(())
    }

    /// Unit directions with weights summing to 4π.
    pub fn nodes(&self) -> Vec<(Vector3, f64)> {
        let lebedev = |orbits: &[([f64; 3], f64)]| {
            let mut out = Vec::new();
            for (a, w) in orbits {
                let mut pts = Vec::new();
                octahedral_orbit(*a, &mut pts);
                out.extend(pts.into_iter().map(|p| (p, 4.0 * PI * w)));
            }
            out
        };
        let s2 = 0.5f64.sqrt();
        let s3 = (1.0f64 / 3.0).sqrt();
        match *self {
            AngularRule::Lebedev26 => lebedev(&[
                ([1.0, 0.0, 0.0], 1.0 / 21.0),
                ([s2, s2, 0.0], 4.0 / 105.0),
                ([s3, s3, s3], 9.0 / 280.0),
            ]),
            AngularRule::Lebedev50 => {
                let l = 1.0 / 11.0f64.sqrt();
                let m = 3.0 / 11.0f64.sqrt();
                lebedev(&[
                    ([1.0, 0.0, 0.0], 4.0 / 315.0),
                    ([s2, s2, 0.0], 64.0 / 2835.0),
                    ([s3, s3, s3], 27.0 / 1280.0),
                    ([l, l, m], 14641.0 / 725760.0),
                ])
            }
            AngularRule::Product { polar, azimuthal } => {
                let mut out = Vec::with_capacity(polar * azimuthal);
                let dphi = 2.0 * PI / azimuthal as f64;
                for (ct, wt) in gauss_legendre_on(polar, -1.0, 1.0) {
                    let st = (1.0 - ct * ct).sqrt();
                    for k in 0..azimuthal {
                        let phi = (k as f64 + 0.5) * dphi;
                        out.push((Vector3::new(st * phi.cos(), st * phi.sin(), ct), wt * dphi));
                    }
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_legendre_integrates_monomials_exactly() {
        for n in 1..=12 {
            let (x, w) = gauss_legendre(n);
            for deg in 0..2 * n {
                let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert_abs_diff_eq!(approx, exact, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn five_point_nodes_by_hand() {
        let (x, w) = gauss_legendre(5);
        let a = (5.0 - 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
        assert_abs_diff_eq!(x[3], a, epsilon = 1e-15);
        assert_abs_diff_eq!(w[2], 128.0 / 225.0, epsilon = 1e-15);
    }

    fn sphere_moment(rule: AngularRule, p: [i32; 3]) -> f64 {
        rule.nodes()
            .iter()
            .map(|(n, w)| w * n[0].powi(p[0]) * n[1].powi(p[1]) * n[2].powi(p[2]))
            .sum()
    }

    /// Exact ∫ x^a y^b z^c over the unit sphere for even exponents.
    fn exact_moment(p: [i32; 3]) -> f64 {
        if p.iter().any(|k| k % 2 == 1) {
            return 0.0;
        }
        let dfact = |k: i32| (1..=k).rev().step_by(2).map(f64::from).product::<f64>();
        let num = dfact(p[0] - 1) * dfact(p[1] - 1) * dfact(p[2] - 1);
        4.0 * PI * num / dfact(p[0] + p[1] + p[2] + 1)
    }

    #[test]
    fn spherical_rules_reach_their_degree() {
        for (rule, degree, count) in [
            (AngularRule::Lebedev26, 7, 26),
            (AngularRule::Lebedev50, 11, 50),
            (AngularRule::Product { polar: 6, azimuthal: 12 }, 11, 72),
        ] {
            assert_eq!(rule.nodes().len(), count);
            for a in 0..=degree {
                for b in 0..=degree - a {
                    for c in 0..=degree - a - b {
                        let got = sphere_moment(rule, [a, b, c]);
                        assert_abs_diff_eq!(got, exact_moment([a, b, c]), epsilon = 1e-13);
                    }
                }
            }
        }
    }
}
