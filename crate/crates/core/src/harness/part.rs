//! Parts of the body with their volume and boundary quadrature.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::quadrature::{check_order, gauss_legendre_on, ordered_sum, AngularRule, Quantity};
use crate::error::{Error, Result};
use crate::tensor::Vector3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Geometry {
    /// Axis-aligned box `[lo, hi]`.
    Box { lo: [f64; 3], hi: [f64; 3] },
    Ball { center: [f64; 3], radius: f64 },
    /// Region between two concentric spheres.
    Shell {
        center: [f64; 3],
        inner_radius: f64,
        outer_radius: f64,
    },
}

fn default_order() -> usize {
    6
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    /// Gauss points per axis (boxes) or per radius (balls, shells).
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default)]
    pub angular: AngularRule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            order: default_order(),
            angular: AngularRule::default(),
        }
    }
}

impl QuadratureSpec {
    pub fn with_order(order: usize) -> Self {
        QuadratureSpec {
            order,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeNode {
    pub x: Vector3,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceNode {
    pub x: Vector3,
    /// Outward unit normal.
    pub normal: Vector3,
    pub weight: f64,
}

/// A part `𝔟` together with its quadrature nodes.
#[derive(Debug, Clone)]
pub struct BodyPart {
    pub geometry: Geometry,
    pub quadrature: QuadratureSpec,
    volume: Vec<VolumeNode>,
    surface: Vec<SurfaceNode>,
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|c| c.is_finite());
        let ok = match self {
            Geometry::Box { lo, hi } => finite(lo) && finite(hi) && (0..3).all(|k| lo[k] < hi[k]),
            Geometry::Ball { center, radius } => finite(center) && radius.is_finite() && *radius > 0.0,
            Geometry::Shell {
                center,
                inner_radius,
                outer_radius,
            } => {
                finite(center)
                    && *inner_radius > 0.0
                    && outer_radius.is_finite()
                    && inner_radius < outer_radius
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ConfigInvalid(format!("degenerate geometry {self:?}")))
        }
    }

    pub fn center(&self) -> Vector3 {
        match self {
            Geometry::Box { lo, hi } => (Vector3(*lo) + Vector3(*hi)) * 0.5,
            Geometry::Ball { center, .. } | Geometry::Shell { center, .. } => Vector3(*center),
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            Geometry::Box { lo, hi } => (0..3).map(|k| hi[k] - lo[k]).product(),
            Geometry::Ball { radius, .. } => 4.0 / 3.0 * PI * radius.powi(3),
            Geometry::Shell {
                inner_radius,
                outer_radius,
                ..
            } => 4.0 / 3.0 * PI * (outer_radius.powi(3) - inner_radius.powi(3)),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Geometry::Box { lo, hi } => {
                let d: Vec<f64> = (0..3).map(|k| hi[k] - lo[k]).collect();
                2.0 * (d[0] * d[1] + d[1] * d[2] + d[0] * d[2])
            }
            Geometry::Ball { radius, .. } => 4.0 * PI * radius * radius,
            Geometry::Shell {
                inner_radius,
                outer_radius,
                ..
            } => 4.0 * PI * (inner_radius.powi(2) + outer_radius.powi(2)),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Geometry::Box { lo, hi } => (Vector3(*hi) - Vector3(*lo)).norm(),
            Geometry::Ball { radius, .. } => 2.0 * radius,
            Geometry::Shell { outer_radius, .. } => 2.0 * outer_radius,
        }
    }

    pub fn contains(&self, x: Vector3) -> bool {
        match self {
            Geometry::Box { lo, hi } => (0..3).all(|k| lo[k] <= x[k] && x[k] <= hi[k]),
            Geometry::Ball { center, radius } => (x - Vector3(*center)).norm() <= *radius,
            Geometry::Shell {
                center,
                inner_radius,
                outer_radius,
            } => {
                let r = (x - Vector3(*center)).norm();
                *inner_radius <= r && r <= *outer_radius
            }
        }
    }

    /// Uniform random point, kept a fraction `margin` of the size away from
    /// the boundary.
    pub fn sample_interior<R: Rng>(&self, rng: &mut R, margin: f64) -> Vector3 {
        match self {
            Geometry::Box { lo, hi } => {
                let mut x = Vector3::ZERO;
                for k in 0..3 {
                    let pad = margin * (hi[k] - lo[k]);
                    x[k] = rng.gen_range(lo[k] + pad..hi[k] - pad);
                }
                x
            }
            Geometry::Ball { center, radius } => {
                ball_sample(rng, Vector3(*center), 0.0, radius * (1.0 - margin))
            }
            Geometry::Shell {
                center,
                inner_radius,
                outer_radius,
            } => {
                let pad = margin * (outer_radius - inner_radius);
                ball_sample(rng, Vector3(*center), inner_radius + pad, outer_radius - pad)
            }
        }
    }
}

fn ball_sample<R: Rng>(rng: &mut R, c: Vector3, r0: f64, r1: f64) -> Vector3 {
    loop {
        let d = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = d.norm();
        if n > 1e-3 && n <= 1.0 {
            let u: f64 = rng.gen();
            let r = (r0.powi(3) + u * (r1.powi(3) - r0.powi(3))).cbrt();
            return c + d * (r / n);
        }
    }
}

fn sphere_nodes(c: Vector3, radius: f64, angular: &[(Vector3, f64)], sign: f64) -> Vec<SurfaceNode> {
    angular
        .iter()
        .map(|(u, w)| SurfaceNode {
            x: c + *u * radius,
            normal: *u * sign,
            weight: w * radius * radius,
        })
        .collect()
}

fn radial_nodes(c: Vector3, r0: f64, r1: f64, order: usize, angular: &[(Vector3, f64)]) -> Vec<VolumeNode> {
    let mut out = Vec::with_capacity(order * angular.len());
    for (r, wr) in gauss_legendre_on(order, r0, r1) {
        for (u, wa) in angular {
            out.push(VolumeNode {
                x: c + *u * r,
                weight: wr * r * r * wa,
            });
        }
    }
    out
}

impl BodyPart {
    pub fn new(geometry: Geometry, quadrature: QuadratureSpec) -> Result<Self> {
        geometry.validate()?;
        check_order(quadrature.order)?;
        quadrature.angular.validate()?;
        let n = quadrature.order;
        let (volume, surface) = match &geometry {
            Geometry::Box { lo, hi } => {
                let axes: Vec<Vec<(f64, f64)>> = (0..3).map(|k| gauss_legendre_on(n, lo[k], hi[k])).collect();
                let mut volume = Vec::with_capacity(n * n * n);
                for &(x0, w0) in &axes[0] {
                    for &(x1, w1) in &axes[1] {
                        for &(x2, w2) in &axes[2] {
                            volume.push(VolumeNode {
                                x: Vector3::new(x0, x1, x2),
                                weight: w0 * w1 * w2,
                            });
                        }
                    }
                }
                let mut surface = Vec::with_capacity(6 * n * n);
                for k in 0..3 {
                    let (a, b) = ((k + 1) % 3, (k + 2) % 3);
                    for (side, sign) in [(lo[k], -1.0), (hi[k], 1.0)] {
                        for &(xa, wa) in &axes[a] {
                            for &(xb, wb) in &axes[b] {
                                let mut x = Vector3::ZERO;
                                x[k] = side;
                                x[a] = xa;
                                x[b] = xb;
                                surface.push(SurfaceNode {
                                    x,
                                    normal: Vector3::unit(k) * sign,
                                    weight: wa * wb,
                                });
                            }
                        }
                    }
                }
                (volume, surface)
            }
            Geometry::Ball { center, radius } => {
                let ang = quadrature.angular.nodes();
                let c = Vector3(*center);
                (
                    radial_nodes(c, 0.0, *radius, n, &ang),
                    sphere_nodes(c, *radius, &ang, 1.0),
                )
            }
            Geometry::Shell {
                center,
                inner_radius,
                outer_radius,
            } => {
                let ang = quadrature.angular.nodes();
                let c = Vector3(*center);
                let mut surface = sphere_nodes(c, *outer_radius, &ang, 1.0);
                surface.extend(sphere_nodes(c, *inner_radius, &ang, -1.0));
                (radial_nodes(c, *inner_radius, *outer_radius, n, &ang), surface)
            }
        };
        Ok(BodyPart {
            geometry,
            quadrature,
            volume,
            surface,
        })
    }

    pub fn with_default_rule(geometry: Geometry) -> Result<Self> {
        BodyPart::new(geometry, QuadratureSpec::default())
    }

    pub fn with_order(&self, order: usize) -> Result<Self> {
        let mut q = self.quadrature;
        q.order = order;
        if let AngularRule::Product { .. } = q.angular {
            q.angular = AngularRule::Product {
                polar: order,
                azimuthal: 2 * order,
            };
        }
        BodyPart::new(self.geometry.clone(), q)
    }

    pub fn volume_nodes(&self) -> &[VolumeNode] {
        &self.volume
    }

    pub fn surface_nodes(&self) -> &[SurfaceNode] {
        &self.surface
    }

    pub fn center(&self) -> Vector3 {
        self.geometry.center()
    }

    pub fn volume(&self) -> f64 {
        self.geometry.volume()
    }

    pub fn area(&self) -> f64 {
        self.geometry.area()
    }

    /// `∫_𝔟 g dx`.
    pub fn volume_integral<T, G>(&self, g: G) -> Result<T>
    where
        T: Quantity,
        G: Fn(Vector3) -> Result<T> + Sync,
    {
        let vals = self
            .volume
            .par_iter()
            .map(|n| Ok(g(n.x)?.scale(n.weight)))
            .collect::<Result<Vec<T>>>()?;
        Ok(ordered_sum(vals))
    }

    /// `∫_∂𝔟 g(x, n) dH²`.
    pub fn surface_integral<T, G>(&self, g: G) -> Result<T>
    where
        T: Quantity,
        G: Fn(Vector3, Vector3) -> Result<T> + Sync,
    {
        let vals = self
            .surface
            .par_iter()
            .map(|n| Ok(g(n.x, n.normal)?.scale(n.weight)))
            .collect::<Result<Vec<T>>>()?;
        Ok(ordered_sum(vals))
    }

    /// Smaller parts inside this one, with the same rule.
    pub fn subparts(&self) -> Result<Vec<BodyPart>> {
        let mut out = Vec::new();
        match &self.geometry {
            Geometry::Box { lo, hi } => {
                for k in 0..3 {
                    let mid = 0.5 * (lo[k] + hi[k]);
                    let (mut a_hi, mut b_lo) = (*hi, *lo);
                    a_hi[k] = mid;
                    b_lo[k] = mid;
                    out.push(Geometry::Box { lo: *lo, hi: a_hi });
                    out.push(Geometry::Box { lo: b_lo, hi: *hi });
                }
            }
            Geometry::Ball { center, radius } | Geometry::Shell {
                center,
                outer_radius: radius,
                ..
            } => {
                let c = Vector3(*center);
                for k in 0..3 {
                    for s in [-1.0, 1.0] {
                        let cc = c + Vector3::unit(k) * (s * 0.4 * radius);
                        out.push(Geometry::Ball {
                            center: cc.0,
                            radius: 0.5 * radius,
                        });
                    }
                }
            }
        }
        out.into_iter().map(|g| BodyPart::new(g, self.quadrature)).collect()
    }

    /// The two halves of a box cut at its midplane normal to `axis`.
    pub fn split_box(&self, axis: usize) -> Result<(BodyPart, BodyPart)> {
        match &self.geometry {
            Geometry::Box { lo, hi } if axis < 3 => {
                let mid = 0.5 * (lo[axis] + hi[axis]);
                let (mut a_hi, mut b_lo) = (*hi, *lo);
                a_hi[axis] = mid;
                b_lo[axis] = mid;
                Ok((
                    BodyPart::new(Geometry::Box { lo: *lo, hi: a_hi }, self.quadrature)?,
                    BodyPart::new(Geometry::Box { lo: b_lo, hi: *hi }, self.quadrature)?,
                ))
            }
            _ => Err(Error::PreconditionViolated(
                "split_box needs a box and an axis below 3".into(),
            )),
        }
    }
}
