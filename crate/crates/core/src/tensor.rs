//! Fixed-size 3-vector and 3×3 tensor algebra.
//!
//! Tensors are stored row-major; `t[i][j]` is the component acting as
//! `(T u)_i = Σ_j T_ij u_j`. One-point and two-point tensors share the same
//! storage type.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Relative antisymmetry tolerance used by [`Tensor33::axial_vector`].
pub const ANTISYMMETRY_TOL: f64 = 1e-12;

/// Inversion refuses tensors with `|det| < SINGULARITY_TOL · ‖A‖³`.
pub const SINGULARITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vector3(pub [f64; 3]);

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tensor33(pub [[f64; 3]; 3]);

impl Vector3 {
    pub const ZERO: Vector3 = Vector3([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vector3([x, y, z])
    }

    /// Unit basis vector `e_i` (zero-based).
    pub fn unit(i: usize) -> Self {
        let mut v = [0.0; 3];
        v[i] = 1.0;
        Vector3(v)
    }

    pub fn dot(&self, o: &Vector3) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn cross(&self, o: &Vector3) -> Vector3 {
        let [a, b, c] = self.0;
        let [x, y, z] = o.0;
        Vector3([b * z - c * y, c * x - a * z, a * y - b * x])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Dyadic product `a ⊗ b` with components `a_i b_j`.
    pub fn outer(&self, o: &Vector3) -> Tensor33 {
        let mut t = [[0.0; 3]; 3];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                *c = self.0[i] * o.0[j];
            }
        }
        Tensor33(t)
    }

    /// The antisymmetric tensor `a×` with `(a×) u = a × u`.
    pub fn cross_matrix(&self) -> Tensor33 {
        let [a, b, c] = self.0;
        Tensor33([[0.0, -c, b], [c, 0.0, -a], [-b, a, 0.0]])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl From<[f64; 3]> for Vector3 {
    fn from(v: [f64; 3]) -> Self {
        Vector3(v)
    }
}

impl Index<usize> for Vector3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vector3 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Vector3 {
    type Output = Vector3;
    fn add(self, o: Vector3) -> Vector3 {
        Vector3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for Vector3 {
    fn add_assign(&mut self, o: Vector3) {
        *self = *self + o;
    }
}

impl Sub for Vector3 {
    type Output = Vector3;
    fn sub(self, o: Vector3) -> Vector3 {
        Vector3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl SubAssign for Vector3 {
    fn sub_assign(&mut self, o: Vector3) {
        *self = *self - o;
    }
}

impl Neg for Vector3 {
    type Output = Vector3;
    fn neg(self) -> Vector3 {
        Vector3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for Vector3 {
    type Output = Vector3;
    fn mul(self, s: f64) -> Vector3 {
        Vector3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Mul<Vector3> for f64 {
    type Output = Vector3;
    fn mul(self, v: Vector3) -> Vector3 {
        v * self
    }
}

impl std::iter::Sum for Vector3 {
    fn sum<I: Iterator<Item = Vector3>>(iter: I) -> Vector3 {
        iter.fold(Vector3::ZERO, |a, b| a + b)
    }
}

impl Tensor33 {
    pub const ZERO: Tensor33 = Tensor33([[0.0; 3]; 3]);
    pub const IDENTITY: Tensor33 = Tensor33([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn diag(d: [f64; 3]) -> Self {
        Tensor33([[d[0], 0.0, 0.0], [0.0, d[1], 0.0], [0.0, 0.0, d[2]]])
    }

    pub fn from_rows(rows: [[f64; 3]; 3]) -> Self {
        Tensor33(rows)
    }

    /// Tensor whose columns are the given vectors.
    pub fn from_columns(c: [Vector3; 3]) -> Self {
        let mut t = [[0.0; 3]; 3];
        for (j, col) in c.iter().enumerate() {
            for (i, row) in t.iter_mut().enumerate() {
                row[j] = col.0[i];
            }
        }
        Tensor33(t)
    }

    pub fn column(&self, j: usize) -> Vector3 {
        Vector3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn transpose(&self) -> Tensor33 {
        let a = &self.0;
        Tensor33([
            [a[0][0], a[1][0], a[2][0]],
            [a[0][1], a[1][1], a[2][1]],
            [a[0][2], a[1][2], a[2][2]],
        ])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> f64 {
        let a = &self.0;
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.double_contraction(self).sqrt()
    }

    /// Full contraction `Σ_ij A_ij B_ij`.
    pub fn double_contraction(&self, o: &Tensor33) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.0[i][j] * o.0[i][j];
            }
        }
        s
    }

    /// `(T − Tᵀ)/2`.
    pub fn skew_part(&self) -> Tensor33 {
        (*self - self.transpose()) * 0.5
    }

    /// `(T + Tᵀ)/2`.
    pub fn sym_part(&self) -> Tensor33 {
        (*self + self.transpose()) * 0.5
    }

    /// Inverse of [`Vector3::cross_matrix`]: returns `a` with `W = a×`.
    pub fn axial_vector(&self) -> Result<Vector3> {
        let defect = (*self + self.transpose()).norm();
        if defect > ANTISYMMETRY_TOL * self.norm() {
            return Err(Error::NotAntisymmetric { defect });
        }
        Ok(self.axial_unchecked())
    }

    /// Axial vector of the antisymmetric part; never fails.
    pub fn axial_of_skew(&self) -> Vector3 {
        self.skew_part().axial_unchecked()
    }

    fn axial_unchecked(&self) -> Vector3 {
        let a = &self.0;
        Vector3([
            0.5 * (a[2][1] - a[1][2]),
            0.5 * (a[0][2] - a[2][0]),
            0.5 * (a[1][0] - a[0][1]),
        ])
    }

    pub fn inverse(&self) -> Result<Tensor33> {
        let det = self.det();
        let threshold = SINGULARITY_TOL * self.norm().powi(3);
        if !(det.abs() >= threshold) || det == 0.0 {
            return Err(Error::SingularTensor { det, threshold });
        }
        let a = &self.0;
        let inv_det = 1.0 / det;
        let mut r = [[0.0; 3]; 3];
        r[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) * inv_det;
        r[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) * inv_det;
        r[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) * inv_det;
        r[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) * inv_det;
        r[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) * inv_det;
        r[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) * inv_det;
        r[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) * inv_det;
        r[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) * inv_det;
        r[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) * inv_det;
        Ok(Tensor33(r))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    /// Rotation about `axis` (normalized internally) by `angle` radians.
    pub fn rotation(axis: Vector3, angle: f64) -> Tensor33 {
        let n = axis.norm();
        if n == 0.0 {
            return Tensor33::IDENTITY;
        }
        let k = axis * (1.0 / n);
        let kx = k.cross_matrix();
        Tensor33::IDENTITY + kx * angle.sin() + (kx * kx) * (1.0 - angle.cos())
    }
}

impl Index<(usize, usize)> for Tensor33 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Tensor33 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Add for Tensor33 {
    type Output = Tensor33;
    fn add(self, o: Tensor33) -> Tensor33 {
        let mut r = self.0;
        for (ri, oi) in r.iter_mut().zip(o.0.iter()) {
            for (a, b) in ri.iter_mut().zip(oi.iter()) {
                *a += b;
            }
        }
        Tensor33(r)
    }
}

impl AddAssign for Tensor33 {
    fn add_assign(&mut self, o: Tensor33) {
        *self = *self + o;
    }
}

impl Sub for Tensor33 {
    type Output = Tensor33;
    fn sub(self, o: Tensor33) -> Tensor33 {
        self + (-o)
    }
}

impl Neg for Tensor33 {
    type Output = Tensor33;
    fn neg(self) -> Tensor33 {
        self * -1.0
    }
}

impl Mul<f64> for Tensor33 {
    type Output = Tensor33;
    fn mul(self, s: f64) -> Tensor33 {
        let mut r = self.0;
        r.iter_mut().flatten().for_each(|c| *c *= s);
        Tensor33(r)
    }
}

impl Mul<Tensor33> for f64 {
    type Output = Tensor33;
    fn mul(self, t: Tensor33) -> Tensor33 {
        t * self
    }
}

impl Mul for Tensor33 {
    type Output = Tensor33;
    fn mul(self, o: Tensor33) -> Tensor33 {
        let mut r = [[0.0; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                *c = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Tensor33(r)
    }
}

impl Mul<Vector3> for Tensor33 {
    type Output = Vector3;
    fn mul(self, v: Vector3) -> Vector3 {
        let mut r = [0.0; 3];
        for (i, c) in r.iter_mut().enumerate() {
            *c = (0..3).map(|k| self.0[i][k] * v.0[k]).sum();
        }
        Vector3(r)
    }
}

impl std::iter::Sum for Tensor33 {
    fn sum<I: Iterator<Item = Tensor33>>(iter: I) -> Tensor33 {
        iter.fold(Tensor33::ZERO, |a, b| a + b)
    }
}
