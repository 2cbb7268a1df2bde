//! Central finite differences over points and tensors.

use crate::error::Result;
use crate::tensor::{Tensor33, Vector3};

/// `G_ij = ∂f_i/∂x_j` by central differences.
pub fn vector_gradient<F>(f: F, x: Vector3, h: f64) -> Result<Tensor33>
where
    F: Fn(Vector3) -> Result<Vector3>,
{
    let mut cols = [Vector3::ZERO; 3];
    for (j, col) in cols.iter_mut().enumerate() {
        let step = Vector3::unit(j) * h;
        *col = (f(x + step)? - f(x - step)?) * (0.5 / h);
    }
    Ok(Tensor33::from_columns(cols))
}

pub fn scalar_gradient<F>(f: F, x: Vector3, h: f64) -> Result<Vector3>
where
    F: Fn(Vector3) -> Result<f64>,
{
    let mut g = Vector3::ZERO;
    for j in 0..3 {
        let step = Vector3::unit(j) * h;
        g[j] = (f(x + step)? - f(x - step)?) * (0.5 / h);
    }
    Ok(g)
}

/// Componentwise derivative of a scalar function of a tensor.
pub fn tensor_derivative<F>(f: F, t: Tensor33, h: f64) -> Result<Tensor33>
where
    F: Fn(Tensor33) -> Result<f64>,
{
    let mut d = Tensor33::ZERO;
    for i in 0..3 {
        for j in 0..3 {
            let mut tp = t;
            let mut tm = t;
            tp[(i, j)] += h;
            tm[(i, j)] -= h;
            d[(i, j)] = (f(tp)? - f(tm)?) * (0.5 / h);
        }
    }
    Ok(d)
}

/// Divergence on the second index: `(Div T)_i = Σ_j ∂T_ij/∂x_j`.
pub fn tensor_divergence<F>(f: F, x: Vector3, h: f64) -> Result<Vector3>
where
    F: Fn(Vector3) -> Result<Tensor33>,
{
    let mut div = Vector3::ZERO;
    for j in 0..3 {
        let step = Vector3::unit(j) * h;
        let d = (f(x + step)? - f(x - step)?) * (0.5 / h);
        div += d.column(j);
    }
    Ok(div)
}

pub fn vector_divergence<F>(f: F, x: Vector3, h: f64) -> Result<f64>
where
    F: Fn(Vector3) -> Result<Vector3>,
{
    let mut div = 0.0;
    for j in 0..3 {
        let step = Vector3::unit(j) * h;
        div += (f(x + step)?[j] - f(x - step)?[j]) * (0.5 / h);
    }
    Ok(div)
}

/// Partial derivatives `∂T/∂x_k` of a tensor field, k = 0..3.
pub fn tensor_partials<F>(f: F, x: Vector3, h: f64) -> Result<[Tensor33; 3]>
where
    F: Fn(Vector3) -> Result<Tensor33>,
{
    let mut out = [Tensor33::ZERO; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let step = Vector3::unit(k) * h;
        *o = (f(x + step)? - f(x - step)?) * (0.5 / h);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_of_quadratic_is_exact_up_to_rounding() {
        let f = |x: Vector3| Ok(Vector3::new(x[0] * x[1], x[2] * x[2], 3.0 * x[0]));
        let g = vector_gradient(f, Vector3::new(0.5, -1.0, 2.0), 1e-4).unwrap();
        let exact = Tensor33([[-1.0, 0.5, 0.0], [0.0, 0.0, 4.0], [3.0, 0.0, 0.0]]);
        assert!((g - exact).max_abs() < 1e-9);
    }

    #[test]
    fn divergence_uses_second_index() {
        // T = x ⊗ e_0 has Div T = ∂_0 x = e_0.
        let f = |x: Vector3| Ok(x.outer(&Vector3::unit(0)));
        let d = tensor_divergence(f, Vector3::new(0.3, 0.2, 0.1), 1e-4).unwrap();
        assert!((d - Vector3::unit(0)).norm() < 1e-10);
    }
}
