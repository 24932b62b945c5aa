//! Finite-difference calculus for vector fields and 2-tensors on `ℝᵈ`.

use nalgebra::{DMatrix, DVector};

/// Central-difference step.
pub const FD_STEP: f64 = 1e-5;
/// Coarser step used when the fine estimate looks unreliable.
pub const FD_FALLBACK_STEP: f64 = 1e-4;

fn shifted(x: &[f64], dir: &[f64], h: f64) -> Vec<f64> {
    x.iter().zip(dir).map(|(a, d)| a + h * d).collect()
}

fn central<F>(f: &F, x: &[f64], dir: &[f64], h: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> Vec<f64> + ?Sized,
{
    let plus = f(&shifted(x, dir, h));
    let minus = f(&shifted(x, dir, -h));
    plus.iter()
        .zip(&minus)
        .map(|(p, m)| (p - m) / (2.0 * h))
        .collect()
}

/// Derivative of the vector-valued `f` at `x` along `dir`.
///
/// Uses a central difference at [`FD_STEP`]; when that disagrees with the
/// [`FD_FALLBACK_STEP`] estimate by more than `1e-6` (relative), the
/// Richardson combination of the fallback step and its half is returned
/// instead.
pub fn directional_derivative<F>(f: &F, x: &[f64], dir: &[f64]) -> Vec<f64>
where
    F: Fn(&[f64]) -> Vec<f64> + ?Sized,
{
    let fine = central(f, x, dir, FD_STEP);
    let coarse = central(f, x, dir, FD_FALLBACK_STEP);
    let scale = fine.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
    let gap = fine
        .iter()
        .zip(&coarse)
        .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()));
    if gap <= 1e-6 * scale {
        return fine;
    }
    let half = central(f, x, dir, FD_FALLBACK_STEP / 2.0);
    half.iter()
        .zip(&coarse)
        .map(|(h, c)| (4.0 * h - c) / 3.0)
        .collect()
}

/// Jacobian `J[i][m] = ∂_m f^i`.
pub fn jacobian<F>(f: &F, x: &[f64]) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> Vec<f64> + ?Sized,
{
    let d = x.len();
    let out = f(x).len();
    let mut j = DMatrix::zeros(out, d);
    for m in 0..d {
        let mut e = vec![0.0; d];
        e[m] = 1.0;
        let col = directional_derivative(f, x, &e);
        for i in 0..out {
            j[(i, m)] = col[i];
        }
    }
    j
}

/// `[X, Y]^j = X^m ∂_m Y^j − Y^m ∂_m X^j`.
pub fn lie_bracket<X, Y>(x_field: &X, y_field: &Y, at: &[f64]) -> Vec<f64>
where
    X: Fn(&[f64]) -> Vec<f64> + ?Sized,
    Y: Fn(&[f64]) -> Vec<f64> + ?Sized,
{
    let xv = x_field(at);
    let yv = y_field(at);
    let dy_x = directional_derivative(y_field, at, &xv);
    let dx_y = directional_derivative(x_field, at, &yv);
    dy_x.iter().zip(&dx_y).map(|(a, b)| a - b).collect()
}

/// `(L_X T)^{ij} = X^m ∂_m T^{ij} − T^{mj} ∂_m X^i − T^{im} ∂_m X^j` for a
/// contravariant 2-tensor field `T`.
pub fn lie_derivative_bivector<X, T>(x_field: &X, tensor: &T, at: &[f64]) -> DMatrix<f64>
where
    X: Fn(&[f64]) -> Vec<f64> + ?Sized,
    T: Fn(&[f64]) -> DMatrix<f64> + ?Sized,
{
    let d = at.len();
    let xv = x_field(at);
    let flat = |p: &[f64]| -> Vec<f64> { tensor(p).iter().copied().collect() };
    let dt = directional_derivative(&flat, at, &xv);
    let along = DMatrix::from_column_slice(d, d, &dt);
    let jx = jacobian(x_field, at);
    let t = tensor(at);
    along - &jx * &t - &t * jx.transpose()
}

/// Fixed-step classical Runge–Kutta integration of `ẋ = f(x)`.
pub fn rk4<F>(f: &F, x0: &[f64], dt: f64, steps: usize) -> Vec<f64>
where
    F: Fn(&[f64]) -> Vec<f64> + ?Sized,
{
    let mut x = DVector::from_column_slice(x0);
    let eval = |v: &DVector<f64>| DVector::from_vec(f(v.as_slice()));
    for _ in 0..steps {
        let k1 = eval(&x);
        let k2 = eval(&(&x + &k1 * (dt / 2.0)));
        let k3 = eval(&(&x + &k2 * (dt / 2.0)));
        let k4 = eval(&(&x + &k3 * dt));
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    }
    x.as_slice().to_vec()
}
