//! Dense helpers shared by the algebraic modules.
//!
//! Everything here works on raw `nalgebra` matrices; the public domain types
//! wrap these and enforce their own invariants.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Largest entry modulus.
pub fn max_norm(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Max-norm difference scaled by `max(1, ‖a‖, ‖b‖)`.
pub fn relative_defect(a: &CMat, b: &CMat) -> f64 {
    let scale = 1.0_f64.max(max_norm(a)).max(max_norm(b));
    max_abs_diff(a, b) / scale
}

pub fn trace(m: &CMat) -> Complex64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

/// `Tr(a·b)` without forming the product.
pub fn trace_of_product(a: &CMat, b: &CMat) -> Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
///
/// The input is symmetrized first so that tiny anti-Hermitian noise cannot
/// leak into the solver.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Multiplies the column by a unit phase so that its first component with
/// modulus above `tol` becomes real and positive.
pub fn fix_phase(v: &mut CVec, tol: f64) {
    if let Some(z) = v.iter().find(|z| z.norm() > tol).copied() {
        let phase = z.conj() / z.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
}

/// Singular values, descending.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn spectral_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Number of columns minus the numerical rank, with singular values below
/// `rel * σ_max` treated as zero. Rows must be at least the column count.
pub fn null_space_dim(m: &CMat, rel: f64) -> usize {
    let cols = m.ncols();
    if cols == 0 {
        return 0;
    }
    let s = singular_values(m);
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return cols;
    }
    let rank = s.iter().filter(|&&x| x > rel * smax).count();
    cols - rank
}

/// Numerical rank of a real matrix given as rows.
pub fn real_rank(rows: &[Vec<f64>], rel: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let s = m.singular_values();
    let smax = s.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel * smax).count()
}

/// `exp(i·t·H)` for Hermitian `H`.
pub fn unitary_exp(h: &CMat, t: f64) -> CMat {
    let (values, vectors) = hermitian_eigen(h);
    let phases = CMat::from_diagonal(&CVec::from_iterator(
        values.len(),
        values.iter().map(|&l| Complex64::from_polar(1.0, l * t)),
    ));
    &vectors * phases * vectors.adjoint()
}

/// Inner product `⟨a|b⟩ = Σ conj(a_k) b_k`.
pub fn inner(a: &CVec, b: &CVec) -> Complex64 {
    a.dotc(b)
}
