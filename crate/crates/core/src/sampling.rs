//! Seeded random generators for matrices, states, and rays.
//!
//! All randomness in the crate flows through [`Rng`], a ChaCha stream, so a
//! seed fixes every sample bit-for-bit.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{ComplexMatrix, HermitianMatrix};
use crate::linalg::{self, CMat, CVec};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn uniform(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

pub fn complex_gaussian(rng: &mut Rng) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

pub fn complex_vector(rng: &mut Rng, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| complex_gaussian(rng))
}

/// Complex Gaussian vector normalized to unit length: the unitarily
/// invariant measure on rays.
pub fn random_ray(rng: &mut Rng, n: usize) -> CVec {
    let v = complex_vector(rng, n);
    let norm = v.norm();
    v.unscale(norm)
}

pub fn complex_matrix(rng: &mut Rng, n: usize) -> ComplexMatrix {
    let m = CMat::from_fn(n, n, |_, _| complex_gaussian(rng));
    ComplexMatrix::new(m).expect("gaussian entries are finite")
}

pub fn hermitian(rng: &mut Rng, n: usize) -> HermitianMatrix {
    HermitianMatrix::hermitian_part(&complex_matrix(rng, n))
}

pub fn traceless_hermitian(rng: &mut Rng, n: usize) -> HermitianMatrix {
    let h = hermitian(rng, n);
    let shift = h.as_complex().trace().re / n as f64;
    let m = h.as_complex().as_matrix() - CMat::identity(n, n).scale(shift);
    HermitianMatrix::hermitian_part(&ComplexMatrix::new(m).expect("finite"))
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix,
/// with the diagonal of `R` phase-fixed.
pub fn unitary(rng: &mut Rng, n: usize) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let phases = CVec::from_fn(n, |i, _| {
        let d = r[(i, i)];
        if d.norm() > 0.0 {
            d / d.norm()
        } else {
            linalg::ONE
        }
    });
    &q * DMatrix::from_diagonal(&phases)
}

/// Random probability vector with `m` strictly positive entries.
pub fn probability_vector(rng: &mut Rng, m: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| uniform(rng, 0.1, 1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// `U diag(p) U†` with `p` a random probability vector padded with zeros.
pub fn state_matrix_of_rank(rng: &mut Rng, n: usize, rank: usize) -> ComplexMatrix {
    assert!(rank >= 1 && rank <= n, "rank must lie in 1..=n");
    let mut p = probability_vector(rng, rank);
    p.resize(n, 0.0);
    let u = unitary(rng, n);
    let d = DMatrix::from_diagonal(&CVec::from_iterator(
        n,
        p.iter().map(|&x| Complex64::new(x, 0.0)),
    ));
    let m = &u * d * u.adjoint();
    ComplexMatrix::new((&m + m.adjoint()).scale(0.5)).expect("finite")
}
