//! Deformed products `A·_K B = AKB` and the two equivalent Heisenberg
//! evolutions `iȦ = [A, H]` and `iȦ = [A, H_K]_K` for `[H, K] = 0`.
//!
//! Brackets here are plain commutators, `[A, B] = AB − BA` and
//! `[A, B]_K = A·_K B − B·_K A`, with `ħ = 1`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{operator_norm, ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::sampling;

/// Eigenvalues of `K` must be at least this fraction of the largest.
pub const INVERTIBILITY_GATE: f64 = 1e-10;
/// Bound on `‖K·K⁻¹ − I‖`.
pub const INVERSE_TOLERANCE: f64 = 1e-10;
/// `‖[H, K]‖ ≤ COMMUTATION_GATE·‖H‖‖K‖` is required for `H_K`.
pub const COMMUTATION_GATE: f64 = 1e-10;
/// Default RK4 steps per unit time.
pub const DEFAULT_STEPS_PER_UNIT: usize = 400;

/// `B(ℂⁿ)` with the product `A·_K B = AKB`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformedAlgebra {
    k: HermitianMatrix,
    k_inv: CMat,
}

impl DeformedAlgebra {
    pub fn new(k: HermitianMatrix) -> Result<Self> {
        let (values, vectors) = k.eigen();
        let max = values.first().copied().unwrap_or(0.0);
        let min = values.last().copied().unwrap_or(0.0);
        if max <= 0.0 || min < INVERTIBILITY_GATE * max {
            return Err(Error::NotPositiveDefinite { min, max });
        }
        let inv_diag = CMat::from_diagonal(&CVec::from_iterator(
            values.len(),
            values.iter().map(|&l| Complex64::new(1.0 / l, 0.0)),
        ));
        let k_inv = &vectors * inv_diag * vectors.adjoint();
        let n = k.dim();
        let defect = linalg::max_abs_diff(&(k.as_complex().as_matrix() * &k_inv), &CMat::identity(n, n));
        if defect > INVERSE_TOLERANCE {
            return Err(Error::InverseDefect { defect });
        }
        Ok(Self { k, k_inv })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(HermitianMatrix::new(ComplexMatrix::identity(n)).expect("identity is hermitian"))
            .expect("identity is positive")
    }

    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    pub fn k(&self) -> &HermitianMatrix {
        &self.k
    }

    /// `K⁻¹`, the unit of `·_K`.
    pub fn k_inv(&self) -> ComplexMatrix {
        ComplexMatrix::new(self.k_inv.clone()).expect("finite inverse")
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: n,
            });
        }
        Ok(())
    }
}

/// `Σ conj(z_k) K_kl w_l`.
pub fn deformed_inner(k: &DeformedAlgebra, z: &CVec, w: &CVec) -> Result<Complex64> {
    k.check(z.len())?;
    k.check(w.len())?;
    Ok(linalg::inner(z, &(k.k.as_complex().as_matrix() * w)))
}

/// `A·K·B`.
pub fn deformed_product(k: &DeformedAlgebra, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    k.check(a.dim())?;
    k.check(b.dim())?;
    ComplexMatrix::new(a.as_matrix() * k.k.as_complex().as_matrix() * b.as_matrix())
}

/// `[A, B]_K = AKB − BKA`.
pub fn deformed_commutator(k: &DeformedAlgebra, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    deformed_product(k, a, b)?.sub(&deformed_product(k, b, a)?)
}

/// `AB − BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// `H_K = K⁻¹H`, provided `[H, K]` vanishes.
pub fn deformed_hamiltonian(k: &DeformedAlgebra, h: &HermitianMatrix) -> Result<ComplexMatrix> {
    k.check(h.dim())?;
    let comm = commutator(h.as_complex(), k.k.as_complex())?;
    let defect = operator_norm(&comm);
    let tolerance = COMMUTATION_GATE * operator_norm(h.as_complex()) * operator_norm(k.k.as_complex());
    if defect > tolerance {
        return Err(Error::NonCommuting { defect, tolerance });
    }
    ComplexMatrix::new(&k.k_inv * h.as_complex().as_matrix())
}

/// `‖[A, H] − [A, H_K]_K‖_max` for one `A`.
pub fn bracket_identity_defect(
    k: &DeformedAlgebra,
    h: &HermitianMatrix,
    hk: &ComplexMatrix,
    a: &ComplexMatrix,
) -> Result<f64> {
    commutator(a, h.as_complex())?.defect(&deformed_commutator(k, a, hk)?)
}

/// `‖(A·_K B)† − B†·_K A†‖_max`: the adjoint as a candidate involution.
pub fn involution_defect(k: &DeformedAlgebra, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let lhs = deformed_product(k, a, b)?.adjoint();
    let rhs = deformed_product(k, &b.adjoint(), &a.adjoint())?;
    lhs.defect(&rhs)
}

/// `‖K H_K − (K H_K)†‖_max`, zero when `H_K` is self-adjoint for `·_K`.
pub fn deformed_hermiticity_defect(k: &DeformedAlgebra, hk: &ComplexMatrix) -> f64 {
    let m = k.k.as_complex().as_matrix() * hk.as_matrix();
    linalg::max_abs_diff(&m, &m.adjoint())
}

/// Both trajectories of one evolution on a uniform grid.
#[derive(Debug, Clone)]
pub struct EvolutionRun {
    pub h: HermitianMatrix,
    pub a0: ComplexMatrix,
    pub t_grid: Vec<f64>,
    /// `e^{iH(t−t0)} A0 e^{−iH(t−t0)}`.
    pub trajectory_std: Vec<ComplexMatrix>,
    /// RK4 solution of `iȦ = [A, H_K]_K`.
    pub trajectory_def: Vec<ComplexMatrix>,
    /// `‖std(t) − def(t)‖_max` per grid point.
    pub divergence: Vec<f64>,
    /// Gap between the final RK4 state and the one from half-sized steps.
    pub richardson_estimate: f64,
    pub deformed_hermiticity_defect: f64,
}

impl EvolutionRun {
    pub fn max_divergence(&self) -> f64 {
        self.divergence.iter().copied().fold(0.0, f64::max)
    }
}

fn rhs(k: &DeformedAlgebra, hk: &CMat, a: &CMat) -> CMat {
    let km = k.k.as_complex().as_matrix();
    let bracket = a * km * hk - hk * km * a;
    // iȦ = [A, H_K]_K
    bracket.map(|z| z * -linalg::I)
}

fn rk4_step(k: &DeformedAlgebra, hk: &CMat, a: &CMat, dt: f64) -> CMat {
    let k1 = rhs(k, hk, a);
    let k2 = rhs(k, hk, &(a + &k1 * Complex64::new(dt / 2.0, 0.0)));
    let k3 = rhs(k, hk, &(a + &k2 * Complex64::new(dt / 2.0, 0.0)));
    let k4 = rhs(k, hk, &(a + &k3 * Complex64::new(dt, 0.0)));
    a + (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4)
        * Complex64::new(dt / 6.0, 0.0)
}

/// Evolves `A0` over `steps` equal RK4 steps on `[t0, t1]` and compares with
/// the closed form.
pub fn evolve_pair(
    k: &DeformedAlgebra,
    h: &HermitianMatrix,
    a0: &ComplexMatrix,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<EvolutionRun> {
    k.check(a0.dim())?;
    let hk = deformed_hamiltonian(k, h)?;
    if !t0.is_finite() || !t1.is_finite() {
        return Err(Error::Invalid("non-finite time bounds".into()));
    }
    let span = t1 - t0;
    let dt = if steps == 0 { 0.0 } else { span / steps as f64 };
    let floor = f64::EPSILON * 16.0 * t0.abs().max(t1.abs()).max(1.0);
    if steps == 0 || (span != 0.0 && dt.abs() < floor) {
        return Err(Error::StepUnderflow { step: dt });
    }
    let t_grid: Vec<f64> = (0..=steps).map(|i| t0 + span * i as f64 / steps as f64).collect();
    let hm = h.as_complex().as_matrix();
    let closed = |t: f64| -> Result<ComplexMatrix> {
        if t == t0 {
            return Ok(a0.clone());
        }
        let u = linalg::unitary_exp(hm, t - t0);
        ComplexMatrix::new(&u * a0.as_matrix() * u.adjoint())
    };
    let mut trajectory_std = Vec::with_capacity(steps + 1);
    let mut trajectory_def = Vec::with_capacity(steps + 1);
    let mut divergence = Vec::with_capacity(steps + 1);
    let mut state = a0.as_matrix().clone();
    for (i, &t) in t_grid.iter().enumerate() {
        if i > 0 {
            state = rk4_step(k, hk.as_matrix(), &state, dt);
        }
        let std_t = closed(t)?;
        let def_t = ComplexMatrix::new(state.clone())?;
        divergence.push(std_t.defect(&def_t)?);
        trajectory_std.push(std_t);
        trajectory_def.push(def_t);
    }
    // rerun with half steps for an error estimate at t1
    let mut fine = a0.as_matrix().clone();
    for _ in 0..2 * steps {
        fine = rk4_step(k, hk.as_matrix(), &fine, dt / 2.0);
    }
    let richardson_estimate = linalg::max_abs_diff(&fine, &state) * 16.0 / 15.0;
    Ok(EvolutionRun {
        h: h.clone(),
        a0: a0.clone(),
        t_grid,
        trajectory_std,
        trajectory_def,
        divergence,
        richardson_estimate,
        deformed_hermiticity_defect: deformed_hermiticity_defect(k, &hk),
    })
}

fn conjugate_diagonal(u: &CMat, d: &[f64]) -> HermitianMatrix {
    let diag = DMatrix::from_diagonal(&CVec::from_iterator(
        d.len(),
        d.iter().map(|&x| Complex64::new(x, 0.0)),
    ));
    let m = u * diag * u.adjoint();
    HermitianMatrix::hermitian_part(&ComplexMatrix::new(m).expect("finite"))
}

/// Seeded `(H, K) = (U diag(h) U†, U diag(k) U†)` with `h ∈ [−1, 1]` and
/// `k ∈ [0.5, 2]`.
pub fn commuting_pair_generator(n: usize, seed: u64) -> Result<(HermitianMatrix, DeformedAlgebra)> {
    pair_with_spectrum(n, seed, false)
}

/// Like [`commuting_pair_generator`] but with `h_0 = h_1`.
pub fn degenerate_commuting_pair(n: usize, seed: u64) -> Result<(HermitianMatrix, DeformedAlgebra)> {
    pair_with_spectrum(n, seed, true)
}

fn pair_with_spectrum(n: usize, seed: u64, degenerate: bool) -> Result<(HermitianMatrix, DeformedAlgebra)> {
    if n < 2 {
        return Err(Error::Invalid("commuting pairs need n ≥ 2".into()));
    }
    let mut rng = sampling::rng(seed);
    let u = sampling::unitary(&mut rng, n);
    let mut h: Vec<f64> = (0..n).map(|_| sampling::uniform(&mut rng, -1.0, 1.0)).collect();
    if degenerate {
        h[1] = h[0];
    }
    let k: Vec<f64> = (0..n).map(|_| sampling::uniform(&mut rng, 0.5, 2.0)).collect();
    Ok((conjugate_diagonal(&u, &h), DeformedAlgebra::new(conjugate_diagonal(&u, &k))?))
}

/// Seeded `H` and `K` with independent eigenbases; generically `[H, K] ≠ 0`.
pub fn non_commuting_pair(n: usize, seed: u64) -> Result<(HermitianMatrix, DeformedAlgebra)> {
    let mut rng = sampling::rng(seed);
    let h = sampling::hermitian(&mut rng, n);
    let u = sampling::unitary(&mut rng, n);
    let k: Vec<f64> = (0..n).map(|_| sampling::uniform(&mut rng, 0.5, 2.0)).collect();
    Ok((h, DeformedAlgebra::new(conjugate_diagonal(&u, &k))?))
}
