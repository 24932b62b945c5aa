//! Kähler geometry of `ℂ^{n+1}` and of its ray space `CP^n`.
//!
//! Ambient real coordinates are `z^j = q^j + i p^j`. Gradients of functions
//! are stored as `2(n+1)` components, the `q` block first. The contravariant
//! tensors are normalized as
//!
//! ```text
//! G = ½(∂q⊗∂q + ∂p⊗∂p),   Λ = ½(∂q⊗∂p − ∂p⊗∂q),
//! G̃ = e^σ G − ½(Δ⊗Δ + Γ⊗Γ),   Λ̃ = e^σ Λ − ½(Δ⊗Γ − Γ⊗Δ),
//! ```
//!
//! which is the normalization under which `f ⋆ g = f·g + ½(G̃ + iΛ̃)(df, dg)`
//! reproduces `f_A ⋆ f_B = f_{AB}`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, Matrix3, Vector3};
use num_bigint::BigUint;
use num_complex::Complex64;

use crate::algebra::{pauli, ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::sampling::{self, Rng};

/// Step of the chart finite differences used by the Laplacian.
pub const LAPLACIAN_STEP: f64 = 1e-3;
/// Relative gate for the harmonic and first-eigenspace verdicts.
pub const CLASSIFY_TOLERANCE: f64 = 1e-3;
/// Relative level above which a defect counts as a clear violation.
pub const REJECT_TOLERANCE: f64 = 1e-2;
/// Minimum number of sample points for [`kahler_test`].
pub const MIN_SAMPLES: usize = 100;

/// Liouville and phase fields at `ψ`: `(ψ, iψ)`.
pub fn ambient_fields(psi: &CVec) -> (CVec, CVec) {
    (psi.clone(), psi.map(|z| z * linalg::I))
}

/// The complex structure acting on an ambient tangent vector.
pub fn complex_structure(x: &CVec) -> CVec {
    x.map(|z| z * linalg::I)
}

/// `𝒦(X, Y) = ⟨X|Y⟩`.
pub fn hermitian_tensor(x: &CVec, y: &CVec) -> Complex64 {
    linalg::inner(x, y)
}

/// `g = Re 𝒦`.
pub fn riemannian_metric(x: &CVec, y: &CVec) -> f64 {
    hermitian_tensor(x, y).re
}

/// `ω = Im 𝒦`.
pub fn symplectic_form(x: &CVec, y: &CVec) -> f64 {
    hermitian_tensor(x, y).im
}

/// A ray `[ψ]` with a unit representative and an affine chart.
#[derive(Debug, Clone, PartialEq)]
pub struct RayPoint {
    representative: CVec,
    chart_index: usize,
    chart_coords: CVec,
}

impl RayPoint {
    /// Normalizes `ψ` and pivots on its largest-modulus entry.
    pub fn new(psi: &CVec) -> Result<Self> {
        let pivot = psi
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, z)| {
                if z.norm() > best.1 {
                    (i, z.norm())
                } else {
                    best
                }
            })
            .0;
        Self::with_chart(psi, pivot)
    }

    /// Uses chart `index`; fails when `|z_index| < 1/√(n+1)` after
    /// normalization.
    pub fn with_chart(psi: &CVec, index: usize) -> Result<Self> {
        let m = psi.len();
        if m < 2 {
            return Err(Error::Invalid("ray space needs at least two components".into()));
        }
        if index >= m {
            return Err(Error::IndexOutOfRange { index, dim: m });
        }
        if let Some(i) = psi.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let modulus = psi[index].norm() / norm;
        if modulus < 1.0 / (m as f64).sqrt() * (1.0 - 1e-12) {
            return Err(Error::ChartUndefined { index, modulus });
        }
        let phase = psi[index].conj() / psi[index].norm();
        let representative = psi.map(|z| z * phase / norm);
        let pivot = representative[index];
        let chart_coords = CVec::from_iterator(
            m - 1,
            (0..m).filter(|&k| k != index).map(|k| representative[k] / pivot),
        );
        Ok(Self {
            representative,
            chart_index: index,
            chart_coords,
        })
    }

    /// The ray with coordinates `w` in chart `index`.
    pub fn from_chart(index: usize, w: &CVec) -> Result<Self> {
        Self::with_chart(&lift(index, w), index)
    }

    /// Moves to the largest-modulus chart.
    pub fn repivot(&self) -> Self {
        Self::new(&self.representative).expect("unit representative")
    }

    pub fn representative(&self) -> &CVec {
        &self.representative
    }

    pub fn chart_index(&self) -> usize {
        self.chart_index
    }

    pub fn chart_coords(&self) -> &CVec {
        &self.chart_coords
    }

    /// `n`, the complex dimension of the ray space.
    pub fn n(&self) -> usize {
        self.chart_coords.len()
    }
}

/// `(w_1, …, 1, …, w_n)` with the `1` at `index`.
pub fn lift(index: usize, w: &CVec) -> CVec {
    let m = w.len() + 1;
    CVec::from_fn(m, |k, _| match k.cmp(&index) {
        std::cmp::Ordering::Less => w[k],
        std::cmp::Ordering::Equal => linalg::ONE,
        std::cmp::Ordering::Greater => w[k - 1],
    })
}

/// The Fubini–Study Hermitian form `h_{ij̄}` at chart coordinates `w`.
pub fn fubini_study_matrix(w: &CVec) -> CMat {
    let n = w.len();
    let s = 1.0 + w.norm_squared();
    CMat::from_fn(n, n, |i, j| {
        let delta = if i == j { s } else { 0.0 };
        (Complex64::new(delta, 0.0) - w[i].conj() * w[j]) / (s * s)
    })
}

/// `Σ_ij h_{ij̄} u_i conj(v_j)` at `p`.
pub fn fubini_study_tensor(p: &RayPoint, u: &CVec, v: &CVec) -> Result<Complex64> {
    let n = p.n();
    for len in [u.len(), v.len()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, found: len });
        }
    }
    let h = fubini_study_matrix(p.chart_coords());
    let mut acc = linalg::ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += h[(i, j)] * u[i] * v[j].conj();
        }
    }
    Ok(acc)
}

type SampledFn = Arc<dyn Fn(&CVec) -> Complex64 + Send + Sync>;

/// A function on rays.
#[derive(Clone)]
pub enum KahlerFunction {
    /// `f_M([ψ]) = ⟨ψ|Mψ⟩/⟨ψ|ψ⟩`.
    Expectation(ComplexMatrix),
    /// An arbitrary function of the representative; callers must make it
    /// invariant under `ψ → λψ`.
    Sampled(SampledFn),
}

impl fmt::Debug for KahlerFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Expectation(m) => f.debug_tuple("Expectation").field(m).finish(),
            Self::Sampled(_) => f.write_str("Sampled(..)"),
        }
    }
}

/// Step for finite-difference gradients of sampled functions, relative to
/// `‖ψ‖`.
const SAMPLED_GRADIENT_STEP: f64 = 1e-6;

impl KahlerFunction {
    pub fn expectation(a: &HermitianMatrix) -> Self {
        Self::Expectation(a.as_complex().clone())
    }

    pub fn sampled<F>(f: F) -> Self
    where
        F: Fn(&CVec) -> Complex64 + Send + Sync + 'static,
    {
        Self::Sampled(Arc::new(f))
    }

    pub fn value(&self, psi: &CVec) -> Result<Complex64> {
        match self {
            Self::Expectation(m) => expectation(m, psi),
            Self::Sampled(f) => Ok(f(psi)),
        }
    }

    /// Gradient in `(q, p)`; analytic for expectation functions.
    pub fn gradient(&self, psi: &CVec) -> Result<Vec<Complex64>> {
        match self {
            Self::Expectation(m) => expectation_gradient(m, psi),
            Self::Sampled(f) => {
                let m = psi.len();
                let h = SAMPLED_GRADIENT_STEP * psi.norm().max(1e-300);
                let mut out = vec![linalg::ZERO; 2 * m];
                for (slot, dir) in out.iter_mut().enumerate() {
                    let mut shift = CVec::zeros(m);
                    shift[slot % m] = if slot < m { linalg::ONE } else { linalg::I };
                    let plus = f(&(psi + shift.scale(h)));
                    let minus = f(&(psi - shift.scale(h)));
                    *dir = (plus - minus) / (2.0 * h);
                }
                Ok(out)
            }
        }
    }
}

fn check_vector(psi: &CVec, dim: usize) -> Result<f64> {
    if psi.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: psi.len() });
    }
    let n2 = psi.norm_squared();
    if n2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(n2)
}

/// `⟨ψ|Mψ⟩/⟨ψ|ψ⟩`.
pub fn expectation(m: &ComplexMatrix, psi: &CVec) -> Result<Complex64> {
    let n2 = check_vector(psi, m.dim())?;
    Ok(linalg::inner(psi, &(m.as_matrix() * psi)) / n2)
}

fn expectation_gradient(m: &ComplexMatrix, psi: &CVec) -> Result<Vec<Complex64>> {
    let n2 = check_vector(psi, m.dim())?;
    let mpsi = m.as_matrix() * psi;
    let madj_psi = m.as_matrix().adjoint() * psi;
    let f = linalg::inner(psi, &mpsi) / n2;
    let d = psi.len();
    let mut out = vec![linalg::ZERO; 2 * d];
    for j in 0..d {
        let a = mpsi[j];
        let b = madj_psi[j].conj();
        let two_re = Complex64::new(2.0 * psi[j].re, 0.0);
        let two_im = Complex64::new(2.0 * psi[j].im, 0.0);
        out[j] = (a + b - f * two_re) / n2;
        out[d + j] = (linalg::I * (b - a) - f * two_im) / n2;
    }
    Ok(out)
}

/// `(G̃(df, dg), Λ̃(df, dg))` at `ψ`, extended complex-bilinearly to
/// complex-valued functions.
pub fn projectable_tensors(
    psi: &CVec,
    f: &KahlerFunction,
    g: &KahlerFunction,
) -> Result<(Complex64, Complex64)> {
    if psi.norm_squared() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let df = f.gradient(psi)?;
    let dg = g.gradient(psi)?;
    Ok(tensors_from_gradients(psi, &df, &dg))
}

fn tensors_from_gradients(psi: &CVec, df: &[Complex64], dg: &[Complex64]) -> (Complex64, Complex64) {
    let d = psi.len();
    let e_sigma = psi.norm_squared();
    let (mut g, mut l) = (linalg::ZERO, linalg::ZERO);
    for j in 0..d {
        g += df[j] * dg[j] + df[d + j] * dg[d + j];
        l += df[j] * dg[d + j] - df[d + j] * dg[j];
    }
    g *= 0.5;
    l *= 0.5;
    // Δ = (q, p), Γ = iψ = (−p, q)
    let pair = |v: &[Complex64], qv: &dyn Fn(usize) -> f64, pv: &dyn Fn(usize) -> f64| {
        (0..d).fold(linalg::ZERO, |acc, j| acc + v[j] * qv(j) + v[d + j] * pv(j))
    };
    let q = |j: usize| psi[j].re;
    let p = |j: usize| psi[j].im;
    let mp = |j: usize| -psi[j].im;
    let delta_f = pair(df, &q, &p);
    let delta_g = pair(dg, &q, &p);
    let gamma_f = pair(df, &mp, &q);
    let gamma_g = pair(dg, &mp, &q);
    let gt = g * e_sigma - (delta_f * delta_g + gamma_f * gamma_g) * 0.5;
    let lt = l * e_sigma - (delta_f * gamma_g - gamma_f * delta_g) * 0.5;
    (gt, lt)
}

/// Value of `f_A ⋆ f_B` at a ray together with the reference `f_{AB}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarEvaluation {
    pub value: Complex64,
    pub expected: Complex64,
    pub defect: f64,
}

/// `f ⋆ g = f·g + ½(G̃ + iΛ̃)(df, dg)`.
pub fn star(psi: &CVec, f: &KahlerFunction, g: &KahlerFunction) -> Result<Complex64> {
    let (gt, lt) = projectable_tensors(psi, f, g)?;
    Ok(f.value(psi)? * g.value(psi)? + (gt + linalg::I * lt) * 0.5)
}

/// `f_A ⋆ f_B` at `p`, compared against `f_{AB}`.
pub fn star_product(a: &ComplexMatrix, b: &ComplexMatrix, p: &RayPoint) -> Result<StarEvaluation> {
    let psi = p.representative();
    let value = star(
        psi,
        &KahlerFunction::Expectation(a.clone()),
        &KahlerFunction::Expectation(b.clone()),
    )?;
    let expected = expectation(&a.mul(b)?, psi)?;
    Ok(StarEvaluation {
        value,
        expected,
        defect: (value - expected).norm(),
    })
}

/// `{f, g} = (i/2)(f⋆g − g⋆f)`, which equals `−½Λ̃(df, dg)`.
pub fn poisson_bracket(psi: &CVec, f: &KahlerFunction, g: &KahlerFunction) -> Result<Complex64> {
    let (_, lt) = projectable_tensors(psi, f, g)?;
    Ok(lt * -0.5)
}

/// `{f, g}_+ = G̃(df, dg) + f·g`.
///
/// For expectation functions this evaluates to `2 f_{A∘B} − f_A f_B`; the
/// symmetric part of the ⋆-product, `½(f⋆g + g⋆f)`, is what yields `f_{A∘B}`.
pub fn symmetric_bracket(psi: &CVec, f: &KahlerFunction, g: &KahlerFunction) -> Result<Complex64> {
    let (gt, _) = projectable_tensors(psi, f, g)?;
    Ok(gt + f.value(psi)? * g.value(psi)?)
}

/// One row of the `CP^n` Laplacian spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub n: u32,
    pub l: u32,
    pub eigenvalue: i64,
    pub multiplicity: BigUint,
}

fn factorial(k: u32) -> BigUint {
    (1..=k).fold(BigUint::from(1u32), |acc, i| acc * i)
}

/// `N_{n,l} = n(n+2l)((n+l−1)!)² / (n!·l!)²`, exactly.
pub fn multiplicity(n: u32, l: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let top = factorial(n + l - 1);
    let bottom = factorial(n) * factorial(l);
    let num = BigUint::from(n) * BigUint::from(n + 2 * l) * &top * &top;
    let den = &bottom * &bottom;
    if &num % &den != BigUint::from(0u32) {
        return Err(Error::Invalid(format!("non-integer multiplicity for n={n}, l={l}")));
    }
    Ok(num / den)
}

/// `λ_{n,l} = −l(n+l)` with multiplicities, for `l = 0..=l_max`.
pub fn laplacian_spectrum(n: u32, l_max: u32) -> Result<Vec<SpectrumEntry>> {
    (0..=l_max)
        .map(|l| {
            let eigenvalue = -(i64::from(l) * (i64::from(n) + i64::from(l)));
            Ok(SpectrumEntry {
                n,
                l,
                eigenvalue,
                multiplicity: multiplicity(n, l)?,
            })
        })
        .collect()
}

/// Real `2n×2n` metric `4·Re h` on the chart coordinates `(Re w, Im w)`.
pub fn chart_metric(w: &CVec) -> DMatrix<f64> {
    let n = w.len();
    let h = fubini_study_matrix(w);
    let unit = |a: usize| -> CVec {
        let mut u = CVec::zeros(n);
        u[a % n] = if a < n { linalg::ONE } else { linalg::I };
        u
    };
    DMatrix::from_fn(2 * n, 2 * n, |a, b| {
        let (u, v) = (unit(a), unit(b));
        let mut acc = linalg::ZERO;
        for i in 0..n {
            for j in 0..n {
                acc += h[(i, j)] * u[i] * v[j].conj();
            }
        }
        4.0 * acc.re
    })
}

fn chart_point(x: &[f64]) -> CVec {
    let n = x.len() / 2;
    CVec::from_fn(n, |i, _| Complex64::new(x[i], x[n + i]))
}

/// Laplace–Beltrami operator of `4·Re h` applied to `f` at `p`, computed in
/// divergence form by nested central differences in the chart of `p`.
pub fn laplacian(f: &KahlerFunction, p: &RayPoint) -> Result<Complex64> {
    let n = p.n();
    let idx = p.chart_index();
    let eval = |x: &[f64]| -> Result<Complex64> { f.value(&lift(idx, &chart_point(x))) };
    let h = LAPLACIAN_STEP;
    let x0: Vec<f64> = p
        .chart_coords()
        .iter()
        .map(|z| z.re)
        .chain(p.chart_coords().iter().map(|z| z.im))
        .collect();
    // flux^a = √g g^{ab} ∂_b f
    let flux = |x: &[f64]| -> Result<Vec<Complex64>> {
        let g = chart_metric(&chart_point(x));
        let sqrt_det = g.determinant().sqrt();
        let inv = g
            .try_inverse()
            .ok_or_else(|| Error::Invalid("singular chart metric".into()))?;
        let mut grad = vec![linalg::ZERO; 2 * n];
        for (b, slot) in grad.iter_mut().enumerate() {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[b] += h;
            xm[b] -= h;
            *slot = (eval(&xp)? - eval(&xm)?) / (2.0 * h);
        }
        Ok((0..2 * n)
            .map(|a| (0..2 * n).fold(linalg::ZERO, |acc, b| acc + grad[b] * inv[(a, b)]) * sqrt_det)
            .collect())
    };
    let mut div = linalg::ZERO;
    for a in 0..2 * n {
        let mut xp = x0.clone();
        let mut xm = x0.clone();
        xp[a] += h;
        xm[a] -= h;
        div += (flux(&xp)?[a] - flux(&xm)?[a]) / (2.0 * h);
    }
    let sqrt_det = chart_metric(&chart_point(&x0)).determinant().sqrt();
    Ok(div / sqrt_det)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Harmonic,
    FirstEigenspace,
    NotKahlerian,
    Inconclusive,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Harmonic => "harmonic",
            Self::FirstEigenspace => "first-eigenspace",
            Self::NotKahlerian => "not-kahlerian",
            Self::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KahlerReport {
    pub n: usize,
    pub classification: Classification,
    /// `max |Δf| / ‖f‖`.
    pub harmonic_defect: f64,
    /// `max |Δf + (n+1)f| / ‖f‖`.
    pub eigen_defect: f64,
    /// Least-squares `λ` in `Δf ≈ λf`.
    pub measured_eigenvalue: f64,
    /// Sup norm of `f` over the samples.
    pub sup_norm: f64,
    /// `(|f|, |Δf + (n+1)f|)` per sample.
    pub samples: Vec<(f64, f64)>,
}

/// Classifies `f` on `CP^n` from the Laplacian at `samples` random rays
/// (at least [`MIN_SAMPLES`]).
pub fn kahler_test(f: &KahlerFunction, n: usize, samples: usize, rng: &mut Rng) -> Result<KahlerReport> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let count = samples.max(MIN_SAMPLES);
    let lambda1 = -((n + 1) as f64);
    let (mut sup, mut worst_h, mut worst_e) = (0.0_f64, 0.0_f64, 0.0_f64);
    let (mut num, mut den) = (0.0, 0.0);
    let mut rows = Vec::with_capacity(count);
    for _ in 0..count {
        let p = RayPoint::new(&sampling::random_ray(rng, n + 1))?;
        let v = f.value(p.representative())?;
        let lap = laplacian(f, &p)?;
        sup = sup.max(v.norm());
        worst_h = worst_h.max(lap.norm());
        let e = (lap - v * lambda1).norm();
        worst_e = worst_e.max(e);
        num += (v.conj() * lap).re;
        den += v.norm_sqr();
        rows.push((v.norm(), e));
    }
    let scale = if sup > 0.0 { sup } else { 1.0 };
    let (hd, ed) = (worst_h / scale, worst_e / scale);
    let classification = if hd <= CLASSIFY_TOLERANCE {
        Classification::Harmonic
    } else if ed <= CLASSIFY_TOLERANCE {
        Classification::FirstEigenspace
    } else if hd >= REJECT_TOLERANCE && ed >= REJECT_TOLERANCE {
        Classification::NotKahlerian
    } else {
        Classification::Inconclusive
    };
    Ok(KahlerReport {
        n,
        classification,
        harmonic_defect: hd,
        eigen_defect: ed,
        measured_eigenvalue: if den > 0.0 { num / den } else { 0.0 },
        sup_norm: sup,
        samples: rows,
    })
}

/// `|ψ⟩⟨ψ|`.
pub fn momentum_map(psi: &CVec) -> HermitianMatrix {
    let m = psi * psi.adjoint();
    HermitianMatrix::hermitian_part(&ComplexMatrix::new(m).expect("finite entries"))
}

/// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
pub fn normalized_momentum_map(psi: &CVec) -> Result<HermitianMatrix> {
    let n2 = psi.norm_squared();
    if n2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    let m = (psi * psi.adjoint()).unscale(n2);
    Ok(HermitianMatrix::hermitian_part(&ComplexMatrix::new(m)?))
}

/// Dual coordinates `α_k = Tr(μ̃(ψ) b_k)` of the momentum image on a basis.
pub fn dual_coordinates(psi: &CVec, basis: &[ComplexMatrix]) -> Result<Vec<f64>> {
    let rho = normalized_momentum_map(psi)?;
    basis
        .iter()
        .map(|b| Ok(linalg::trace_of_product(rho.as_complex().as_matrix(), b.as_matrix()).re))
        .collect()
}

/// Numerical ranks found while counting Kählerian functions on `CP^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KahlerianCount {
    pub first_eigenspace_rank: usize,
    pub harmonic_rank: usize,
    pub total: usize,
}

/// Classifies `draws` random traceless `f_A` plus the constant and returns
/// the ranks of the two spans, sampled at `points` random rays.
pub fn kahlerian_dimension(n: usize, draws: usize, points: usize, rng: &mut Rng) -> Result<KahlerianCount> {
    let m = n + 1;
    let rays: Vec<CVec> = (0..points).map(|_| sampling::random_ray(rng, m)).collect();
    let mut first_rows = Vec::new();
    for _ in 0..draws {
        let a = sampling::traceless_hermitian(rng, m);
        let f = KahlerFunction::expectation(&a);
        let report = kahler_test(&f, n, MIN_SAMPLES, rng)?;
        if report.classification == Classification::FirstEigenspace {
            first_rows.push(
                rays.iter()
                    .map(|r| f.value(r).map(|z| z.re))
                    .collect::<Result<Vec<f64>>>()?,
            );
        }
    }
    let constant = KahlerFunction::expectation(&HermitianMatrix::new(ComplexMatrix::identity(m))?);
    let harmonic_rank = if kahler_test(&constant, n, MIN_SAMPLES, rng)?.classification == Classification::Harmonic {
        1
    } else {
        0
    };
    let first_eigenspace_rank = linalg::real_rank(&first_rows, 1e-8);
    Ok(KahlerianCount {
        first_eigenspace_rank,
        harmonic_rank,
        total: first_eigenspace_rank + harmonic_rank,
    })
}

/// Ray with Bloch vector `(x, y, z)` on the unit sphere.
pub fn bloch_ray(v: &Vector3<f64>) -> CVec {
    let theta = v.z.clamp(-1.0, 1.0).acos();
    let phi = v.y.atan2(v.x);
    CVec::from_vec(vec![
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ])
}

/// `points` nodes of a spherical Fibonacci lattice under a random rotation.
pub fn fibonacci_sphere(points: usize, rng: &mut Rng) -> Vec<Vector3<f64>> {
    let golden = PI * (3.0 - 5.0_f64.sqrt());
    let g = Matrix3::from_fn(|_, _| sampling::gaussian(rng));
    let mut rot = g.qr().q();
    if rot.determinant() < 0.0 {
        rot.column_mut(0).neg_mut();
    }
    (0..points)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / points as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            rot * Vector3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Round-sphere `L²` Gram matrix of `f_{σ_x}, f_{σ_y}, f_{σ_z}` (mean over
/// the sphere), estimated by randomized quasi-Monte Carlo.
pub fn dipole_gram(points: usize, rng: &mut Rng) -> Result<Matrix3<f64>> {
    let s = pauli();
    let mut gram = Matrix3::zeros();
    let nodes = fibonacci_sphere(points, rng);
    for v in &nodes {
        let psi = bloch_ray(v);
        let f = [
            expectation(&s[1], &psi)?.re,
            expectation(&s[2], &psi)?.re,
            expectation(&s[3], &psi)?.re,
        ];
        for i in 0..3 {
            for j in 0..3 {
                gram[(i, j)] += f[i] * f[j];
            }
        }
    }
    Ok(gram / nodes.len() as f64)
}
