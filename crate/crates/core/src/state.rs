//! Density states `ω(a) = Tr(ωa)` over `B(ℂⁿ)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::Value;

use crate::algebra::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};

/// Eigenvalues below this (absolute, before normalization) are rejected.
pub const NEGATIVE_EIGENVALUE_FLOOR: f64 = -1e-9;
/// Relative threshold below which an eigenvalue counts as zero.
pub const ZERO_EIGENVALUE_THRESHOLD: f64 = 1e-12;
/// Purity gate for [`DensityState::is_pure_by_purity`].
pub const PURITY_TOLERANCE: f64 = 1e-10;
/// Allowed deviation of convex weights from unit sum.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// A positive semidefinite, unit-trace matrix with a canonical
/// eigendecomposition.
///
/// Eigenvalues are stored descending. Inside a degenerate eigenspace the
/// basis is rebuilt from the spectral projector by pivoted Gram–Schmidt on
/// the standard basis, and every eigenvector has its first non-negligible
/// component made real and positive, so the decomposition is a function of
/// the matrix alone.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityState {
    matrix: HermitianMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: CMat,
}

/// Rank and support projector of a state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateRank {
    pub rank: usize,
    pub support_projector: ComplexMatrix,
}

/// Validates and normalizes `m` into a state.
pub fn make_state(m: &ComplexMatrix) -> Result<DensityState> {
    let h = HermitianMatrix::new(m.clone())?;
    let (raw, vectors) = h.eigen();
    let min = raw.last().copied().unwrap_or(0.0);
    if min < NEGATIVE_EIGENVALUE_FLOOR {
        return Err(Error::NegativeEigenvalue { value: min });
    }
    let total: f64 = raw.iter().sum();
    let largest = raw.first().copied().unwrap_or(0.0).abs();
    if total <= 0.0 || total <= f64::EPSILON * largest {
        return Err(Error::ZeroTrace);
    }
    let values: Vec<f64> = raw.iter().map(|x| x / total).collect();
    Ok(DensityState::from_eigen(values, vectors))
}

impl DensityState {
    fn from_eigen(mut values: Vec<f64>, vectors: CMat) -> Self {
        let n = values.len();
        let lmax = values[0];
        for v in values.iter_mut() {
            if *v < ZERO_EIGENVALUE_THRESHOLD * lmax {
                *v = 0.0;
            }
        }
        let total: f64 = values.iter().sum();
        for v in values.iter_mut() {
            *v /= total;
        }

        let mut canonical = CMat::zeros(n, n);
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && (values[start] - values[end]).abs() <= ZERO_EIGENVALUE_THRESHOLD * lmax
            {
                end += 1;
            }
            let mean = values[start..end].iter().sum::<f64>() / (end - start) as f64;
            for v in &mut values[start..end] {
                *v = mean;
            }
            let block = vectors.columns(start, end - start).into_owned();
            let basis = canonical_basis(&block);
            for (k, col) in basis.into_iter().enumerate() {
                canonical.set_column(start + k, &col);
            }
            start = end;
        }

        let diag = DMatrix::from_diagonal(&CVec::from_iterator(
            n,
            values.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        let m = &canonical * diag * canonical.adjoint();
        let m = (&m + m.adjoint()).scale(0.5);
        let matrix = HermitianMatrix::hermitian_part(
            &ComplexMatrix::new(m).expect("reconstruction is finite"),
        );
        Self {
            matrix,
            eigenvalues: values,
            eigenvectors: canonical,
        }
    }

    /// Pure state `|ψ⟩⟨ψ|/⟨ψ|ψ⟩`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        make_state(&ComplexMatrix::outer(psi, psi)?)
    }

    /// `|e_k⟩⟨e_k|` in `ℂⁿ`.
    pub fn basis_projector(n: usize, k: usize) -> Self {
        make_state(&ComplexMatrix::elementary(n, k, k)).expect("projector is a state")
    }

    pub fn maximally_mixed(n: usize) -> Self {
        make_state(&ComplexMatrix::identity(n)).expect("identity is a state")
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.matrix.as_complex()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.matrix
    }

    /// Descending, clamped, summing to one.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns are eigenvectors in the order of [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &CMat {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> CVec {
        self.eigenvectors.column(k).into_owned()
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues.iter().filter(|&&x| x > 0.0).count()
    }

    /// Nonzero eigenvalues, descending.
    pub fn weights(&self) -> Vec<f64> {
        self.eigenvalues[..self.rank()].to_vec()
    }

    pub fn state_rank(&self) -> StateRank {
        let m = self.rank();
        let v = self.eigenvectors.columns(0, m);
        let p = v * v.adjoint();
        StateRank {
            rank: m,
            support_projector: ComplexMatrix::new(p).expect("finite"),
        }
    }

    /// `Tr(ω²)`.
    pub fn purity(&self) -> f64 {
        self.eigenvalues.iter().map(|x| x * x).sum()
    }

    pub fn is_pure(&self) -> bool {
        is_pure(self)
    }

    pub fn is_pure_by_purity(&self) -> bool {
        self.purity() >= 1.0 - PURITY_TOLERANCE
    }

    pub fn evaluate(&self, a: &ComplexMatrix) -> Result<Complex64> {
        evaluate(self, a)
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.matrix().to_json();
        v["kind"] = Value::from("density_state");
        v
    }

    /// Loads the state JSON format and applies [`make_state`].
    pub fn from_json(value: &Value) -> Result<Self> {
        match value.get("kind").and_then(Value::as_str) {
            Some("density_state") => {}
            Some(other) => return Err(Error::Json(format!("unexpected kind \"{other}\""))),
            None => return Err(Error::Json("missing \"kind\": \"density_state\"".into())),
        }
        make_state(&ComplexMatrix::from_json(value)?)
    }
}

/// Orthonormal basis of the column span of `block`, rebuilt from the
/// projector onto it so the result does not depend on how the solver chose
/// vectors inside a degenerate eigenspace.
fn canonical_basis(block: &CMat) -> Vec<CVec> {
    let n = block.nrows();
    let d = block.ncols();
    if d == 1 {
        let mut v = block.column(0).into_owned();
        linalg::fix_phase(&mut v, 1e-12);
        return vec![v];
    }
    let p = block * block.adjoint();
    let mut residuals: Vec<CVec> = (0..n).map(|k| p.column(k).into_owned()).collect();
    let mut used = vec![false; n];
    let mut basis: Vec<CVec> = Vec::with_capacity(d);
    for _ in 0..d {
        let norms: Vec<f64> = residuals.iter().map(|r| r.norm()).collect();
        let best = (0..n)
            .filter(|&k| !used[k])
            .map(|k| norms[k])
            .fold(0.0, f64::max);
        let pick = (0..n)
            .find(|&k| !used[k] && norms[k] >= (1.0 - 1e-9) * best)
            .expect("projector of rank d has d independent columns");
        used[pick] = true;
        let mut q = residuals[pick].unscale(norms[pick]);
        linalg::fix_phase(&mut q, 1e-12);
        for r in residuals.iter_mut() {
            let c = linalg::inner(&q, r);
            *r -= &q * c;
        }
        basis.push(q);
    }
    basis
}

/// `ω(a) = Tr(ωa)`.
pub fn evaluate(omega: &DensityState, a: &ComplexMatrix) -> Result<Complex64> {
    if a.dim() != omega.dim() {
        return Err(Error::DimensionMismatch {
            expected: omega.dim(),
            found: a.dim(),
        });
    }
    Ok(linalg::trace_of_product(
        omega.matrix().as_matrix(),
        a.as_matrix(),
    ))
}

/// Rank one, i.e. an extremal point of the state space.
pub fn is_pure(omega: &DensityState) -> bool {
    omega.rank() == 1
}

/// `Σ p_α ω_α`.
pub fn convex_combine(weights: &[f64], states: &[DensityState]) -> Result<DensityState> {
    if weights.len() != states.len() || states.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: states.len(),
            found: weights.len(),
        });
    }
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|&w| w.is_nan() || w <= 0.0) || (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(Error::WeightSum { sum });
    }
    let n = states[0].dim();
    let mut acc = CMat::zeros(n, n);
    for (w, s) in weights.iter().zip(states) {
        if s.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: s.dim(),
            });
        }
        acc += s.matrix().as_matrix().scale(*w);
    }
    make_state(&ComplexMatrix::new(acc)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pauli;
    use crate::sampling;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pure_projector() {
        let s = DensityState::basis_projector(2, 0);
        assert_eq!(s.rank(), 1);
        assert_eq!(s.eigenvalues(), &[1.0, 0.0]);
        assert!(s.is_pure());
        assert!(s.is_pure_by_purity());
        assert!((evaluate(&s, &pauli()[3]).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn maximally_mixed() {
        let s = make_state(&ComplexMatrix::identity(2).scale(c(0.5, 0.0))).unwrap();
        assert_eq!(s.rank(), 2);
        assert!((s.eigenvalues()[0] - 0.5).abs() < 1e-15);
        assert!((s.eigenvalues()[1] - 0.5).abs() < 1e-15);
        assert!(!s.is_pure());
        // degenerate spectrum gets the standard basis back
        assert!(linalg::relative_defect(s.eigenvectors(), &CMat::identity(2, 2)) < 1e-15);
        for k in 1..4 {
            assert!(evaluate(&s, &pauli()[k]).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn diagonal_mixture() {
        let s = make_state(&ComplexMatrix::diagonal(&[0.7, 0.3])).unwrap();
        assert_eq!(s.rank(), 2);
        assert!((s.eigenvalues()[0] - 0.7).abs() < 1e-15);
        assert!((s.eigenvalues()[1] - 0.3).abs() < 1e-15);
        let nearly = make_state(&ComplexMatrix::diagonal(&[0.999, 0.001])).unwrap();
        assert!(!nearly.is_pure());
        assert!(!nearly.is_pure_by_purity());
    }

    #[test]
    fn normalizes_trace_and_clamps() {
        let s = make_state(&ComplexMatrix::diagonal(&[2.0, 2.0, -5e-10])).unwrap();
        assert_eq!(s.rank(), 2);
        assert_eq!(s.eigenvalues()[2], 0.0);
        assert!((s.matrix().trace().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejections() {
        let not_h = ComplexMatrix::from_row_major(2, &[c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)])
            .unwrap();
        assert!(matches!(make_state(&not_h), Err(Error::NotHermitian { .. })));
        assert!(matches!(
            make_state(&ComplexMatrix::diagonal(&[1.0, -1e-3])),
            Err(Error::NegativeEigenvalue { .. })
        ));
        assert!(matches!(
            make_state(&ComplexMatrix::zeros(3)),
            Err(Error::ZeroTrace)
        ));
        let bad = DensityState::maximally_mixed(3);
        assert!(matches!(
            evaluate(&bad, &ComplexMatrix::identity(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn convex_combinations() {
        let w = DensityState::basis_projector(2, 0);
        assert_eq!(convex_combine(&[1.0], std::slice::from_ref(&w)).unwrap(), w);
        let e2 = DensityState::basis_projector(2, 1);
        let mixed = convex_combine(&[0.5, 0.5], &[w.clone(), e2.clone()]).unwrap();
        assert!(mixed
            .matrix()
            .approx_eq(&ComplexMatrix::identity(2).scale(c(0.5, 0.0)), 1e-15));
        assert!(matches!(
            convex_combine(&[0.6, 0.5], &[w.clone(), e2.clone()]),
            Err(Error::WeightSum { .. })
        ));
        assert!(convex_combine(&[1.0], &[w, e2]).is_err());
    }

    #[test]
    fn convex_combination_is_affine_in_evaluate() {
        let mut rng = sampling::rng(11);
        let a = DensityState::pure(sampling::random_ray(&mut rng, 3).as_slice()).unwrap();
        let b = DensityState::pure(sampling::random_ray(&mut rng, 3).as_slice()).unwrap();
        let mix = convex_combine(&[0.7, 0.3], &[a.clone(), b.clone()]).unwrap();
        assert_eq!(mix.rank(), 2);
        for _ in 0..20 {
            let x = sampling::complex_matrix(&mut rng, 3);
            // oracle: traces of the two pure states taken directly
            let oracle = linalg::trace_of_product(a.matrix().as_matrix(), x.as_matrix()) * 0.7
                + linalg::trace_of_product(b.matrix().as_matrix(), x.as_matrix()) * 0.3;
            assert!((evaluate(&mix, &x).unwrap() - oracle).norm() < 1e-12);
        }
    }

    #[test]
    fn json_format() {
        let s = make_state(&ComplexMatrix::diagonal(&[0.25, 0.75])).unwrap();
        let v = s.to_json();
        assert_eq!(v["kind"], "density_state");
        assert_eq!(DensityState::from_json(&v).unwrap(), s);
        let mut wrong = v.clone();
        wrong["kind"] = Value::from("matrix");
        assert!(DensityState::from_json(&wrong).is_err());
    }
}
