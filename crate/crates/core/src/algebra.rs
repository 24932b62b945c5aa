//! Dense complex matrix algebra `B(ℂⁿ)` with its Jordan and Lie products.
//!
//! The Lie product is normalized as `[a, b] = (i/2)(ab − ba)`, so that
//! `ab = a∘b − i[a, b]` recovers the associative product. This is the only
//! bracket normalization exposed here.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};

/// Default relative tolerance for matrix comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Default relative hermiticity tolerance, scaled by `‖M‖_max`.
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;

/// An immutable dense `n×n` complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(CMat);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}", self.0)
    }
}

impl ComplexMatrix {
    pub fn new(m: CMat) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        // row-major index so it lines up with the JSON layout
        let n = m.nrows();
        for r in 0..n {
            for c in 0..n {
                let z = m[(r, c)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { index: r * n + c });
                }
            }
        }
        Ok(Self(m))
    }

    /// Builds from row-major entries; `entries.len()` must be a perfect square.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::from_row_major(n, &entries)
    }

    pub fn identity(n: usize) -> Self {
        Self(CMat::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(CMat::zeros(n, n))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self(CMat::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                linalg::ZERO
            }
        }))
    }

    /// Elementary matrix `E_{kl}` with a single unit entry.
    pub fn elementary(n: usize, k: usize, l: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        m[(k, l)] = linalg::ONE;
        Self(m)
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                found: v.len(),
            });
        }
        Self::new(CMat::from_fn(u.len(), u.len(), |i, j| u[i] * v[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn as_matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }

    pub fn max_norm(&self) -> f64 {
        linalg::max_norm(&self.0)
    }

    pub fn trace(&self) -> Complex64 {
        linalg::trace(&self.0)
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        Ok(Self(&self.0 * &other.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        Ok(Self(&self.0 - &other.0))
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self(self.0.map(|x| x * z))
    }

    pub fn adjoint(&self) -> Self {
        adjoint(self)
    }

    /// Relative max-norm distance, see [`linalg::relative_defect`].
    pub fn defect(&self, other: &Self) -> Result<f64> {
        self.check_dims(other)?;
        Ok(linalg::relative_defect(&self.0, &other.0))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.defect(other).map(|d| d <= tol).unwrap_or(false)
    }

    /// `‖M − M†‖_max`.
    pub fn hermiticity_defect(&self) -> f64 {
        linalg::max_abs_diff(&self.0, &self.0.adjoint())
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= HERMITICITY_TOLERANCE * self.max_norm()
    }

    /// Serializes to `{"dim": n, "entries": [[re, im], ...]}`, row-major.
    pub fn to_json(&self) -> Value {
        let n = self.dim();
        let entries: Vec<Value> = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .map(|(r, c)| {
                let z = self.0[(r, c)];
                json!([z.re, z.im])
            })
            .collect();
        json!({ "dim": n, "entries": entries })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let dim = value
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("missing or invalid \"dim\"".into()))?
            as usize;
        if dim == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        let entries = value
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("missing \"entries\" array".into()))?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        let mut zs = Vec::with_capacity(entries.len());
        for (index, e) in entries.iter().enumerate() {
            let pair = e
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Json(format!("entry {index} is not a [re, im] pair")))?;
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| Error::Json(format!("entry {index} has a non-numeric part")))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| Error::Json(format!("entry {index} has a non-numeric part")))?;
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::NonFinite { index });
            }
            zs.push(Complex64::new(re, im));
        }
        Self::from_row_major(dim, &zs)
    }
}

/// A complex matrix known to be Hermitian within tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Accepts `m` if `‖M − M†‖_max ≤ 1e-12·‖M‖_max`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, HERMITICITY_TOLERANCE)
    }

    pub fn with_tolerance(m: ComplexMatrix, rel_tol: f64) -> Result<Self> {
        let defect = m.hermiticity_defect();
        let tolerance = rel_tol * m.max_norm();
        if defect > tolerance {
            return Err(Error::NotHermitian { defect, tolerance });
        }
        Ok(Self(m))
    }

    /// Hermitian part `(M + M†)/2`.
    pub fn hermitian_part(m: &ComplexMatrix) -> Self {
        Self(ComplexMatrix((m.as_matrix() + m.as_matrix().adjoint()).scale(0.5)))
    }

    pub fn as_complex(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_complex(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Eigenvalues descending with matching eigenvector columns.
    pub fn eigen(&self) -> (Vec<f64>, CMat) {
        linalg::hermitian_eigen(self.0.as_matrix())
    }
}

impl AsRef<ComplexMatrix> for HermitianMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// The four Pauli matrices `σ₀ = I, σ₁, σ₂, σ₃`.
pub fn pauli() -> [ComplexMatrix; 4] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let m = |e: [Complex64; 4]| ComplexMatrix(DMatrix::from_row_slice(2, 2, &e));
    [
        m([c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]),
        m([c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
        m([c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
        m([c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
    ]
}

pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.adjoint())
}

/// `a∘b = ½(ab + ba)`.
pub fn jordan_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_dims(b)?;
    let ab = &a.0 * &b.0;
    let ba = &b.0 * &a.0;
    Ok(ComplexMatrix((ab + ba).scale(0.5)))
}

/// `[a, b] = (i/2)(ab − ba)`.
pub fn lie_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_dims(b)?;
    let ab = &a.0 * &b.0;
    let ba = &b.0 * &a.0;
    let half_i = Complex64::new(0.0, 0.5);
    Ok(ComplexMatrix((ab - ba).map(|z| z * half_i)))
}

/// `a∘b − i[a, b]`, which equals `ab`.
pub fn recover_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let j = jordan_product(a, b)?;
    let l = lie_product(a, b)?;
    Ok(ComplexMatrix(j.0 - l.0.map(|z| z * linalg::I)))
}

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    linalg::spectral_norm(&a.0)
}

/// Least-squares fit of `λ²` in `(a∘b)∘c − a∘(b∘c) = λ²[[a,c],b]` over the
/// given triples. Returns `(λ², max residual)`, the residual relative to the
/// largest associator entry seen.
pub fn fit_associator_constant(
    triples: &[(ComplexMatrix, ComplexMatrix, ComplexMatrix)],
) -> Result<(f64, f64)> {
    let mut lhs = Vec::with_capacity(triples.len());
    let mut rhs = Vec::with_capacity(triples.len());
    for (a, b, c) in triples {
        let left = jordan_product(&jordan_product(a, b)?, c)?
            .sub(&jordan_product(a, &jordan_product(b, c)?)?)?;
        let right = lie_product(&lie_product(a, c)?, b)?;
        lhs.push(left);
        rhs.push(right);
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (l, r) in lhs.iter().zip(&rhs) {
        for (x, y) in l.0.iter().zip(r.0.iter()) {
            num += (y.conj() * x).re;
            den += y.norm_sqr();
        }
    }
    if den == 0.0 {
        return Err(Error::Invalid("associator fit is degenerate".into()));
    }
    let lambda_sq = num / den;
    let mut scale: f64 = 0.0;
    let mut residual: f64 = 0.0;
    for (l, r) in lhs.iter().zip(&rhs) {
        scale = scale.max(l.max_norm());
        residual = residual.max(linalg::max_abs_diff(&l.0, &r.0.map(|z| z * lambda_sq)));
    }
    Ok((lambda_sq, residual / scale.max(f64::MIN_POSITIVE)))
}
