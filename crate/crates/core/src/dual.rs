//! Bilinear products on a real vector space `V`, read as contravariant
//! 2-tensor fields on the dual `V*`.
//!
//! A product `B` with structure constants `B(e_i, e_j) = Σ_k c_ijk e_k`
//! yields the tensor `τ^{ij}(α) = Σ_k c_ijk α_k`. Antisymmetric products give
//! Poisson tensors, symmetric ones give the Jordan ("Riemann") tensor.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{jordan_product, lie_product, pauli, ComplexMatrix};
use crate::error::{Error, Result};
use crate::fields;
use crate::poly::Polynomial;

/// Tolerance for the antisymmetry and Jacobi checks on a Lie algebra.
pub const LIE_TOLERANCE: f64 = 1e-12;
/// Residual above which a matrix basis is declared not closed.
pub const CLOSURE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    Lie,
    Jordan,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorKind {
    Poisson,
    Riemann,
    Generic,
}

/// A `d`-dimensional real algebra given by its structure constants.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteAlgebra {
    dim: usize,
    labels: Vec<String>,
    constants: Vec<f64>,
    kind: AlgebraKind,
}

impl FiniteAlgebra {
    /// `constants[(i * d + j) * d + k]` is the `e_k` coefficient of `B(e_i, e_j)`.
    pub fn new(
        labels: Vec<String>,
        constants: Vec<f64>,
        kind: AlgebraKind,
    ) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::Invalid("algebra must have positive dimension".into()));
        }
        if constants.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                found: constants.len(),
            });
        }
        if let Some(index) = constants.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let alg = Self {
            dim,
            labels,
            constants,
            kind,
        };
        match kind {
            AlgebraKind::Lie => {
                let scale = alg.constants.iter().fold(1.0_f64, |a, c| a.max(c.abs()));
                let anti = alg.antisymmetry_defect();
                if anti > LIE_TOLERANCE * scale {
                    return Err(Error::Invalid(format!(
                        "lie product not antisymmetric (defect {anti:e})"
                    )));
                }
                let jac = alg.jacobi_defect();
                if jac > LIE_TOLERANCE * scale * scale {
                    return Err(Error::Invalid(format!(
                        "lie product violates jacobi (defect {jac:e})"
                    )));
                }
            }
            AlgebraKind::Jordan => {
                if alg.symmetry_defect() != 0.0 {
                    return Err(Error::Invalid("jordan product not symmetric".into()));
                }
            }
            AlgebraKind::Generic => {}
        }
        Ok(alg)
    }

    /// `B(v1,v2) = a3 v3`, `B(v2,v3) = a1 v1`, `B(v3,v1) = a2 v2`.
    pub fn three_dimensional(a: [f64; 3]) -> Result<Self> {
        let mut c = vec![0.0; 27];
        let idx = |i: usize, j: usize, k: usize| (i * 3 + j) * 3 + k;
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c[idx(i, j, k)] = a[k];
            c[idx(j, i, k)] = -a[k];
        }
        Self::new(
            vec!["x1".into(), "x2".into(), "x3".into()],
            c,
            AlgebraKind::Lie,
        )
    }

    /// Structure constants of `product` restricted to the real span of
    /// `basis`, found by least-squares projection.
    pub fn from_matrix_basis<F>(
        basis: &[ComplexMatrix],
        labels: Vec<String>,
        product: F,
        kind: AlgebraKind,
    ) -> Result<Self>
    where
        F: Fn(&ComplexMatrix, &ComplexMatrix) -> Result<ComplexMatrix>,
    {
        let d = basis.len();
        if labels.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: labels.len(),
            });
        }
        let flatten = |m: &ComplexMatrix| -> Vec<f64> {
            m.as_matrix().iter().flat_map(|z| [z.re, z.im]).collect()
        };
        let rows = flatten(basis.first().ok_or(Error::ZeroVector)?).len();
        let mut design = DMatrix::zeros(rows, d);
        for (k, b) in basis.iter().enumerate() {
            design.set_column(k, &DVector::from_vec(flatten(b)));
        }
        let svd = design.clone().svd(true, true);
        let mut c = vec![0.0; d * d * d];
        for i in 0..d {
            for j in 0..d {
                let target = DVector::from_vec(flatten(&product(&basis[i], &basis[j])?));
                let coeffs = svd
                    .solve(&target, 1e-12)
                    .map_err(|e| Error::Invalid(e.to_string()))?;
                let residual = (&design * &coeffs - &target).amax();
                if residual > CLOSURE_TOLERANCE * target.amax().max(1.0) {
                    return Err(Error::NotClosed { residual });
                }
                for k in 0..d {
                    // drop solver noise so structural zeros stay exact
                    let v = coeffs[k];
                    c[(i * d + j) * d + k] = if v.abs() < 1e-13 { 0.0 } else { v };
                }
            }
        }
        // round-off from the solve would otherwise break exact symmetry
        if kind != AlgebraKind::Generic {
            let sign = if kind == AlgebraKind::Lie { -1.0 } else { 1.0 };
            for i in 0..d {
                for j in i..d {
                    for k in 0..d {
                        let a = c[(i * d + j) * d + k];
                        let b = c[(j * d + i) * d + k];
                        let avg = 0.5 * (a + sign * b);
                        c[(i * d + j) * d + k] = avg;
                        c[(j * d + i) * d + k] = sign * avg;
                    }
                }
            }
        }
        Self::new(labels, c, kind)
    }

    fn pauli_labels() -> Vec<String> {
        (0..4).map(|a| format!("y{a}")).collect()
    }

    /// Pauli basis with `(i/2)(ab − ba)`.
    pub fn u2_lie() -> Self {
        Self::from_matrix_basis(&pauli(), Self::pauli_labels(), lie_product, AlgebraKind::Lie)
            .expect("pauli matrices close under the commutator")
    }

    /// Pauli basis with `½(ab + ba)`.
    pub fn u2_jordan() -> Self {
        Self::from_matrix_basis(
            &pauli(),
            Self::pauli_labels(),
            jordan_product,
            AlgebraKind::Jordan,
        )
        .expect("pauli matrices close under the anticommutator")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.constants[(i * self.dim + j) * self.dim + k]
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: n,
            });
        }
        Ok(())
    }

    /// `B(u, v)` in coordinates.
    pub fn product(&self, u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(u.len())?;
        self.check_len(v.len())?;
        let d = self.dim;
        let mut out = vec![0.0; d];
        for i in 0..d {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                if v[j] == 0.0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += u[i] * v[j] * self.constant(i, j, k);
                }
            }
        }
        Ok(out)
    }

    pub fn antisymmetry_defect(&self) -> f64 {
        self.pair_defect(1.0)
    }

    pub fn symmetry_defect(&self) -> f64 {
        self.pair_defect(-1.0)
    }

    fn pair_defect(&self, sign: f64) -> f64 {
        let d = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    worst = worst.max((self.constant(i, j, k) + sign * self.constant(j, i, k)).abs());
                }
            }
        }
        worst
    }

    /// Largest coefficient of `B(e_i,B(e_j,e_k)) + cyclic` over basis triples.
    pub fn jacobi_defect(&self) -> f64 {
        let d = self.dim;
        let e = |i: usize| {
            let mut v = vec![0.0; d];
            v[i] = 1.0;
            v
        };
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (a, b, c) = (e(i), e(j), e(k));
                    let t1 = self.product(&a, &self.product(&b, &c).unwrap()).unwrap();
                    let t2 = self.product(&b, &self.product(&c, &a).unwrap()).unwrap();
                    let t3 = self.product(&c, &self.product(&a, &b).unwrap()).unwrap();
                    for m in 0..d {
                        worst = worst.max((t1[m] + t2[m] + t3[m]).abs());
                    }
                }
            }
        }
        worst
    }
}

/// A point of `V*`, given by its values on the basis of `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPoint(Vec<f64>);

impl DualPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// `v̂(α) = α(v)`.
pub fn hat(v: &[f64], alpha: &DualPoint) -> Result<f64> {
    if v.len() != alpha.dim() {
        return Err(Error::DimensionMismatch {
            expected: alpha.dim(),
            found: v.len(),
        });
    }
    Ok(v.iter().zip(alpha.coords()).map(|(a, b)| a * b).sum())
}

/// The 2-tensor `τ_B` of an algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField {
    algebra: FiniteAlgebra,
    kind: TensorKind,
}

impl TensorField {
    pub fn new(algebra: FiniteAlgebra) -> Self {
        let kind = match algebra.kind() {
            AlgebraKind::Lie => TensorKind::Poisson,
            AlgebraKind::Jordan => TensorKind::Riemann,
            AlgebraKind::Generic => TensorKind::Generic,
        };
        Self { algebra, kind }
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn kind(&self) -> TensorKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Component matrix `τ^{ij}(α)`.
    pub fn components(&self, alpha: &[f64]) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |i, j| {
            (0..d).map(|k| self.algebra.constant(i, j, k) * alpha[k]).sum()
        })
    }

    /// Like [`components`](Self::components) but with a dimension check.
    pub fn components_at(&self, alpha: &DualPoint) -> Result<DMatrix<f64>> {
        self.algebra.check_len(alpha.dim())?;
        Ok(self.components(alpha.coords()))
    }

    /// `Σ_ij ∂_i f ∂_j g τ^{ij}(α)` for gradients `df`, `dg`.
    pub fn contract(&self, df: &[f64], dg: &[f64], alpha: &[f64]) -> f64 {
        let t = self.components(alpha);
        let mut acc = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += df[i] * dg[j] * t[(i, j)];
            }
        }
        acc
    }
}

/// `α(B(v1, v2))`.
pub fn tau_eval(t: &TensorField, v1: &[f64], v2: &[f64], alpha: &DualPoint) -> Result<f64> {
    t.algebra.check_len(alpha.dim())?;
    hat(&t.algebra.product(v1, v2)?, alpha)
}

/// `τ(df, dg)(α)` for polynomials in the hat coordinates.
pub fn poisson_bracket(
    t: &TensorField,
    f: &Polynomial,
    g: &Polynomial,
    alpha: &DualPoint,
) -> Result<f64> {
    t.algebra.check_len(alpha.dim())?;
    t.algebra.check_len(f.dim())?;
    t.algebra.check_len(g.dim())?;
    let x = alpha.coords();
    Ok(t.contract(&f.gradient(x), &g.gradient(x), x))
}

/// `|τ(dv̂, d(fg)) − τ(dv̂, df)·g − f·τ(dv̂, dg)|` at `α`.
pub fn leibniz_defect(
    t: &TensorField,
    v: &[f64],
    f: &Polynomial,
    g: &Polynomial,
    alpha: &DualPoint,
) -> Result<f64> {
    let vh = Polynomial::linear(v);
    let fg = f.mul(g)?;
    let x = alpha.coords();
    let lhs = poisson_bracket(t, &vh, &fg, alpha)?;
    let rhs = poisson_bracket(t, &vh, f, alpha)? * g.eval(x)
        + f.eval(x) * poisson_bracket(t, &vh, g, alpha)?;
    Ok((lhs - rhs).abs())
}

/// `𝒞 = ½(a1 x1² + a2 x2² + a3 x3²)`.
pub fn casimir(a: [f64; 3]) -> Polynomial {
    let mut c = Polynomial::zero(3);
    for (i, &ai) in a.iter().enumerate() {
        let mut e = [0u8; 3];
        e[i] = 2;
        let term = Polynomial::monomial(&e, 0.5 * ai).expect("degree 2");
        c = c.add(&term).expect("same dimension");
    }
    c
}

/// Poisson tensor and Jordan tensor of `u(2)` in the coordinates
/// `y_α(A) = ½Tr(σ_α A)`.
pub fn u2_tensors() -> (TensorField, TensorField) {
    (
        TensorField::new(FiniteAlgebra::u2_lie()),
        TensorField::new(FiniteAlgebra::u2_jordan()),
    )
}

fn coordinate_field(t: &TensorField, k: usize, alpha: &DualPoint, transpose: bool) -> Result<Vec<f64>> {
    let comps = t.components_at(alpha)?;
    if k >= t.dim() {
        return Err(Error::IndexOutOfRange { index: k, dim: t.dim() });
    }
    Ok((0..t.dim())
        .map(|j| if transpose { comps[(j, k)] } else { comps[(k, j)] })
        .collect())
}

/// Hamiltonian vector field of the coordinate `x_k`: component `j` is
/// `Λ^{jk}(α)`, so that `X_f(g) = Λ(dg, df)`.
pub fn hamiltonian_field(t: &TensorField, k: usize, alpha: &DualPoint) -> Result<Vec<f64>> {
    coordinate_field(t, k, alpha, true)
}

/// Gradient vector field of the coordinate `x_k`: component `j` is `ℛ^{kj}(α)`.
pub fn gradient_field(t: &TensorField, k: usize, alpha: &DualPoint) -> Result<Vec<f64>> {
    coordinate_field(t, k, alpha, false)
}

/// The field `α ↦ hamiltonian_field(t, k, α)` as a closure.
pub fn hamiltonian_flow(t: &TensorField, k: usize) -> impl Fn(&[f64]) -> Vec<f64> + '_ {
    move |x: &[f64]| {
        let comps = t.components(x);
        (0..t.dim()).map(|j| comps[(j, k)]).collect()
    }
}

/// The field `α ↦ gradient_field(t, k, α)` as a closure.
pub fn gradient_flow(t: &TensorField, k: usize) -> impl Fn(&[f64]) -> Vec<f64> + '_ {
    move |x: &[f64]| {
        let comps = t.components(x);
        (0..t.dim()).map(|j| comps[(k, j)]).collect()
    }
}

/// The tensor `α ↦ τ^{ij}(α)` as a closure.
pub fn tensor_map(t: &TensorField) -> impl Fn(&[f64]) -> DMatrix<f64> + '_ {
    move |x: &[f64]| t.components(x)
}

/// Largest entry of `σ_kσ_l − iε_klm σ_m` over `k, l ∈ {1,2,3}`.
///
/// Nonzero because the identity drops the `δ_kl σ_0` term of the actual
/// Pauli products; the tensors here are built from the true products.
pub fn pauli_identity_discrepancy() -> f64 {
    let s = pauli();
    let mut worst = 0.0_f64;
    for k in 1..4 {
        for l in 1..4 {
            let lhs = s[k].mul(&s[l]).expect("2x2");
            let mut rhs = ComplexMatrix::zeros(2);
            for m in 1..4 {
                let eps = levi_civita(k - 1, l - 1, m - 1);
                if eps != 0.0 {
                    rhs = rhs
                        .add(&s[m].scale(num_complex::Complex64::new(0.0, eps)))
                        .expect("2x2");
                }
            }
            worst = worst.max(lhs.defect(&rhs).expect("2x2"));
        }
    }
    worst
}

/// `ε_ijk` on `{0,1,2}`.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Drift of `𝒞` along the RK4 flow of the Hamiltonian field of `x_k`.
pub fn casimir_drift(a: [f64; 3], k: usize, start: &[f64], dt: f64, steps: usize) -> Result<f64> {
    let t = TensorField::new(FiniteAlgebra::three_dimensional(a)?);
    if k >= 3 {
        return Err(Error::IndexOutOfRange { index: k, dim: 3 });
    }
    let field = hamiltonian_flow(&t, k);
    let end = fields::rk4(&field, start, dt, steps);
    let c = casimir(a);
    Ok((c.eval(&end) - c.eval(start)).abs())
}

/// Least-squares closure of a family of vector fields under the bracket.
/// A vector field on the dual, given by its components at a point.
pub type VectorField<'a> = &'a dyn Fn(&[f64]) -> Vec<f64>;

#[derive(Debug, Clone)]
pub struct ClosureFit {
    /// `structure[a][b][c]`: coefficient of field `c` in `[F_a, F_b]`.
    pub structure: Vec<Vec<Vec<f64>>>,
    /// Largest residual of the fit over all pairs and sample points.
    pub residual: f64,
    /// Numbers of positive, negative, and null Killing form eigenvalues.
    pub killing_signature: (usize, usize, usize),
}

/// Fits every finite-difference bracket `[F_a, F_b]`, sampled at `points`,
/// as a constant linear combination of the fields themselves.
pub fn closure_fit(
    family: &[VectorField<'_>],
    points: &[Vec<f64>],
) -> Result<ClosureFit> {
    let n = family.len();
    if n == 0 || points.is_empty() {
        return Err(Error::Invalid("empty family or point set".into()));
    }
    let d = points[0].len();
    let rows = d * points.len();
    let mut design = DMatrix::zeros(rows, n);
    for (c, f) in family.iter().enumerate() {
        for (p, x) in points.iter().enumerate() {
            let v = f(x);
            for j in 0..d {
                design[(p * d + j, c)] = v[j];
            }
        }
    }
    let svd = design.clone().svd(true, true);
    let mut structure = vec![vec![vec![0.0; n]; n]; n];
    let mut residual = 0.0_f64;
    for a in 0..n {
        for b in 0..n {
            let mut target = DVector::zeros(rows);
            for (p, x) in points.iter().enumerate() {
                let br = fields::lie_bracket(family[a], family[b], x);
                for j in 0..d {
                    target[p * d + j] = br[j];
                }
            }
            let coeffs = svd
                .solve(&target, 1e-12)
                .map_err(|e| Error::Invalid(e.to_string()))?;
            residual = residual.max((&design * &coeffs - &target).amax());
            for c in 0..n {
                structure[a][b][c] = coeffs[c];
            }
        }
    }
    // Killing form K_ab = Tr(ad_a ad_b) with (ad_a)_{cb} = structure[a][b][c]
    let ad = |a: usize| DMatrix::from_fn(n, n, |c, b| structure[a][b][c]);
    let killing = DMatrix::from_fn(n, n, |a, b| (ad(a) * ad(b)).trace());
    let eig = nalgebra::SymmetricEigen::new((&killing + killing.transpose()) * 0.5);
    let scale = eig.eigenvalues.amax().max(1.0);
    let mut sig = (0, 0, 0);
    for &e in eig.eigenvalues.iter() {
        if e > 1e-6 * scale {
            sig.0 += 1;
        } else if e < -1e-6 * scale {
            sig.1 += 1;
        } else {
            sig.2 += 1;
        }
    }
    Ok(ClosureFit {
        structure,
        residual,
        killing_signature: sig,
    })
}
