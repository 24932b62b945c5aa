//! GNS construction for states over `B(ℂⁿ)`.
//!
//! For a state `ω` of rank `m` with eigenpairs `(p_j, v_j)` the quotient
//! `𝒜/𝒥_ω` is represented by the classes of `v_k v_j†` (`j < m`), which
//! are Gram–Schmidt orthonormalized under `⟨a|b⟩_ω = ω(a*b)` in column-major
//! order (`j` outer, `k` inner). Every derived quantity, the representation
//! matrices, the cyclic vector and the intertwiner, is then read off through
//! the pairing alone.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::ComplexMatrix;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::state::{self, make_state, DensityState};

/// Threshold on `‖π(b)Ω‖` below which a vector state is undefined.
pub const NULL_VECTOR_THRESHOLD: f64 = 1e-6;
/// Relative singular-value cutoff for the commutant null space.
pub const COMMUTANT_SVD_THRESHOLD: f64 = 1e-9;

/// `⟨a|b⟩_ω = ω(a*b) = Tr(b ω a†)`.
pub fn gns_pairing(omega: &DensityState, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    check_dim(omega, a)?;
    check_dim(omega, b)?;
    Ok(pairing_raw(omega.matrix().as_matrix(), a.as_matrix(), b.as_matrix()))
}

fn pairing_raw(omega: &CMat, a: &CMat, b: &CMat) -> Complex64 {
    linalg::trace_of_product(&(a.adjoint() * b), omega)
}

fn check_dim(omega: &DensityState, a: &ComplexMatrix) -> Result<()> {
    if a.dim() != omega.dim() {
        return Err(Error::DimensionMismatch {
            expected: omega.dim(),
            found: a.dim(),
        });
    }
    Ok(())
}

/// Basis of the left ideal `{X : ω(X*X) = 0} = {X : X·P_supp = 0}`, made of
/// `e_k v_j†` for the kernel eigenvectors `v_j`, column-major.
pub fn gelfand_ideal_basis(omega: &DensityState) -> Vec<ComplexMatrix> {
    let n = omega.dim();
    let m = omega.rank();
    let mut basis = Vec::with_capacity(n * (n - m));
    for j in m..n {
        let v = omega.eigenvector(j);
        for k in 0..n {
            let x = CMat::from_fn(n, n, |r, c| if r == k { v[c].conj() } else { linalg::ZERO });
            basis.push(ComplexMatrix::new(x).expect("finite"));
        }
    }
    basis
}

/// The output of a GNS run.
#[derive(Clone, Debug)]
pub struct GnsRealization {
    source_state: DensityState,
    algebra_dim: usize,
    rank: usize,
    quotient_basis: Vec<ComplexMatrix>,
    cyclic_vector: CVec,
    cyclic_norm_before_normalization: f64,
    intertwiner: CMat,
}

/// Result of the commutant computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityReport {
    pub commutant_dim: usize,
    pub is_irreducible: bool,
    pub block_count: usize,
}

/// One irreducible summand of a mixed-state representation.
#[derive(Clone, Debug)]
pub struct MixedComponent {
    /// Eigenvalue of the source state, exactly as stored.
    pub weight: f64,
    /// `⟨Ω_α|Ω_α⟩` measured in the realization.
    pub cyclic_weight: f64,
    pub state: DensityState,
    pub realization: GnsRealization,
}

/// The state induced by a vector `Ψ = π(b)Ω`.
#[derive(Clone, Debug)]
pub struct VectorState {
    pub state: DensityState,
    /// `max_a |⟨Ψ|π(a)Ψ⟩ − ω(b*ab)/ω(b*b)|` over the supplied samples.
    pub defect: f64,
}

pub fn build_gns(omega: &DensityState) -> GnsRealization {
    let n = omega.dim();
    let m = omega.rank();
    let w = omega.matrix().as_matrix();

    let mut basis: Vec<CMat> = Vec::with_capacity(n * m);
    for j in 0..m {
        let vj = omega.eigenvector(j);
        for k in 0..n {
            let vk = omega.eigenvector(k);
            let mut s = &vk * vj.adjoint();
            for q in &basis {
                let c = pairing_raw(w, q, &s);
                s -= q * c;
            }
            let norm = pairing_raw(w, &s, &s).re.max(0.0).sqrt();
            basis.push(s.unscale(norm));
        }
    }

    let d = basis.len();
    let id = CMat::identity(n, n);
    let raw_cyclic = CVec::from_fn(d, |a, _| pairing_raw(w, &basis[a], &id));
    let cyclic_norm = raw_cyclic.norm();
    let cyclic_vector = raw_cyclic.unscale(cyclic_norm);

    // normal-form vectors e_k v_j† / √p_j, indexed j·n + k
    let p = omega.eigenvalues();
    let mut intertwiner = CMat::zeros(d, d);
    for j in 0..m {
        let vj = omega.eigenvector(j);
        for k in 0..n {
            let phi = CMat::from_fn(n, n, |r, c| {
                if r == k {
                    vj[c].conj() / p[j].sqrt()
                } else {
                    linalg::ZERO
                }
            });
            for (alpha, b) in basis.iter().enumerate() {
                intertwiner[(j * n + k, alpha)] = pairing_raw(w, &phi, b);
            }
        }
    }

    GnsRealization {
        source_state: omega.clone(),
        algebra_dim: n,
        rank: m,
        quotient_basis: basis
            .into_iter()
            .map(|b| ComplexMatrix::new(b).expect("finite"))
            .collect(),
        cyclic_vector,
        cyclic_norm_before_normalization: cyclic_norm,
        intertwiner,
    }
}

impl GnsRealization {
    pub fn source_state(&self) -> &DensityState {
        &self.source_state
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn hilbert_dim(&self) -> usize {
        self.quotient_basis.len()
    }

    pub fn ideal_dim(&self) -> usize {
        self.algebra_dim * self.algebra_dim - self.hilbert_dim()
    }

    pub fn quotient_basis(&self) -> &[ComplexMatrix] {
        &self.quotient_basis
    }

    pub fn cyclic_vector(&self) -> &CVec {
        &self.cyclic_vector
    }

    /// `‖Ψ_𝟙‖` before it was renormalized; equals `√ω(𝟙) = 1` up to
    /// round-off.
    pub fn cyclic_norm_before_normalization(&self) -> f64 {
        self.cyclic_norm_before_normalization
    }

    /// Unitary `U` with `U π(a) U† = I_m ⊗ a`.
    pub fn intertwiner(&self) -> &CMat {
        &self.intertwiner
    }

    /// `π_ω(a)`, the matrix of `Ψ_b ↦ Ψ_{ab}` in the quotient basis.
    pub fn represent(&self, a: &ComplexMatrix) -> Result<CMat> {
        check_dim(&self.source_state, a)?;
        Ok(self.represent_raw(a.as_matrix()))
    }

    fn represent_raw(&self, a: &CMat) -> CMat {
        let w = self.source_state.matrix().as_matrix();
        let d = self.hilbert_dim();
        let images: Vec<CMat> = self
            .quotient_basis
            .iter()
            .map(|b| a * b.as_matrix())
            .collect();
        CMat::from_fn(d, d, |r, c| {
            pairing_raw(w, self.quotient_basis[r].as_matrix(), &images[c])
        })
    }

    /// Coordinates of the class of `a` in the quotient basis.
    pub fn class_of(&self, a: &ComplexMatrix) -> Result<CVec> {
        check_dim(&self.source_state, a)?;
        let w = self.source_state.matrix().as_matrix();
        Ok(CVec::from_fn(self.hilbert_dim(), |r, _| {
            pairing_raw(w, self.quotient_basis[r].as_matrix(), a.as_matrix())
        }))
    }

    /// `max |⟨b_i|b_j⟩_ω − δ_ij|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let w = self.source_state.matrix().as_matrix();
        let d = self.hilbert_dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let g = pairing_raw(
                    w,
                    self.quotient_basis[i].as_matrix(),
                    self.quotient_basis[j].as_matrix(),
                );
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }

    /// `‖U π(a) U† − I_m ⊗ a‖_max` relative, maximized over samples, together
    /// with `‖UU† − I‖_max`.
    pub fn intertwiner_defect(&self, samples: &[ComplexMatrix]) -> Result<f64> {
        let u = &self.intertwiner;
        let d = self.hilbert_dim();
        let mut worst = linalg::max_abs_diff(&(u * u.adjoint()), &CMat::identity(d, d));
        let im = CMat::identity(self.rank, self.rank);
        for a in samples {
            let lhs = u * self.represent(a)? * u.adjoint();
            let rhs = linalg::kron(&im, a.as_matrix());
            worst = worst.max(linalg::relative_defect(&lhs, &rhs));
        }
        Ok(worst)
    }

    /// Homomorphism and `*`-preservation defect over pairs of samples.
    pub fn representation_defect(&self, samples: &[ComplexMatrix]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for pair in samples.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let pa = self.represent(a)?;
            let pb = self.represent(b)?;
            let pab = self.represent(&a.mul(b)?)?;
            worst = worst.max(linalg::relative_defect(&pab, &(&pa * &pb)));
            let pstar = self.represent(&a.adjoint())?;
            worst = worst.max(linalg::relative_defect(&pstar, &pa.adjoint()));
        }
        Ok(worst)
    }

    pub fn is_faithful(&self) -> bool {
        self.ideal_dim() == 0
    }
}

/// `max |ω(a) − ⟨Ω|π(a)Ω⟩|` over the samples.
pub fn verify_cyclic(g: &GnsRealization, samples: &[ComplexMatrix]) -> Result<f64> {
    let omega = g.source_state();
    let o = g.cyclic_vector();
    let mut worst: f64 = 0.0;
    for a in samples {
        let lhs = state::evaluate(omega, a)?;
        let rhs = linalg::inner(o, &(g.represent(a)? * o));
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// State of the normalized vector `Ψ = π(b)Ω/‖π(b)Ω‖`.
///
/// The returned density is `bωb†/Tr(bωb†)`; `defect` compares
/// `⟨Ψ|π(a)Ψ⟩` with `ω(b*ab)/ω(b*b)` over `samples`.
pub fn vector_state(
    g: &GnsRealization,
    b: &ComplexMatrix,
    samples: &[ComplexMatrix],
) -> Result<VectorState> {
    let omega = g.source_state();
    let psi = g.represent(b)? * g.cyclic_vector();
    let norm = psi.norm();
    if norm < NULL_VECTOR_THRESHOLD {
        return Err(Error::NullVector { norm });
    }
    let psi = psi.unscale(norm);
    let bsb = state::evaluate(omega, &b.adjoint().mul(b)?)?.re;
    let mut defect: f64 = 0.0;
    for a in samples {
        let lhs = linalg::inner(&psi, &(g.represent(a)? * &psi));
        let bab = b.adjoint().mul(a)?.mul(b)?;
        let rhs = state::evaluate(omega, &bab)? / bsb;
        defect = defect.max((lhs - rhs).norm());
    }
    let w = omega.matrix().as_matrix();
    let induced = b.as_matrix() * w * b.as_matrix().adjoint();
    let state = make_state(&ComplexMatrix::new(induced)?)?;
    Ok(VectorState { state, defect })
}

/// Algebra state `a ↦ Tr(ρ π_ω(a))` of a density operator `ρ` on `ℋ_ω`,
/// i.e. a member of the folium of `π_ω`.
pub fn folium_state(g: &GnsRealization, rho: &ComplexMatrix) -> Result<DensityState> {
    let d = g.hilbert_dim();
    if rho.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho.dim(),
        });
    }
    let rho = make_state(rho)?;
    let n = g.algebra_dim();
    let mut sigma = CMat::zeros(n, n);
    for k in 0..n {
        for l in 0..n {
            let e = ComplexMatrix::elementary(n, k, l);
            sigma[(l, k)] = linalg::trace_of_product(rho.matrix().as_matrix(), &g.represent(&e)?);
        }
    }
    make_state(&ComplexMatrix::new(sigma)?)
}

/// Commutant of `π_ω(𝒜)` as the null space of `T π(E_kl) − π(E_kl) T = 0`
/// stacked over all elementary matrices.
pub fn irreducibility(g: &GnsRealization) -> IrreducibilityReport {
    let n = g.algebra_dim();
    let d = g.hilbert_dim();
    let dd = d * d;
    let id = CMat::identity(d, d);
    let mut system = CMat::zeros(n * n * dd, dd);
    for k in 0..n {
        for l in 0..n {
            let mut e = CMat::zeros(n, n);
            e[(k, l)] = linalg::ONE;
            let pi = g.represent_raw(&e);
            // vec(Tπ − πT) = (πᵀ ⊗ I − I ⊗ π) vec(T), column-major vec
            let block = linalg::kron(&pi.transpose(), &id) - linalg::kron(&id, &pi);
            let row = (k * n + l) * dd;
            system.view_mut((row, 0), (dd, dd)).copy_from(&block);
        }
    }
    // R from a QR factorization carries the same singular values as the
    // tall stacked system at a fraction of the SVD cost.
    let r = system.qr().r();
    let commutant_dim = linalg::null_space_dim(&r, COMMUTANT_SVD_THRESHOLD);
    IrreducibilityReport {
        commutant_dim,
        is_irreducible: commutant_dim == 1,
        block_count: g.rank(),
    }
}

/// Splits `π_ω` into its irreducible summands.
///
/// Block `α` is the image of `e_α ⊗ ℂⁿ` under `U†`; its weight
/// `p_α = ⟨Ω_α|Ω_α⟩` and pure state `φ_α(a) = ⟨Ω_α|π(a)Ω_α⟩/p_α` are read
/// off the realization, and each `φ_α` is realized again on its own.
pub fn decompose_mixed(g: &GnsRealization) -> Result<Vec<MixedComponent>> {
    let n = g.algebra_dim();
    let m = g.rank();
    let u = g.intertwiner();
    let omega_vec = g.cyclic_vector();
    let elementary: Vec<CMat> = (0..n * n)
        .map(|idx| {
            let mut e = CMat::zeros(n, n);
            e[(idx / n, idx % n)] = linalg::ONE;
            g.represent_raw(&e)
        })
        .collect();
    let weights = g.source_state().weights();
    let mut out = Vec::with_capacity(m);
    for (alpha, &weight) in weights.iter().enumerate() {
        let mut selector = CMat::zeros(m, m);
        selector[(alpha, alpha)] = linalg::ONE;
        let proj = u.adjoint() * linalg::kron(&selector, &CMat::identity(n, n)) * u;
        let omega_alpha = &proj * omega_vec;
        let cyclic_weight = omega_alpha.norm_squared();
        let mut sigma = CMat::zeros(n, n);
        for k in 0..n {
            for l in 0..n {
                let v = linalg::inner(&omega_alpha, &(&elementary[k * n + l] * &omega_alpha));
                sigma[(l, k)] = v / cyclic_weight;
            }
        }
        let phi = make_state(&ComplexMatrix::new(sigma)?)?;
        let realization = build_gns(&phi);
        out.push(MixedComponent {
            weight,
            cyclic_weight,
            state: phi,
            realization,
        });
    }
    Ok(out)
}

/// `max |Σ p_α φ_α − ω|` for a decomposition.
pub fn reconstruction_defect(source: &DensityState, parts: &[MixedComponent]) -> Result<f64> {
    let weights: Vec<f64> = parts.iter().map(|c| c.weight).collect();
    let states: Vec<DensityState> = parts.iter().map(|c| c.state.clone()).collect();
    let rebuilt = state::convex_combine(&weights, &states)?;
    Ok(linalg::max_abs_diff(
        rebuilt.matrix().as_matrix(),
        source.matrix().as_matrix(),
    ))
}

/// Matrix with `Ψ_a` coordinates as columns for every elementary matrix;
/// handy for brute-force checks.
pub fn elementary_classes(g: &GnsRealization) -> Result<DMatrix<Complex64>> {
    let n = g.algebra_dim();
    let d = g.hilbert_dim();
    let mut m = CMat::zeros(d, n * n);
    for idx in 0..n * n {
        let e = ComplexMatrix::elementary(n, idx % n, idx / n);
        m.set_column(idx, &g.class_of(&e)?);
    }
    Ok(m)
}
