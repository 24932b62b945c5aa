//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line, then exits nonzero if any
//! criterion failed.

use std::panic::{self, AssertUnwindSafe};
use std::process::Command;

use nalgebra::DMatrix;
use num_complex::Complex64;

use gns_geometry::algebra::{fit_associator_constant, jordan_product, lie_product, ComplexMatrix};
use gns_geometry::biham;
use gns_geometry::dual::{self, FiniteAlgebra, TensorField};
use gns_geometry::error::Error;
use gns_geometry::fields;
use gns_geometry::gns;
use gns_geometry::kahler::{self, Classification, KahlerFunction, RayPoint};
use gns_geometry::linalg::CVec;
use gns_geometry::poly::Polynomial;
use gns_geometry::sampling;
use gns_geometry::state::{make_state, DensityState};

type CMat = DMatrix<Complex64>;
type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn observables(rng: &mut sampling::Rng, n: usize, count: usize) -> Vec<ComplexMatrix> {
    (0..count).map(|_| sampling::complex_matrix(rng, n)).collect()
}

fn gns_rank_one() -> Outcome {
    let mut rng = sampling::rng(1);
    let mut worst = 0.0_f64;
    for n in 2..=4 {
        for _ in 0..5 {
            let psi = sampling::random_ray(&mut rng, n);
            let state = DensityState::pure(psi.as_slice()).map_err(|e| e.to_string())?;
            let g = gns::build_gns(&state);
            let irr = gns::irreducibility(&g);
            ensure(g.hilbert_dim() == n, || format!("n={n}: hilbert_dim {}", g.hilbert_dim()))?;
            ensure(g.ideal_dim() == n * n - n, || format!("n={n}: ideal_dim {}", g.ideal_dim()))?;
            ensure(irr.commutant_dim == 1, || format!("n={n}: commutant_dim {}", irr.commutant_dim))?;
            let samples = observables(&mut rng, n, 100);
            let d = gns::verify_cyclic(&g, &samples).map_err(|e| e.to_string())?;
            // ⟨Ω|π(a)Ω⟩ against Tr(ρa), computed here without the library
            for a in &samples {
                let direct = (state.matrix().as_matrix() * a.as_matrix()).trace();
                let omega = g.cyclic_vector();
                let via = omega.dotc(&(g.represent(a).map_err(|e| e.to_string())? * omega));
                worst = worst.max((direct - via).norm());
            }
            worst = worst.max(d);
        }
    }
    ensure(worst <= 1e-10, || format!("cyclic defect {worst:e} > 1e-10"))?;
    Ok(format!("n=2..4, cyclic defect {worst:.1e}"))
}

fn gns_rank_m() -> Outcome {
    let mut rng = sampling::rng(2);
    let mut worst = 0.0_f64;
    for (n, m) in [(2, 2), (3, 2), (3, 3)] {
        let state = make_state(&sampling::state_matrix_of_rank(&mut rng, n, m)).map_err(|e| e.to_string())?;
        let g = gns::build_gns(&state);
        let irr = gns::irreducibility(&g);
        ensure(g.hilbert_dim() == n * m, || format!("(n,m)=({n},{m}): hilbert_dim {}", g.hilbert_dim()))?;
        ensure(irr.commutant_dim == m * m, || format!("(n,m)=({n},{m}): commutant_dim {}", irr.commutant_dim))?;
        let samples = observables(&mut rng, n, 50);
        worst = worst.max(g.intertwiner_defect(&samples).map_err(|e| e.to_string())?);
        // independent: U π(a) U† against I_m ⊗ a built entrywise
        let u = g.intertwiner();
        for a in &samples {
            let lhs = u * g.represent(a).map_err(|e| e.to_string())? * u.adjoint();
            let mut rhs = CMat::zeros(n * m, n * m);
            for b in 0..m {
                for i in 0..n {
                    for j in 0..n {
                        rhs[(b * n + i, b * n + j)] = a.get(i, j);
                    }
                }
            }
            worst = worst.max(max_abs(&(lhs - &rhs)) / max_abs(&rhs).max(1.0));
        }
    }
    ensure(worst <= 1e-9, || format!("intertwiner defect {worst:e} > 1e-9"))?;
    Ok(format!("intertwiner defect {worst:.1e}"))
}

fn mixed_decomposition() -> Outcome {
    let mut rng = sampling::rng(3);
    let (mut wgap, mut rec) = (0.0_f64, 0.0_f64);
    for n in 2..=4 {
        for m in 1..=n {
            let state = make_state(&sampling::state_matrix_of_rank(&mut rng, n, m)).map_err(|e| e.to_string())?;
            let g = gns::build_gns(&state);
            let parts = gns::decompose_mixed(&g).map_err(|e| e.to_string())?;
            let mut w: Vec<f64> = parts.iter().map(|p| p.weight).collect();
            let mut ev = state.weights();
            w.sort_by(f64::total_cmp);
            ev.sort_by(f64::total_cmp);
            ensure(w.len() == ev.len(), || format!("{} parts for rank {}", w.len(), ev.len()))?;
            for (x, y) in w.iter().zip(&ev) {
                wgap = wgap.max((x - y).abs());
            }
            for p in &parts {
                wgap = wgap.max((p.cyclic_weight - p.weight).abs());
            }
            let mut sum = CMat::zeros(n, n);
            for p in &parts {
                sum += p.state.matrix().as_matrix() * c(p.weight);
            }
            rec = rec.max(max_abs(&(sum - state.matrix().as_matrix())));
            rec = rec.max(gns::reconstruction_defect(&state, &parts).map_err(|e| e.to_string())?);
        }
    }
    ensure(wgap <= 1e-10, || format!("weight gap {wgap:e}"))?;
    ensure(rec <= 1e-10, || format!("reconstruction defect {rec:e} > 1e-10"))?;
    Ok(format!("weight gap {wgap:.1e}, reconstruction {rec:.1e}"))
}

fn lie_jordan_axioms() -> Outcome {
    let mut rng = sampling::rng(4);
    let mut triples = Vec::new();
    for i in 0..500 {
        let n = 2 + i % 3;
        triples.push((
            sampling::hermitian(&mut rng, n).into_complex(),
            sampling::hermitian(&mut rng, n).into_complex(),
            sampling::hermitian(&mut rng, n).into_complex(),
        ));
    }
    let rel = |x: &ComplexMatrix, y: &ComplexMatrix, scale: f64| x.defect(y).expect("same dim") / scale.max(1.0);
    let (mut leib, mut jac) = (0.0_f64, 0.0_f64);
    // oracle fit on raw matrices: ½{x,y} and (i/2)[x,y]
    let jo = |x: &CMat, y: &CMat| (x * y + y * x) * c(0.5);
    let li = |x: &CMat, y: &CMat| (x * y - y * x) * Complex64::new(0.0, 0.5);
    let (mut num, mut den) = (0.0, 0.0);
    for (a, b, cc) in &triples {
        let scale = a.max_norm() * b.max_norm() * cc.max_norm();
        let l = |x: &ComplexMatrix, y: &ComplexMatrix| lie_product(x, y).expect("same dim");
        let j = |x: &ComplexMatrix, y: &ComplexMatrix| jordan_product(x, y).expect("same dim");
        let lhs = l(a, &j(b, cc));
        let rhs = j(&l(a, b), cc).add(&j(b, &l(a, cc))).expect("same dim");
        leib = leib.max(rel(&lhs, &rhs, scale));
        let cyc = l(a, &l(b, cc)).add(&l(b, &l(cc, a))).expect("same dim").add(&l(cc, &l(a, b))).expect("same dim");
        jac = jac.max(cyc.max_norm() / scale.max(1.0));
        let (x, y, z) = (a.as_matrix(), b.as_matrix(), cc.as_matrix());
        let assoc = jo(&jo(x, y), z) - jo(x, &jo(y, z));
        let target = li(&li(x, z), y);
        for (p, q) in assoc.iter().zip(target.iter()) {
            num += (q.conj() * p).re;
            den += q.norm_sqr();
        }
    }
    let oracle = num / den;
    let (fitted, resid) = fit_associator_constant(&triples).map_err(|e| e.to_string())?;
    ensure(leib <= 1e-10, || format!("Leibniz defect {leib:e}"))?;
    ensure(jac <= 1e-10, || format!("Jacobi defect {jac:e}"))?;
    ensure((oracle - 1.0).abs() <= 1e-8, || format!("oracle λ² = {oracle}"))?;
    ensure((fitted - 1.0).abs() <= 1e-8, || format!("fitted λ² = {fitted}"))?;
    ensure(resid <= 1e-8, || format!("associator residual {resid:e}"))?;
    Ok(format!("λ² = {fitted:.12}, Leibniz {leib:.1e}, Jacobi {jac:.1e}"))
}

fn casimir_annihilation() -> Outcome {
    let mut rng = sampling::rng(5);
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let a = [0, 1, 2].map(|_| sampling::uniform(&mut rng, -2.0, 2.0));
        let t = TensorField::new(FiniteAlgebra::three_dimensional(a).map_err(|e| e.to_string())?);
        let cas = dual::casimir(a);
        for _ in 0..50 {
            let x: Vec<f64> = (0..3).map(|_| sampling::gaussian(&mut rng)).collect();
            let p = dual::DualPoint::new(x.clone()).map_err(|e| e.to_string())?;
            // Λ^{12} = a3 x3, Λ^{23} = a1 x1, Λ^{31} = a2 x2
            let mut lam = [[0.0; 3]; 3];
            for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
                lam[i][j] = a[k] * x[k];
                lam[j][i] = -a[k] * x[k];
            }
            for k in 0..3 {
                let lib = dual::poisson_bracket(&t, &cas, &Polynomial::coordinate(3, k).unwrap(), &p)
                    .map_err(|e| e.to_string())?;
                let direct: f64 = (0..3).map(|i| a[i] * x[i] * lam[i][k]).sum();
                worst = worst.max(lib.abs()).max(direct.abs());
            }
        }
    }
    ensure(worst <= 1e-12, || format!("max |Λ(d𝒞, dx_k)| = {worst:e} > 1e-12"))?;
    Ok(format!("max |Λ(d𝒞, dx_k)| = {worst:.1e}"))
}

fn u2_fields() -> Outcome {
    let mut rng = sampling::rng(6);
    let (lam, r) = dual::u2_tensors();
    let (mut closed, mut h0) = (0.0_f64, 0.0_f64);
    let (mut spatial, mut temporal) = (0.0_f64, 0.0_f64);
    for _ in 0..100 {
        let y: Vec<f64> = (0..4).map(|_| sampling::gaussian(&mut rng)).collect();
        let p = dual::DualPoint::new(y.clone()).map_err(|e| e.to_string())?;
        let hz = dual::hamiltonian_field(&lam, 0, &p).map_err(|e| e.to_string())?;
        h0 = h0.max(hz.iter().fold(0.0, |m: f64, v| m.max(v.abs())));
        for k in 1..4 {
            let h = dual::hamiltonian_field(&lam, k, &p).map_err(|e| e.to_string())?;
            let mut want = [0.0; 4];
            for (l, w) in want.iter_mut().enumerate().skip(1) {
                *w = (1..4).map(|m| dual::levi_civita(k - 1, l - 1, m - 1) * y[m]).sum();
            }
            let x = dual::gradient_field(&r, k, &p).map_err(|e| e.to_string())?;
            let mut wx = [0.0; 4];
            wx[0] = y[k];
            wx[k] = y[0];
            for j in 0..4 {
                closed = closed.max((h[j] - want[j]).abs()).max((x[j] - wx[j]).abs());
            }
        }
        let x0 = dual::gradient_field(&r, 0, &p).map_err(|e| e.to_string())?;
        for j in 0..4 {
            closed = closed.max((x0[j] - y[j]).abs());
        }
        let flows: Vec<_> = (0..4).map(|k| dual::gradient_flow(&r, k)).collect();
        for al in 0..4 {
            for be in 0..4 {
                let br = fields::lie_bracket(&flows[al], &flows[be], &y);
                let mut want = [0.0; 4];
                want[be] += y[al];
                want[al] -= y[be];
                let gap = (0..4).fold(0.0_f64, |m, j| m.max((br[j] - want[j]).abs()));
                if al == 0 || be == 0 {
                    temporal = temporal.max(gap);
                } else {
                    spatial = spatial.max(gap);
                }
            }
        }
    }
    ensure(h0 == 0.0, || format!("H0 not identically zero: {h0:e}"))?;
    ensure(closed <= 1e-12, || format!("closed-form mismatch {closed:e}"))?;
    let detail = format!("closed forms {closed:.1e}; [X_a,X_b] pairs in 1..3 {spatial:.1e}, pairs with index 0 {temporal:.1e}");
    ensure(spatial <= 1e-8 && temporal <= 1e-8, || format!("[X_a,X_b] identity fails ({detail})"))?;
    Ok(detail)
}

fn binom(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn spectrum_table() -> Outcome {
    for n in 1..=4u32 {
        let table = kahler::laplacian_spectrum(n, 4).map_err(|e| e.to_string())?;
        ensure(table.len() == 5, || format!("n={n}: {} rows", table.len()))?;
        for e in &table {
            let l = e.l as u128;
            let nn = n as u128;
            let want = if l == 0 {
                1
            } else {
                binom(nn + l, l).pow(2) - binom(nn + l - 1, l - 1).pow(2)
            };
            let eig = -(e.l as i64) * (n as i64 + e.l as i64);
            ensure(e.eigenvalue == eig, || format!("λ_{{{n},{}}} = {}", e.l, e.eigenvalue))?;
            ensure(e.multiplicity == want.into(), || format!("N_{{{n},{}}} = {} (want {want})", e.l, e.multiplicity))?;
            if n == 1 {
                ensure(e.multiplicity == (2 * e.l + 1).into(), || format!("N_{{1,{}}}", e.l))?;
            }
            if e.l == 1 {
                ensure(e.multiplicity == ((n + 1) * (n + 1) - 1).into(), || format!("N_{{{n},1}}"))?;
            }
        }
    }
    Ok("n ≤ 4, l ≤ 4 exact".into())
}

fn kahler_classification() -> Outcome {
    let mut rng = sampling::rng(8);
    let constant = KahlerFunction::sampled(|_: &CVec| Complex64::new(1.0, 0.0));
    let r = kahler::kahler_test(&constant, 1, 100, &mut rng).map_err(|e| e.to_string())?;
    ensure(r.classification == Classification::Harmonic, || format!("constant: {:?}", r.classification))?;
    let pauli = gns_geometry::algebra::pauli();
    let mut lambdas = Vec::new();
    for (name, s) in [("x", &pauli[1]), ("y", &pauli[2]), ("z", &pauli[3])] {
        let f = KahlerFunction::Expectation(s.clone());
        let r = kahler::kahler_test(&f, 1, 100, &mut rng).map_err(|e| e.to_string())?;
        ensure(r.classification == Classification::FirstEigenspace, || format!("σ_{name}: {:?}", r.classification))?;
        ensure((r.measured_eigenvalue + 2.0).abs() <= 1e-2, || format!("σ_{name}: eigenvalue {}", r.measured_eigenvalue))?;
        lambdas.push(r.measured_eigenvalue);
    }
    let sz = pauli[3].as_matrix().clone();
    let sq = KahlerFunction::sampled(move |psi: &CVec| {
        let v = psi.dotc(&(&sz * psi)) / psi.norm_squared();
        v * v
    });
    let r = kahler::kahler_test(&sq, 1, 100, &mut rng).map_err(|e| e.to_string())?;
    ensure(r.classification == Classification::NotKahlerian, || format!("σ_z²: {:?}", r.classification))?;
    Ok(format!("measured eigenvalues {:?}", lambdas.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>()))
}

fn star_identity() -> Outcome {
    let mut rng = sampling::rng(9);
    let (mut worst, mut assoc) = (0.0_f64, 0.0_f64);
    for m in [2, 3] {
        for _ in 0..20 {
            let a = sampling::hermitian(&mut rng, m).into_complex();
            let b = sampling::hermitian(&mut rng, m).into_complex();
            let cm = sampling::hermitian(&mut rng, m).into_complex();
            let ab = a.mul(&b).unwrap();
            let bc = b.mul(&cm).unwrap();
            let abc = ab.mul(&cm).unwrap();
            for _ in 0..200 {
                let p = RayPoint::new(&sampling::random_ray(&mut rng, m)).map_err(|e| e.to_string())?;
                let psi = p.representative();
                let f = |x: &ComplexMatrix| psi.dotc(&(x.as_matrix() * psi)) / psi.norm_squared();
                let s = kahler::star_product(&a, &b, &p).map_err(|e| e.to_string())?;
                worst = worst.max(s.defect).max((s.value - f(&ab)).norm());
                let left = kahler::star_product(&ab, &cm, &p).map_err(|e| e.to_string())?;
                let right = kahler::star_product(&a, &bc, &p).map_err(|e| e.to_string())?;
                assoc = assoc.max((left.value - f(&abc)).norm()).max((right.value - f(&abc)).norm());
            }
        }
    }
    ensure(worst <= 1e-8, || format!("star defect {worst:e} > 1e-8"))?;
    ensure(assoc <= 1e-8, || format!("associativity defect {assoc:e} > 1e-8"))?;
    Ok(format!("star defect {worst:.1e}, associativity {assoc:.1e}"))
}

fn projectability() -> Outcome {
    let mut rng = sampling::rng(10);
    let mut worst = 0.0_f64;
    for m in [2, 3] {
        for _ in 0..10 {
            let fa = KahlerFunction::expectation(&sampling::hermitian(&mut rng, m));
            let fb = KahlerFunction::expectation(&sampling::hermitian(&mut rng, m));
            let psi = sampling::random_ray(&mut rng, m);
            let (g0, l0) = kahler::projectable_tensors(&psi, &fa, &fb).map_err(|e| e.to_string())?;
            for _ in 0..50 {
                let lambda = Complex64::from_polar(
                    sampling::uniform(&mut rng, 0.05, 20.0),
                    sampling::uniform(&mut rng, 0.0, std::f64::consts::TAU),
                );
                let scaled = psi.map(|z| z * lambda);
                let (g1, l1) = kahler::projectable_tensors(&scaled, &fa, &fb).map_err(|e| e.to_string())?;
                worst = worst.max((g1 - g0).norm()).max((l1 - l0).norm());
            }
        }
    }
    ensure(worst <= 1e-10, || format!("rescaling defect {worst:e} > 1e-10"))?;
    Ok(format!("rescaling defect {worst:.1e}"))
}

fn bihamiltonian() -> Outcome {
    let mut rng = sampling::rng(11);
    let (mut bracket, mut div, mut oracle) = (0.0_f64, 0.0_f64, 0.0_f64);
    for seed in 0..20u64 {
        let n = 2 + (seed as usize % 3);
        let (h, k) = biham::commuting_pair_generator(n, seed).map_err(|e| e.to_string())?;
        let hk = biham::deformed_hamiltonian(&k, &h).map_err(|e| e.to_string())?;
        let km = k.k().as_complex().as_matrix().clone();
        let hm = h.as_complex().as_matrix().clone();
        let hk_direct = km.clone().try_inverse().ok_or("K not invertible")? * &hm;
        for _ in 0..100 {
            let a = sampling::complex_matrix(&mut rng, n);
            bracket = bracket.max(biham::bracket_identity_defect(&k, &h, &hk, &a).map_err(|e| e.to_string())?);
            let am = a.as_matrix();
            let lhs = am * &hm - &hm * am;
            let rhs = am * &km * &hk_direct - &hk_direct * &km * am;
            bracket = bracket.max(max_abs(&(lhs - rhs)));
        }
        let a0 = sampling::complex_matrix(&mut rng, n);
        let run = biham::evolve_pair(&k, &h, &a0, 0.0, 1.0, 400).map_err(|e| e.to_string())?;
        div = div.max(run.max_divergence());
        let u = (&hm * Complex64::new(0.0, 1.0)).exp();
        let closed = &u * a0.as_matrix() * u.adjoint();
        let last = run.trajectory_def.last().ok_or("empty trajectory")?;
        oracle = oracle.max(max_abs(&(closed - last.as_matrix())));
    }
    let mut raised = 0;
    for seed in 0..20u64 {
        let n = 2 + (seed as usize % 3);
        let (h, k) = biham::non_commuting_pair(n, seed).map_err(|e| e.to_string())?;
        let a0 = ComplexMatrix::identity(n);
        let direct = matches!(biham::deformed_hamiltonian(&k, &h), Err(Error::NonCommuting { .. }));
        let evolve = matches!(biham::evolve_pair(&k, &h, &a0, 0.0, 1.0, 10), Err(Error::NonCommuting { .. }));
        if direct && evolve {
            raised += 1;
        }
    }
    ensure(bracket <= 1e-10, || format!("bracket identity defect {bracket:e} > 1e-10"))?;
    ensure(div <= 1e-8, || format!("trajectory divergence {div:e} > 1e-8"))?;
    ensure(oracle <= 1e-8, || format!("RK4 against matrix exponential {oracle:e} > 1e-8"))?;
    ensure(raised == 20, || format!("NonCommuting raised for {raised}/20 pairs"))?;
    Ok(format!("bracket {bracket:.1e}, divergence {div:.1e}, NonCommuting 20/20"))
}

fn write_matrix(dir: &std::path::Path, name: &str, m: &ComplexMatrix) -> String {
    let path = dir.join(name);
    std::fs::write(&path, m.to_json().to_string()).expect("write fixture");
    path.to_string_lossy().into_owned()
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_gnsgeo");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let mut rng = sampling::rng(12);
    let state = make_state(&sampling::state_matrix_of_rank(&mut rng, 3, 2)).map_err(|e| e.to_string())?;
    let state_path = d.join("state.json");
    std::fs::write(&state_path, state.to_json().to_string()).map_err(|e| e.to_string())?;
    let state_path = state_path.to_string_lossy().into_owned();
    let (h, k) = biham::commuting_pair_generator(3, 7).map_err(|e| e.to_string())?;
    let hp = write_matrix(d, "H.json", h.as_complex());
    let kp = write_matrix(d, "K.json", k.k().as_complex());
    let ap = write_matrix(d, "A0.json", &sampling::complex_matrix(&mut rng, 3));
    let sa = write_matrix(d, "a.json", sampling::hermitian(&mut rng, 3).as_complex());
    let sb = write_matrix(d, "b.json", sampling::hermitian(&mut rng, 3).as_complex());
    let sz = write_matrix(d, "sz.json", &gns_geometry::algebra::pauli()[3]);
    let commands: Vec<Vec<String>> = vec![
        vec!["gns", "build", "--state", &state_path],
        vec!["geom", "tensors", "--algebra", "u2", "--points", "20"],
        vec!["geom", "tensors", "--algebra", "threedim", "--a", "1,-2,0.5"],
        vec!["kahler", "spectrum", "--n", "3", "--lmax", "6"],
        vec!["kahler", "test", "--op", &sz],
        vec!["kahler", "star", "--a", &sa, "--b", &sb, "--samples", "50"],
        vec!["biham", "run", "--H", &hp, "--K", &kp, "--A0", &ap, "--steps", "100"],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    for (i, args) in commands.iter().enumerate() {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out = d.join(format!("r{i}_{run}.json"));
            let status = Command::new(bin)
                .args(args)
                .args(["--seed", "7", "--out"])
                .arg(&out)
                .output()
                .map_err(|e| e.to_string())?;
            ensure(status.status.code() == Some(0), || {
                format!("{}: exit {:?}: {}", args.join(" "), status.status.code(), String::from_utf8_lossy(&status.stderr))
            })?;
            outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
        }
        ensure(!outputs[0].is_empty() && outputs[0] == outputs[1], || format!("{}: reports differ", args.join(" ")))?;
    }
    Ok(format!("{} commands byte-identical across two runs", commands.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("GNS rank-1", gns_rank_one),
        ("GNS rank-m", gns_rank_m),
        ("mixed decomposition", mixed_decomposition),
        ("Lie-Jordan axioms", lie_jordan_axioms),
        ("Casimir annihilation", casimir_annihilation),
        ("u(2) fields", u2_fields),
        ("spectrum table", spectrum_table),
        ("Kähler classification on CP^1", kahler_classification),
        ("star-product identity", star_identity),
        ("projectability", projectability),
        ("bi-Hamiltonian equivalence", bihamiltonian),
        ("determinism", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
