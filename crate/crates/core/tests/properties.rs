use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use gns_geometry::algebra::ComplexMatrix;
use gns_geometry::biham;
use gns_geometry::dual::{self, FiniteAlgebra, TensorField};
use gns_geometry::gns;
use gns_geometry::kahler::{self, KahlerFunction, RayPoint};
use gns_geometry::report::{canonical_json, float, format_g17, RunReport, Verdict};
use gns_geometry::sampling;
use gns_geometry::state::make_state;

type CMat = DMatrix<Complex64>;

fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

fn dim_rank() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=4).prop_flat_map(|n| (Just(n), 1..=n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn density_state_invariants(seed in any::<u64>(), (n, m) in dim_rank()) {
        let mut rng = sampling::rng(seed);
        let s = make_state(&sampling::state_matrix_of_rank(&mut rng, n, m)).unwrap();
        let ev = s.eigenvalues();
        prop_assert!(ev.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(ev.iter().all(|&x| x >= 0.0));
        prop_assert!((ev.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!((s.matrix().trace().re - 1.0).abs() <= 1e-12);
        let u = s.eigenvectors();
        prop_assert!(max_abs(&(u.adjoint() * u - CMat::identity(n, n))) <= 1e-10);
        let r = s.state_rank();
        prop_assert_eq!(r.rank, m);
        let p = r.support_projector.as_matrix();
        prop_assert!(max_abs(&(p * p - p)) <= 1e-10);
        prop_assert!(max_abs(&(p - p.adjoint())) <= 1e-10);
        prop_assert_eq!(s.is_pure(), s.is_pure_by_purity());
        prop_assert_eq!(s.is_pure(), m == 1);
    }

    #[test]
    fn gns_realization_invariants(seed in any::<u64>(), (n, m) in dim_rank()) {
        let mut rng = sampling::rng(seed);
        let s = make_state(&sampling::state_matrix_of_rank(&mut rng, n, m)).unwrap();
        let g = gns::build_gns(&s);
        prop_assert_eq!(g.hilbert_dim() + g.ideal_dim(), n * n);
        prop_assert_eq!(g.hilbert_dim(), n * m);
        prop_assert!(g.orthonormality_defect() <= 1e-10);
        prop_assert!((g.cyclic_vector().norm() - 1.0).abs() <= 1e-10);
        let class_of_one = g.class_of(&ComplexMatrix::identity(n)).unwrap();
        prop_assert!((class_of_one - g.cyclic_vector()).iter().all(|z| z.norm() <= 1e-10));
        let irr = gns::irreducibility(&g);
        prop_assert_eq!(irr.is_irreducible, irr.commutant_dim == 1);
        prop_assert_eq!(irr.is_irreducible, s.is_pure());
    }

    #[test]
    fn three_dimensional_poisson_tensor(a in prop::array::uniform3(-3.0f64..3.0), seed in any::<u64>()) {
        let alg = FiniteAlgebra::three_dimensional(a).unwrap();
        prop_assert!(alg.antisymmetry_defect() <= 1e-12);
        prop_assert!(alg.jacobi_defect() <= 1e-12);
        let t = TensorField::new(alg);
        let mut rng = sampling::rng(seed);
        let x: Vec<f64> = (0..3).map(|_| sampling::gaussian(&mut rng)).collect();
        let c = t.components(&x);
        prop_assert!((&c + c.transpose()).amax() <= 1e-14);
    }

    #[test]
    fn u2_riemann_tensor_is_symmetric(seed in any::<u64>()) {
        let (lam, r) = dual::u2_tensors();
        prop_assert!(r.algebra().symmetry_defect() == 0.0);
        let mut rng = sampling::rng(seed);
        let y: Vec<f64> = (0..4).map(|_| sampling::gaussian(&mut rng)).collect();
        let g = r.components(&y);
        let l = lam.components(&y);
        prop_assert!((&g - g.transpose()).amax() <= 1e-14);
        prop_assert!((&l + l.transpose()).amax() <= 1e-14);
    }

    #[test]
    fn ray_point_invariants(seed in any::<u64>(), n in 1usize..=4, scale in 0.01f64..100.0) {
        let mut rng = sampling::rng(seed);
        let psi = sampling::complex_vector(&mut rng, n + 1).map(|z| z * scale);
        let p = RayPoint::new(&psi).unwrap();
        let rep = p.representative();
        prop_assert!((rep.norm() - 1.0).abs() <= 1e-12);
        let j = p.chart_index();
        prop_assert!(rep[j].norm() >= 1.0 / ((n + 1) as f64).sqrt() - 1e-12);
        let w = p.chart_coords();
        let others: Vec<usize> = (0..=n).filter(|&k| k != j).collect();
        for (i, &k) in others.iter().enumerate() {
            prop_assert!((w[i] - psi[k] / psi[j]).norm() <= 1e-12 * (1.0 + w[i].norm()));
        }
    }

    #[test]
    fn expectation_value_is_ray_function(seed in any::<u64>(), m in 2usize..=4) {
        let mut rng = sampling::rng(seed);
        let a = sampling::hermitian(&mut rng, m);
        let psi = sampling::complex_vector(&mut rng, m);
        let f = KahlerFunction::expectation(&a);
        let direct = psi.dotc(&(a.as_complex().as_matrix() * &psi)) / psi.norm_squared();
        let scale = 1.0 + a.as_complex().max_norm();
        prop_assert!((f.value(&psi).unwrap() - direct).norm() <= 1e-12 * scale);
    }

    #[test]
    fn spectrum_multiplicity_closed_form(n in 1u32..=8, l in 0u32..=8) {
        let fact = |k: u32| (1..=k as u128).product::<u128>();
        let (n1, l1) = (n as u128, l as u128);
        let (num, den) = (fact(n + l - 1), fact(n) * fact(l));
        let want = n1 * (n1 + 2 * l1) * num * num / (den * den);
        let table = kahler::laplacian_spectrum(n, l).unwrap();
        let e = table.last().unwrap();
        prop_assert_eq!(e.eigenvalue, -(l as i64) * (n as i64 + l as i64));
        if l > 0 {
            prop_assert_eq!(e.multiplicity.clone(), want.into());
        }
    }

    #[test]
    fn deformed_algebra_inverse(seed in any::<u64>(), n in 2usize..=4) {
        let (_, k) = biham::commuting_pair_generator(n, seed).unwrap();
        let prod = k.k().as_complex().mul(&k.k_inv()).unwrap();
        prop_assert!(prod.defect(&ComplexMatrix::identity(n)).unwrap() <= 1e-10);
    }

    #[test]
    fn evolution_run_shape(seed in any::<u64>(), n in 2usize..=3, steps in 1usize..40) {
        let (h, k) = biham::commuting_pair_generator(n, seed).unwrap();
        let mut rng = sampling::rng(seed);
        let a0 = sampling::complex_matrix(&mut rng, n);
        let run = biham::evolve_pair(&k, &h, &a0, 0.0, 0.5, steps).unwrap();
        prop_assert_eq!(run.t_grid.len(), steps + 1);
        prop_assert_eq!(run.trajectory_std.len(), steps + 1);
        prop_assert_eq!(run.trajectory_def.len(), steps + 1);
        prop_assert_eq!(&run.trajectory_std[0], &a0);
        prop_assert_eq!(&run.trajectory_def[0], &a0);
    }

    #[test]
    fn verdict_follows_checks(defects in prop::collection::vec(0.0f64..2.0, 0..6), flag in any::<bool>()) {
        let mut r = RunReport::new("prop", &[], 0);
        for (i, d) in defects.iter().enumerate() {
            r.check(format!("c{i}"), *d, 1.0);
        }
        r.inconclusive = flag;
        let all = defects.iter().all(|&d| d <= 1.0);
        let want = match (all, flag) {
            (false, _) => Verdict::Fail,
            (true, true) => Verdict::Inconclusive,
            (true, false) => Verdict::Pass,
        };
        prop_assert_eq!(r.verdict(), want);
    }

    #[test]
    fn g17_round_trips(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(format_g17(x).parse::<f64>().unwrap(), x);
        prop_assert_eq!(canonical_json(&float(x)).trim().parse::<f64>().unwrap(), x);
    }
}
