//! Classify functions on CP¹ by their Laplacian: constants are harmonic,
//! Pauli expectation values lie in the first eigenspace, σ_z² is neither.

use gns_geometry::algebra::pauli;
use gns_geometry::kahler::{self, KahlerFunction};
use gns_geometry::linalg::CVec;
use gns_geometry::sampling;
use num_complex::Complex64;

fn main() -> gns_geometry::Result<()> {
    let mut rng = sampling::rng(42);
    let [_, sx, sy, sz] = pauli();
    let szm = sz.as_matrix().clone();
    let cases = vec![
        ("1", KahlerFunction::sampled(|_: &CVec| Complex64::new(1.0, 0.0))),
        ("σx", KahlerFunction::Expectation(sx)),
        ("σy", KahlerFunction::Expectation(sy)),
        ("σz", KahlerFunction::Expectation(sz)),
        (
            "σz²",
            KahlerFunction::sampled(move |psi: &CVec| {
                let v = psi.dotc(&(&szm * psi)) / psi.norm_squared();
                v * v
            }),
        ),
    ];
    for (name, f) in &cases {
        let r = kahler::kahler_test(f, 1, 100, &mut rng)?;
        println!(
            "{name:>4}: {:<16} eigenvalue {:>9.5}  harmonic defect {:.1e}  eigen defect {:.1e}",
            r.classification.as_str(),
            r.measured_eigenvalue,
            r.harmonic_defect,
            r.eigen_defect
        );
    }
    let gram = kahler::dipole_gram(20_000, &mut rng)?;
    println!("dipole Gram matrix (expected I/3):\n{gram:.5}");
    Ok(())
}
