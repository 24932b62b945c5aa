//! Expectation-value functions on CP²: f_A ⋆ f_B reproduces f_AB, and the
//! tensors behind it do not depend on the chosen representative.

use gns_geometry::kahler::{self, KahlerFunction, RayPoint};
use gns_geometry::sampling;
use num_complex::Complex64;

fn main() -> gns_geometry::Result<()> {
    let mut rng = sampling::rng(3);
    let a = sampling::hermitian(&mut rng, 3);
    let b = sampling::hermitian(&mut rng, 3);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let p = RayPoint::new(&sampling::random_ray(&mut rng, 3))?;
        worst = worst.max(kahler::star_product(a.as_complex(), b.as_complex(), &p)?.defect);
    }
    println!("max |f_A ⋆ f_B − f_AB| over 100 rays: {worst:.2e}");

    let psi = sampling::random_ray(&mut rng, 3);
    let (fa, fb) = (KahlerFunction::expectation(&a), KahlerFunction::expectation(&b));
    let (g0, l0) = kahler::projectable_tensors(&psi, &fa, &fb)?;
    let scaled = psi.map(|z| z * Complex64::new(-2.0, 3.5));
    let (g1, l1) = kahler::projectable_tensors(&scaled, &fa, &fb)?;
    println!("G̃ at ψ and λψ: {g0:.6} / {g1:.6}");
    println!("Λ̃ at ψ and λψ: {l0:.6} / {l1:.6}");
    Ok(())
}
