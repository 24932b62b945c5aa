//! GNS construction for a pure state on M_3(ℂ): the representation space is
//! ℂ³ itself and the representation is irreducible.

use gns_geometry::gns;
use gns_geometry::sampling;
use gns_geometry::state::DensityState;

fn main() -> gns_geometry::Result<()> {
    let mut rng = sampling::rng(42);
    let psi = sampling::random_ray(&mut rng, 3);
    let state = DensityState::pure(psi.as_slice())?;
    let g = gns::build_gns(&state);
    let irr = gns::irreducibility(&g);

    println!("hilbert dim   {}", g.hilbert_dim());
    println!("ideal dim     {}", g.ideal_dim());
    println!("commutant dim {} (irreducible: {})", irr.commutant_dim, irr.is_irreducible);

    let samples: Vec<_> = (0..50).map(|_| sampling::complex_matrix(&mut rng, 3)).collect();
    println!("cyclic defect {:.2e}", gns::verify_cyclic(&g, &samples)?);
    println!("rep. defect   {:.2e}", g.representation_defect(&samples)?);
    Ok(())
}
