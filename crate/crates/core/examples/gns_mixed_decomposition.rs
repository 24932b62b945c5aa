//! A rank-2 state on M_3(ℂ) realizes as I_2 ⊗ A on ℂ⁶ and splits into two
//! pure components weighted by its eigenvalues.

use gns_geometry::gns;
use gns_geometry::sampling;
use gns_geometry::state::make_state;

fn main() -> gns_geometry::Result<()> {
    let mut rng = sampling::rng(7);
    let state = make_state(&sampling::state_matrix_of_rank(&mut rng, 3, 2))?;
    let g = gns::build_gns(&state);
    println!("eigenvalues   {:?}", state.eigenvalues());
    println!("hilbert dim   {}", g.hilbert_dim());
    println!("commutant dim {}", gns::irreducibility(&g).commutant_dim);

    let samples: Vec<_> = (0..20).map(|_| sampling::complex_matrix(&mut rng, 3)).collect();
    println!("intertwiner defect {:.2e}", g.intertwiner_defect(&samples)?);

    let parts = gns::decompose_mixed(&g)?;
    for (i, p) in parts.iter().enumerate() {
        println!("component {i}: weight {:.6}, pure: {}", p.weight, p.state.is_pure());
    }
    println!("reconstruction defect {:.2e}", gns::reconstruction_defect(&state, &parts)?);
    Ok(())
}
