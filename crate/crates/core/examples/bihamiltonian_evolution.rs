//! Heisenberg evolution under [A,H] and under the deformed bracket with a
//! commuting K agree along the whole trajectory.

use gns_geometry::biham;
use gns_geometry::error::Error;
use gns_geometry::sampling;

fn main() -> gns_geometry::Result<()> {
    let (h, k) = biham::commuting_pair_generator(3, 5)?;
    let mut rng = sampling::rng(5);
    let a0 = sampling::complex_matrix(&mut rng, 3);
    let run = biham::evolve_pair(&k, &h, &a0, 0.0, 1.0, 400)?;
    for i in (0..run.t_grid.len()).step_by(100) {
        println!("t = {:.2}  divergence {:.2e}", run.t_grid[i], run.divergence[i]);
    }
    println!("half-step error estimate {:.2e}", run.richardson_estimate);

    let (h, k) = biham::non_commuting_pair(3, 5)?;
    match biham::deformed_hamiltonian(&k, &h) {
        Err(Error::NonCommuting { defect, .. }) => println!("non-commuting pair rejected, ‖[H,K]‖ = {defect:.3}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
