//! Hermitian matrices under a∘b = ½(ab+ba) and (i/2)[a,b]: fit the associator
//! constant over random triples.

use gns_geometry::algebra::fit_associator_constant;
use gns_geometry::sampling;

fn main() -> gns_geometry::Result<()> {
    let mut rng = sampling::rng(1);
    let triples: Vec<_> = (0..300)
        .map(|i| {
            let n = 2 + i % 3;
            (
                sampling::hermitian(&mut rng, n).into_complex(),
                sampling::hermitian(&mut rng, n).into_complex(),
                sampling::hermitian(&mut rng, n).into_complex(),
            )
        })
        .collect();
    let (lambda2, residual) = fit_associator_constant(&triples)?;
    println!("fitted λ² = {lambda2:.15}");
    println!("relative residual {residual:.2e}");
    Ok(())
}
