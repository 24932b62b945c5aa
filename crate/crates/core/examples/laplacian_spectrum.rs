//! Eigenvalues and exact multiplicities of the Laplacian on CP^n.

use gns_geometry::kahler;

fn main() -> gns_geometry::Result<()> {
    for n in [1, 2, 3] {
        println!("CP^{n}");
        for e in kahler::laplacian_spectrum(n, 5)? {
            println!("  l={}  λ={:>4}  N={}", e.l, e.eigenvalue, e.multiplicity);
        }
    }
    let big = kahler::laplacian_spectrum(6, 60)?;
    let last = big.last().expect("nonempty");
    println!("N_{{6,60}} = {}", last.multiplicity);
    Ok(())
}
