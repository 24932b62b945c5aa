//! The three-dimensional family [v1,v2] = a3 v3 and cyclic: the quadratic
//! Casimir Poisson-commutes with every coordinate and is conserved by the flows.

use gns_geometry::dual::{self, FiniteAlgebra, TensorField};
use gns_geometry::poly::Polynomial;

fn main() -> gns_geometry::Result<()> {
    let a = [1.0, -2.0, 0.5];
    let t = TensorField::new(FiniteAlgebra::three_dimensional(a)?);
    let c = dual::casimir(a);
    let x = dual::DualPoint::new(vec![0.3, -1.2, 0.8])?;
    for k in 0..3 {
        let b = dual::poisson_bracket(&t, &c, &Polynomial::coordinate(3, k)?, &x)?;
        println!("{{C, x{}}} = {b:.3e}", k + 1);
    }
    for k in 0..3 {
        let drift = dual::casimir_drift(a, k, x.coords(), 0.01, 500)?;
        println!("Casimir drift along H{} over t=5: {drift:.2e}", k + 1);
    }
    Ok(())
}
