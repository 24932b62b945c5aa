//! Poisson and Jordan tensors on u(2)*: Hamiltonian and gradient fields of the
//! coordinate functions, and the algebra the six fields close into.

use gns_geometry::dual;
use gns_geometry::fields;

fn main() -> gns_geometry::Result<()> {
    let (lam, r) = dual::u2_tensors();
    let y = [0.7, -0.2, 0.4, 1.1];
    let p = dual::DualPoint::new(y.to_vec())?;
    for k in 0..4 {
        println!(
            "H_{k} = {:?}   X_{k} = {:?}",
            dual::hamiltonian_field(&lam, k, &p)?,
            dual::gradient_field(&r, k, &p)?
        );
    }

    let h1 = dual::hamiltonian_flow(&lam, 1);
    let l = fields::lie_derivative_bivector(&h1, &dual::tensor_map(&r), &y);
    println!("max |L_H1 R| = {:.2e}", l.amax());
    let x1 = dual::gradient_flow(&r, 1);
    let l = fields::lie_derivative_bivector(&x1, &dual::tensor_map(&r), &y);
    println!("max |L_X1 R| = {:.2e}", l.amax());

    let hs: Vec<_> = (1..4).map(|k| dual::hamiltonian_flow(&lam, k)).collect();
    let xs: Vec<_> = (1..4).map(|k| dual::gradient_flow(&r, k)).collect();
    let mut family: Vec<dual::VectorField> = Vec::new();
    family.extend(hs.iter().map(|f| f as dual::VectorField));
    family.extend(xs.iter().map(|f| f as dual::VectorField));
    let pts = [y.to_vec(), vec![0.1, 0.5, -0.3, 0.2], vec![-1.0, 0.3, 0.8, -0.6]];
    let fit = dual::closure_fit(&family, &pts)?;
    println!("closure residual {:.2e}, Killing signature {:?}", fit.residual, fit.killing_signature);
    println!("Pauli product discrepancy {:.3}", dual::pauli_identity_discrepancy());
    Ok(())
}
