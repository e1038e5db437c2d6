//! Rotation sweep of the averaged support function of a square.

use std::f64::consts::PI;

use epiconv::dsl::make_function;
use epiconv::extremal::covering_minimize;
use epiconv::{DiscreteMeasure, RotationGrid};

fn main() -> epiconv::Result<()> {
    let h = make_function("indicator box=[-1,1]^2")?;
    let rep = covering_minimize(&h, &DiscreteMeasure::tri3(), &RotationGrid::equally_spaced(2, 720)?)?;
    let cert = rep.certificate.expect("covering certificate");
    println!("min over rotations {:.6} at {:?}", rep.value, rep.argmin_rotation);
    println!("symmetrized value {:.6}, w(K)/2 = {:.6}, pass {}", cert.rhs, 4.0 / PI, cert.pass);
    Ok(())
}
