//! Phi* of a function and of its symmetrization on a shared slope family.

use epiconv::dsl::make_function;
use epiconv::extremal::{symmetrization_check, LogMass, NegLogMass, SlopeFamily};
use epiconv::RotationGrid;

fn main() -> epiconv::Result<()> {
    let psi = make_function("quadratic matrix=2,0.5,0.7")?;
    let fam = SlopeFamily::random(2, 8, 5, 0.9, 3)?;
    let rot = RotationGrid::equally_spaced(2, 180)?;
    let (a, b, cert) = symmetrization_check(&psi, &fam, &rot, &LogMass, 1e-4)?;
    println!("log J:  Phi*(psi) = {:.6}, Phi*(psi_rot) = {:.6}, pass {}", a.value, b.value, cert.pass);
    let (a, b, cert) = symmetrization_check(&psi, &fam, &rot, &NegLogMass, 1e-4)?;
    println!("-log J: Phi*(psi) = {:.6}, Phi*(psi_rot) = {:.6}, pass {}", a.value, b.value, cert.pass);
    Ok(())
}
