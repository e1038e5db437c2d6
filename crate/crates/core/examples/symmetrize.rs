//! Rotation epi-means converging to the rotational epi-symmetrization.

use epiconv::calculus::{epi_distance, EpiDistanceParams};
use epiconv::dsl::make_function;
use epiconv::symmetrize::{rotation_epi_mean, rotational_symmetrization};
use epiconv::{RotationGrid, Vector};

fn main() -> epiconv::Result<()> {
    let psi = make_function("quadratic diag=1,4")?;
    let rot = rotational_symmetrization(&psi, 256)?;
    let y = Vector::new2(0.6, 0.8);
    println!("dual of psi_rot at |y| = 1: {:.9} (5/16 = {:.9})", rot.eval_dual(&y).value(), 5.0 / 16.0);
    let x = Vector::new2(0.5, 0.0);
    println!("psi_rot(0.5, 0) = {:.6} (0.8 * 0.25 = 0.2)", rot.eval_primal(&x).value());

    // equally spaced means already average a quadratic form exactly, so
    // the convergence in m shows on a quartic-like conjugate instead
    let params = EpiDistanceParams::new(0.5);
    for spec in ["quadratic diag=1,4", "norm-power p=3 diag=1,2"] {
        let h = make_function(spec)?;
        let hr = rotational_symmetrization(&h, 256)?;
        for m in [4, 8, 16, 32, 256] {
            let t = rotation_epi_mean(&h, &RotationGrid::equally_spaced(2, m)?)?;
            println!("{spec}, m = {m:>3}: distance to the symmetrization = {:.3e}", epi_distance(&t, &hr, &params)?);
        }
    }
    Ok(())
}
