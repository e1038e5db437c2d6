//! Outer linearizations, admissibility and the spanning reduction.

use epiconv::dsl::make_function;
use epiconv::linearization::{check_admissible, outer_linearization, scale_slopes, spanning_subset};
use epiconv::logconcave::piecewise_affine_mass;
use epiconv::symmetrize::rotational_symmetrization;
use epiconv::{SlopeSet, Vector};

fn main() -> epiconv::Result<()> {
    let psi = make_function("quadratic diag=1,4")?;
    let y = SlopeSet::regular(6, 1.5, 0.0)?;
    let q = outer_linearization(&psi, &y);
    println!("{} pieces, J(exp(-q)) = {:.6}", q.pieces().len(), piecewise_affine_mass(&q)?);
    let x = Vector::new2(0.4, -0.3);
    println!("q(x) = {:.6} <= psi(x) = {:.6}", q.eval(&x).value(), psi.eval_primal(&x).value());

    let dense = SlopeSet::new(vec![
        Vector::new2(1.0, 0.0),
        Vector::new2(-1.0, 0.0),
        Vector::new2(0.0, 1.0),
        Vector::new2(0.0, -1.0),
        Vector::new2(1.0, 1.0),
    ])?;
    println!("spanning subset of 5 slopes: {:?}", spanning_subset(&dense)?);

    // the square support with slopes at the cube vertices
    let sq = make_function("support box=[-1,1]^2")?;
    let cube = SlopeSet::cube_vertices(2)?;
    let v = check_admissible(&sq, &cube);
    println!("square: in Conv_c {:?}, inside r(psi)B {:?}", v.in_conv_c, v.inside_interior_ball);
    let v = check_admissible(&sq, &scale_slopes(&cube, 0.7)?);
    println!("scaled by 0.7: in Conv_c {:?}, inside r(psi)B {:?}", v.in_conv_c, v.inside_interior_ball);
    let rot = rotational_symmetrization(&sq, 128)?;
    println!("psi_rot with the same slopes degenerate: {}", outer_linearization(&rot, &cube).is_degenerate());
    Ok(())
}
