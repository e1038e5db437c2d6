//! Discrete Legendre–Fenchel transforms against closed forms.

use epiconv::dsl::make_function;
use epiconv::transform::{biconjugate, discrete_conjugate, dual_domain_radius};
use epiconv::{ExtReal, GridFunction, GridSpec, Vector};

fn main() -> epiconv::Result<()> {
    let psi = make_function("sqrt1p")?;
    println!("r(psi) = {}", dual_domain_radius(&psi)?.radius);
    let grid = psi.sample_primal(&GridSpec::cube(1, -50.0, 50.0, 20001)?)?;
    let dual = GridSpec::cube(1, -0.9, 0.9, 7)?;
    let conj = discrete_conjugate(&grid, &dual)?.grid;
    println!("{:>6} {:>12} {:>12}", "y", "grid", "exact");
    for k in 0..dual.len() {
        let y = dual.point(k);
        println!("{:>6.2} {:>12.6} {:>12.6}", y.x(), conj.get(k).value(), psi.eval_dual(&y).value());
    }

    // the biconjugate of a double well fills in the hump
    let spec = GridSpec::cube(1, -2.0, 2.0, 401)?;
    let well = GridFunction::sample(&spec, |x| ExtReal::new((x.x() * x.x() - 1.0).powi(2)))?;
    let hull = biconjugate(&well)?;
    for x in [-1.5, -0.5, 0.0, 0.5, 1.5] {
        let p = Vector::new1(x);
        println!("x = {x:>5}: well {:.4}, hull {:.4}", well.interpolate(&p).value(), hull.interpolate(&p).value());
    }
    Ok(())
}
