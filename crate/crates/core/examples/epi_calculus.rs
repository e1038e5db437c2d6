//! Infimal convolution, epi-scaling and the outer-parallel ladder.

use epiconv::calculus::{epi_distance, epi_scale, inf_convolve, outer_parallel, EpiDistanceParams};
use epiconv::dsl::make_function;
use epiconv::Vector;

fn main() -> epiconv::Result<()> {
    let q = make_function("quadratic a=1")?;
    let sum = inf_convolve(&q, &q)?;
    let scaled = epi_scale(2.0, &q)?;
    for x in [0.0, 1.0, 2.0] {
        let p = Vector::new1(x);
        println!(
            "x = {x}: (q □ q)(x) = {:.6}, (2 ⊡ q)(x) = {:.6}, x²/4 = {:.6}",
            sum.eval_primal(&p).value(),
            scaled.eval_primal(&p).value(),
            x * x / 4.0
        );
    }

    let psi = make_function("sqrt1p dim=2")?;
    let params = EpiDistanceParams::new(0.5);
    for r in [0.4, 0.2, 0.1, 0.05] {
        let d = epi_distance(&outer_parallel(&psi, r)?, &psi, &params)?;
        println!("r = {r:<5} distance to psi = {d:.6}");
    }
    Ok(())
}
