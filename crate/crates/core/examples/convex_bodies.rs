//! Polygons, mean width, circumscribed sets and the indicator embedding.

use std::f64::consts::PI;

use epiconv::geometry::{halfspace_intersection, schneider_embed, Polytope};
use epiconv::logconcave::{hypo_symmetrize, LogConcaveHandle};
use epiconv::Vector;

fn main() -> epiconv::Result<()> {
    let k = Polytope::from_vertices(&[
        Vector::new2(-1.0, -0.5),
        Vector::new2(1.5, -0.5),
        Vector::new2(0.5, 1.0),
        Vector::new2(-0.8, 0.7),
    ])?;
    let w = k.mean_width()?;
    println!("area {:.4}, mean width {:.4}, pi (w/2)^2 = {:.4}", k.area(), w, PI * (w / 2.0).powi(2));

    let u: Vec<Vector> = (0..5).map(|i| Vector::polar(1.0, 2.0 * PI * i as f64 / 5.0)).collect();
    let p = halfspace_intersection(&k, &u)?;
    println!("P(K, U) with 5 directions: area {:.4}", p.area());

    let f = LogConcaveHandle::new(schneider_embed(&k)?);
    println!("J(chi_K) = {:.4}", f.mass()?.value);
    println!("J(chi_K_rot) = {:.4}", hypo_symmetrize(&f)?.mass()?.value);
    Ok(())
}
