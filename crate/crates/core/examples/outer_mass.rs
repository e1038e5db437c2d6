//! Upper bounds on F_N for the standard Gaussian and an anisotropic pair.

use std::f64::consts::PI;

use epiconv::dsl::make_function;
use epiconv::extremal::{fn_inequality_check, outer_mass_ladder, Budget, DEFAULT_RHO_CAP};
use epiconv::logconcave::LogConcaveHandle;

fn main() -> epiconv::Result<()> {
    let budget = Budget { restarts: 8, iters: 120, seed: 5 };
    let gauss = LogConcaveHandle::new(make_function("quadratic diag=1,1")?);
    println!("J = 2 pi = {:.4}", 2.0 * PI);
    for r in outer_mass_ladder(&gauss, 3, 8, &budget, DEFAULT_RHO_CAP)? {
        println!("F_{} <= {:.4}", r.argmin_set.as_ref().map_or(0, |s| s.len()), r.value);
    }

    let f = LogConcaveHandle::new(make_function("quadratic diag=1,4")?);
    let (a, b, cert) = fn_inequality_check(&f, 4, &budget, DEFAULT_RHO_CAP)?;
    println!("F_4(f) <= {:.4}, F_4(f_rot) <= {:.4}, band {:.4}, pass {}", a.value, b.value, cert.tol, cert.pass);
    Ok(())
}
