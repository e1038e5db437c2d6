//! Total masses of a log-concave function and of its symmetrization.

use epiconv::dsl::make_function;
use epiconv::extremal::urysohn_check;
use epiconv::logconcave::LogConcaveHandle;

fn main() -> epiconv::Result<()> {
    for spec in ["quadratic diag=1,4", "quadratic diag=2,2", "indicator box=[-1,1]^2", "support regular=5"] {
        let f = LogConcaveHandle::new(make_function(spec)?);
        let u = urysohn_check(&f)?;
        println!(
            "{spec:<24} J(f) = {:>9.5}  J(f_rot) = {:>9.5}  pass {}",
            u.mass, u.mass_rot, u.certificate.pass
        );
    }
    Ok(())
}
