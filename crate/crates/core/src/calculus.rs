//! Epi-operations: infimal convolution, epi-multiplication, the balls
//! `b_r(ψ)` and a uniform dual distance standing in for epi-convergence.

use serde::Serialize;

use crate::config::Resolution;
use crate::domain::DomainDescriptor;
use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::handle::{ConvexFunction, FunctionHandle};
use crate::transform::dual_domain_radius;
use crate::vector::Vector;

/// `ψ₁ □ ψ₂`, defined through `ℒψ₁ + ℒψ₂`.
pub fn inf_convolve(h1: &FunctionHandle, h2: &FunctionHandle) -> Result<FunctionHandle> {
    inf_convolve_with(h1, h2, Resolution::default())
}

pub fn inf_convolve_with(h1: &FunctionHandle, h2: &FunctionHandle, res: Resolution) -> Result<FunctionHandle> {
    crate::error::check_dim(h1.dim(), h2.dim())?;
    h1.check_coercive()?;
    h2.check_coercive()?;
    let domain = h1.dual_domain().intersect(&h2.dual_domain());
    if !(domain.inradius() > 0.0) {
        return Err(Error::Empty("dual domains have no common interior around the origin".into()));
    }
    let label = format!("infconv({}, {})", h1.label(), h2.label());
    let (a, b) = (h1.clone(), h2.clone());
    Ok(FunctionHandle::from_dual_with(h1.dim(), domain, label, res, move |y| a.eval_dual(y) + b.eval_dual(y).value()))
}

struct EpiScaled {
    lambda: f64,
    inner: FunctionHandle,
}

impl ConvexFunction for EpiScaled {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn primal(&self, x: &Vector) -> ExtReal {
        self.inner.eval_primal(&x.scale(1.0 / self.lambda)) * self.lambda
    }

    fn dual(&self, y: &Vector) -> ExtReal {
        self.inner.eval_dual(y) * self.lambda
    }

    fn dual_domain(&self) -> DomainDescriptor {
        self.inner.dual_domain()
    }

    fn label(&self) -> String {
        format!("episcale({}, {})", self.lambda, self.inner.label())
    }
}

/// `λ ⊡ ψ = λ ψ(·/λ)`, with conjugate `λ ℒψ`.
pub fn epi_scale(lambda: f64, h: &FunctionHandle) -> Result<FunctionHandle> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("epi-multiplication needs λ > 0, got {lambda}")));
    }
    Ok(FunctionHandle::new(EpiScaled { lambda, inner: h.clone() }))
}

/// `A ⊖ δB`.
pub fn minkowski_shrink(d: &DomainDescriptor, delta: f64) -> Result<DomainDescriptor> {
    d.shrink(delta)
}

/// `b_r(ψ) = ℒ(𝟙_{C_r} + r) = h_{C_r} − r`.
#[derive(Debug, Clone)]
pub struct BallFunction {
    dim: usize,
    r: f64,
    region: DomainDescriptor,
}

impl BallFunction {
    /// The set `C_r(ψ)`.
    pub fn region(&self) -> &DomainDescriptor {
        &self.region
    }
}

impl ConvexFunction for BallFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn primal(&self, x: &Vector) -> ExtReal {
        ExtReal::new(self.region.support(x) - self.r)
    }

    fn dual(&self, y: &Vector) -> ExtReal {
        if self.region.region_contains(y) {
            ExtReal::new(self.r)
        } else {
            ExtReal::INFINITY
        }
    }

    fn dual_domain(&self) -> DomainDescriptor {
        self.region.clone()
    }

    fn label(&self) -> String {
        format!("ball(r={})", self.r)
    }
}

/// `b_r(ψ)` with `C_r(ψ) = (1/r)B ∩ (cl dom ℒψ ⊖ min{r, r(ψ)/2}B)`, and
/// `C_r = (1/r)B` when `r(ψ) = ∞`.
pub fn ball_function(h: &FunctionHandle, r: f64) -> Result<FunctionHandle> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("ball radius must be positive, got {r}")));
    }
    let dom = h.dual_domain();
    if dom.band() >= r / 10.0 {
        return Err(Error::InvalidArgument(format!(
            "dual domain known only within ±{}, too coarse for r = {r}",
            dom.band()
        )));
    }
    let rpsi = dual_domain_radius(h)?.radius;
    let outer = DomainDescriptor::Ball(1.0 / r);
    let region = if rpsi.is_infinite() { outer } else { outer.intersect(&dom.shrink(r.min(rpsi / 2.0))?) };
    assert!(region.inradius() > 0.0, "C_r(ψ) has empty interior");
    Ok(FunctionHandle::new(BallFunction { dim: h.dim(), r, region }))
}

/// `ψ □ b_r(ψ)`.
pub fn outer_parallel(h: &FunctionHandle, r: f64) -> Result<FunctionHandle> {
    inf_convolve(h, &ball_function(h, r)?)
}

/// Parameters of [`epi_distance`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpiDistanceParams {
    /// Radius of the dual ball on which conjugates are compared.
    pub rho: f64,
    /// Approximate number of sample points.
    pub samples: usize,
}

impl EpiDistanceParams {
    pub fn new(rho: f64) -> Self {
        EpiDistanceParams { rho, samples: 4096 }
    }
}

/// Deterministic sample of the closed ball `ρB`: equally spaced points in
/// 1-d, concentric rings in 2-d.
pub fn ball_sample(dim: usize, rho: f64, samples: usize) -> Vec<Vector> {
    if dim == 1 {
        let k = samples.max(2);
        return (0..k).map(|i| Vector::new1(-rho + 2.0 * rho * i as f64 / (k - 1) as f64)).collect();
    }
    let rings = ((samples as f64 / 4.0).sqrt().ceil() as usize).max(1);
    let per = (samples / rings).max(8);
    let mut out = vec![Vector::zero(2)];
    for k in 1..=rings {
        let r = rho * k as f64 / rings as f64;
        for j in 0..per {
            // stagger rings so directions do not repeat
            let a = 2.0 * std::f64::consts::PI * (j as f64 + 0.5 * (k % 2) as f64) / per as f64;
            out.push(Vector::polar(r, a));
        }
    }
    out
}

/// `sup_{y ∈ ρB} |ℒψ₁(y) − ℒψ₂(y)|` over a deterministic sample.
pub fn epi_distance(h1: &FunctionHandle, h2: &FunctionHandle, p: &EpiDistanceParams) -> Result<f64> {
    crate::error::check_dim(h1.dim(), h2.dim())?;
    let r = dual_domain_radius(h1)?.radius.min(dual_domain_radius(h2)?.radius);
    if !(p.rho > 0.0 && p.rho < r) {
        return Err(Error::InvalidArgument(format!("ρ = {} must lie in (0, {r})", p.rho)));
    }
    let mut worst: f64 = 0.0;
    for y in ball_sample(h1.dim(), p.rho, p.samples) {
        let (a, b) = (h1.eval_dual(&y), h2.eval_dual(&y));
        let d = match (a.is_finite(), b.is_finite()) {
            (true, true) => (a.value() - b.value()).abs(),
            (false, false) => 0.0,
            _ => f64::INFINITY,
        };
        worst = worst.max(d);
    }
    Ok(worst)
}
