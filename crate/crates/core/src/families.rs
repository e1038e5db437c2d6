//! Builtin function families with closed-form conjugates.

use crate::domain::DomainDescriptor;
use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::geometry::Polytope;
use crate::grid::{GridFunction, GridSpec};
use crate::handle::ConvexFunction;
use crate::transform::{biconjugate, estimate_grid_dual_domain, Conjugator};
use crate::vector::Vector;

/// `ψ(x) = ½ (x − c)ᵀ A (x − c)` with `A` symmetric positive definite.
#[derive(Debug, Clone)]
pub struct Quadratic {
    dim: usize,
    a: [[f64; 2]; 2],
    inv: [[f64; 2]; 2],
    center: Vector,
}

impl Quadratic {
    /// `a` holds the upper triangle `[a11, a12, a22]` in 2-d or `[a]` in 1-d.
    pub fn new(dim: usize, a: &[f64], center: Option<Vector>) -> Result<Self> {
        let center = center.unwrap_or_else(|| Vector::zero(dim));
        crate::error::check_dim(dim, center.dim())?;
        match (dim, a) {
            (1, [a11]) => {
                if !(*a11 > 0.0) {
                    return Err(Error::NotPositiveDefinite);
                }
                Ok(Quadratic { dim, a: [[*a11, 0.0], [0.0, 0.0]], inv: [[1.0 / a11, 0.0], [0.0, 0.0]], center })
            }
            (2, [a11, a12, a22]) => {
                let det = a11 * a22 - a12 * a12;
                if !(*a11 > 0.0 && det > 0.0) {
                    return Err(Error::NotPositiveDefinite);
                }
                Ok(Quadratic {
                    dim,
                    a: [[*a11, *a12], [*a12, *a22]],
                    inv: [[a22 / det, -a12 / det], [-a12 / det, a11 / det]],
                    center,
                })
            }
            (1 | 2, _) => Err(Error::InvalidArgument(format!("{} matrix entries for dimension {dim}", a.len()))),
            (n, _) => Err(Error::UnsupportedDimension(n)),
        }
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        match d {
            [a] => Self::new(1, &[*a], None),
            [a, b] => Self::new(2, &[*a, 0.0, *b], None),
            _ => Err(Error::UnsupportedDimension(d.len())),
        }
    }

    fn form(m: &[[f64; 2]; 2], v: &Vector) -> f64 {
        if v.dim() == 1 {
            m[0][0] * v.x() * v.x()
        } else {
            m[0][0] * v.x() * v.x() + 2.0 * m[0][1] * v.x() * v.y() + m[1][1] * v.y() * v.y()
        }
    }

    pub fn determinant(&self) -> f64 {
        if self.dim == 1 {
            self.a[0][0]
        } else {
            self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0]
        }
    }
}

impl ConvexFunction for Quadratic {
    fn dim(&self) -> usize {
        self.dim
    }

    fn primal(&self, x: &Vector) -> ExtReal {
        ExtReal::new(0.5 * Self::form(&self.a, &(*x - self.center)))
    }

    fn dual(&self, y: &Vector) -> ExtReal {
        ExtReal::new(self.center.dot(y) + 0.5 * Self::form(&self.inv, y))
    }

    fn dual_domain(&self) -> DomainDescriptor {
        DomainDescriptor::FullSpace
    }

    fn label(&self) -> String {
        if self.dim == 1 {
            format!("quadratic a={} center={}", self.a[0][0], self.center.x())
        } else {
            format!(
                "quadratic matrix={},{},{} center={},{}",
                self.a[0][0],
                self.a[0][1],
                self.a[1][1],
                self.center.x(),
                self.center.y()
            )
        }
    }
}

/// `ψ(x) = √(1 + |x|²)`, with `ℒψ(y) = −√(1 − |y|²)` on the closed unit ball.
#[derive(Debug, Clone, Copy)]
pub struct Sqrt1p {
    pub dim: usize,
}

impl ConvexFunction for Sqrt1p {
    fn dim(&self) -> usize {
        self.dim
    }

    fn primal(&self, x: &Vector) -> ExtReal {
        ExtReal::new((1.0 + x.norm_sq()).sqrt())
    }

    fn dual(&self, y: &Vector) -> ExtReal {
        let s = y.norm_sq();
        if s <= 1.0 {
            ExtReal::new(-(1.0 - s).sqrt())
        } else {
            ExtReal::INFINITY
        }
    }

    fn dual_domain(&self) -> DomainDescriptor {
        DomainDescriptor::Ball(1.0)
    }

    fn label(&self) -> String {
        format!("sqrt1p dim={}", self.dim)
    }
}

/// Indicator `𝟙_P` of a polytope; its conjugate is the support function.
#[derive(Debug, Clone)]
pub struct Indicator {
    poly: Polytope,
}

impl Indicator {
    pub fn new(poly: Polytope) -> Self {
        Indicator { poly }
    }

    pub fn polytope(&self) -> &Polytope {
        &self.poly
    }
}

impl ConvexFunction for Indicator {
    fn dim(&self) -> usize {
        self.poly.dim()
    }

    fn primal(&self, x: &Vector) -> ExtReal {
        if self.poly.contains(x, 1e-12) {
            ExtReal::ZERO
        } else {
            ExtReal::INFINITY
        }
    }

    fn dual(&self, y: &Vector) -> ExtReal {
        ExtReal::new(self.poly.support_value(y))
    }

    fn dual_domain(&self) -> DomainDescriptor {
        DomainDescriptor::FullSpace
    }

    fn label(&self) -> String {
        format!("indicator vertices={}", vertex_list(&self.poly))
    }
}

/// Support function `h_P`; its conjugate is `𝟙_P`. Requires the origin in
/// the interior of `P` (coercivity).
#[derive(Debug, Clone)]
pub struct Support {
    poly: Polytope,
}

impl Support {
    pub fn new(poly: Polytope) -> Result<Self> {
        if !poly.origin_in_interior() {
            return Err(Error::OriginNotInterior);
        }
        Ok(Support { poly })
    }

    pub fn polytope(&self) -> &Polytope {
        &self.poly
    }
}

impl ConvexFunction for Support {
    fn dim(&self) -> usize {
        self.poly.dim()
    }

    fn primal(&self, x: &Vector) -> ExtReal {
        ExtReal::new(self.poly.support_value(x))
    }

    fn dual(&self, y: &Vector) -> ExtReal {
        if self.poly.contains(y, 1e-12) {
            ExtReal::ZERO
        } else {
            ExtReal::INFINITY
        }
    }

    fn dual_domain(&self) -> DomainDescriptor {
        DomainDescriptor::Polytope(self.poly.facets().to_vec())
    }

    fn label(&self) -> String {
        format!("support vertices={}", vertex_list(&self.poly))
    }
}

fn vertex_list(p: &Polytope) -> String {
    p.vertices().iter().map(|v| v.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")).collect::<Vec<_>>().join(";")
}

/// `ψ(x) = |Dx|ᵖ / p` with a positive diagonal `D`; conjugate `|D⁻¹y|^q / q`.
#[derive(Debug, Clone)]
pub struct NormPower {
    p: f64,
    diag: Vec<f64>,
}

impl NormPower {
    pub fn new(p: f64, diag: Vec<f64>) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidArgument(format!("norm-power needs p > 1, got {p}")));
        }
        if diag.is_empty() || diag.len() > 2 {
            return Err(Error::UnsupportedDimension(diag.len()));
        }
        if diag.iter().any(|d| !(*d > 0.0)) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(NormPower { p, diag })
    }

    fn conj_exponent(&self) -> f64 {
        self.p / (self.p - 1.0)
    }
}

impl ConvexFunction for NormPower {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn primal(&self, x: &Vector) -> ExtReal {
        let n: f64 = self.diag.iter().enumerate().map(|(a, d)| (d * x[a]).powi(2)).sum::<f64>().sqrt();
        ExtReal::new(n.powf(self.p) / self.p)
    }

    fn dual(&self, y: &Vector) -> ExtReal {
        let q = self.conj_exponent();
        let n: f64 = self.diag.iter().enumerate().map(|(a, d)| (y[a] / d).powi(2)).sum::<f64>().sqrt();
        ExtReal::new(n.powf(q) / q)
    }

    fn dual_domain(&self) -> DomainDescriptor {
        DomainDescriptor::FullSpace
    }

    fn label(&self) -> String {
        let d: Vec<String> = self.diag.iter().map(|d| d.to_string()).collect();
        format!("norm-power p={} diag={}", self.p, d.join(","))
    }
}

/// A sampled function, replaced by its closed convex hull. The primal is the
/// multilinear interpolant of the hull, the conjugate the discrete supremum
/// over the samples.
#[derive(Debug, Clone)]
pub struct GridBacked {
    closure: GridFunction,
    conj: Conjugator,
    domain: DomainDescriptor,
    source: String,
}

impl GridBacked {
    pub fn new(grid: GridFunction, source: impl Into<String>) -> Result<Self> {
        let closure = biconjugate(&grid)?;
        let conj = Conjugator::new(&closure)?;
        let domain = estimate_grid_dual_domain(&conj, closure.spec());
        Ok(GridBacked { closure, conj, domain, source: source.into() })
    }

    pub fn grid(&self) -> &GridFunction {
        &self.closure
    }

    /// `2·h·L` for this grid.
    pub fn tolerance(&self) -> f64 {
        crate::config::grid_tol(self.closure.spec().max_spacing(), self.closure.lipschitz_estimate())
    }
}

impl ConvexFunction for GridBacked {
    fn dim(&self) -> usize {
        self.closure.spec().dim()
    }

    fn primal(&self, x: &Vector) -> ExtReal {
        self.closure.interpolate(x)
    }

    fn dual(&self, y: &Vector) -> ExtReal {
        self.conj.eval(y)
    }

    fn dual_domain(&self) -> DomainDescriptor {
        self.domain.clone()
    }

    fn label(&self) -> String {
        format!("grid file={}", self.source)
    }

    fn sample_primal(&self, grid: &GridSpec) -> Result<GridFunction> {
        GridFunction::sample(grid, |x| self.closure.interpolate(x))
    }
}
