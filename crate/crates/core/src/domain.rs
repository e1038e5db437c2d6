use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{clip_polygon, max_angular_gap, Halfspace, Polytope};
use crate::rotation::Rotation;
use crate::vector::Vector;

/// Tri-state membership answer for domains known only approximately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Membership {
    Inside,
    Outside,
    Indeterminate,
}

/// Description of the closure of `dom(ℒψ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DomainDescriptor {
    FullSpace,
    /// Centered closed ball.
    Ball(f64),
    /// H-representation with unit normals; contains the origin in its interior.
    Polytope(Vec<Halfspace>),
    /// Only a centered ball of `radius` (± `band`) is known to lie in the domain.
    Estimated { radius: f64, band: f64 },
    Intersection(Vec<DomainDescriptor>),
}

impl DomainDescriptor {
    pub fn polytope(p: &Polytope) -> Result<Self> {
        if !p.origin_in_interior() {
            return Err(Error::OriginNotInterior);
        }
        Ok(DomainDescriptor::Polytope(p.facets().to_vec()))
    }

    /// `r(ψ)`: radius of the largest open centered ball inside the domain.
    pub fn inradius(&self) -> f64 {
        match self {
            DomainDescriptor::FullSpace => f64::INFINITY,
            DomainDescriptor::Ball(r) => *r,
            DomainDescriptor::Polytope(hs) => hs.iter().map(|h| h.offset).fold(f64::INFINITY, f64::min),
            DomainDescriptor::Estimated { radius, .. } => *radius,
            DomainDescriptor::Intersection(parts) => parts.iter().map(|d| d.inradius()).fold(f64::INFINITY, f64::min),
        }
    }

    pub fn is_estimated(&self) -> bool {
        match self {
            DomainDescriptor::Estimated { .. } => true,
            DomainDescriptor::Intersection(parts) => parts.iter().any(|d| d.is_estimated()),
            _ => false,
        }
    }

    /// Confidence band of estimated parts (zero when exact).
    pub fn band(&self) -> f64 {
        match self {
            DomainDescriptor::Estimated { band, .. } => *band,
            DomainDescriptor::Intersection(parts) => parts.iter().map(|d| d.band()).fold(0.0, f64::max),
            _ => 0.0,
        }
    }

    /// Membership in the closed domain.
    pub fn contains(&self, y: &Vector) -> Membership {
        const TOL: f64 = 1e-12;
        match self {
            DomainDescriptor::FullSpace => Membership::Inside,
            DomainDescriptor::Ball(r) => {
                if y.norm() <= r * (1.0 + TOL) {
                    Membership::Inside
                } else {
                    Membership::Outside
                }
            }
            DomainDescriptor::Polytope(hs) => {
                if hs.iter().all(|h| h.violation(y) <= TOL * (1.0 + h.offset.abs())) {
                    Membership::Inside
                } else {
                    Membership::Outside
                }
            }
            DomainDescriptor::Estimated { radius, band } => {
                if y.norm() < radius - band {
                    Membership::Inside
                } else {
                    Membership::Indeterminate
                }
            }
            DomainDescriptor::Intersection(parts) => {
                let mut out = Membership::Inside;
                for p in parts {
                    match p.contains(y) {
                        Membership::Outside => return Membership::Outside,
                        Membership::Indeterminate => out = Membership::Indeterminate,
                        Membership::Inside => {}
                    }
                }
                out
            }
        }
    }

    /// Domain of `ℒ(ψ ∘ ϑ⁻¹) = ℒψ ∘ ϑ⁻¹`, i.e. `ϑ · dom`.
    pub fn rotated(&self, rot: &Rotation) -> Self {
        match self {
            DomainDescriptor::Polytope(hs) => DomainDescriptor::Polytope(
                hs.iter().map(|h| Halfspace { normal: rot.apply(&h.normal), offset: h.offset }).collect(),
            ),
            DomainDescriptor::Intersection(parts) => {
                DomainDescriptor::Intersection(parts.iter().map(|p| p.rotated(rot)).collect())
            }
            other => other.clone(),
        }
    }

    pub fn intersect(&self, other: &DomainDescriptor) -> Self {
        let mut parts = Vec::new();
        for d in [self, other] {
            match d {
                DomainDescriptor::FullSpace => {}
                DomainDescriptor::Intersection(ps) => parts.extend(ps.iter().cloned()),
                d => parts.push(d.clone()),
            }
        }
        match parts.len() {
            0 => DomainDescriptor::FullSpace,
            1 => parts.pop().unwrap(),
            _ => DomainDescriptor::Intersection(parts),
        }
    }

    /// Minkowski difference `self ⊖ δB`.
    pub fn shrink(&self, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::InvalidArgument(format!("shrink amount must be positive, got {delta}")));
        }
        if delta >= self.inradius() {
            return Err(Error::Empty(format!("Minkowski difference by {delta} has empty interior")));
        }
        Ok(match self {
            DomainDescriptor::FullSpace => DomainDescriptor::FullSpace,
            DomainDescriptor::Ball(r) => DomainDescriptor::Ball(r - delta),
            DomainDescriptor::Polytope(hs) => DomainDescriptor::Polytope(
                hs.iter().map(|h| Halfspace { normal: h.normal, offset: h.offset - delta }).collect(),
            ),
            DomainDescriptor::Estimated { radius, band } => {
                DomainDescriptor::Estimated { radius: radius - delta, band: *band }
            }
            DomainDescriptor::Intersection(parts) => {
                DomainDescriptor::Intersection(parts.iter().map(|p| p.shrink(delta)).collect::<Result<_>>()?)
            }
        })
    }

    fn parts(&self, ball: &mut Option<f64>, hs: &mut Vec<Halfspace>) {
        match self {
            DomainDescriptor::FullSpace => {}
            DomainDescriptor::Ball(r) | DomainDescriptor::Estimated { radius: r, .. } => {
                *ball = Some(ball.map_or(*r, |b| b.min(*r)));
            }
            DomainDescriptor::Polytope(h) => hs.extend(h.iter().copied()),
            DomainDescriptor::Intersection(ps) => ps.iter().for_each(|p| p.parts(ball, hs)),
        }
    }

    /// Membership in the closed region that [`DomainDescriptor::support`]
    /// describes (estimated parts count as their certified ball).
    pub fn region_contains(&self, y: &Vector) -> bool {
        let mut ball = None;
        let mut hs = Vec::new();
        self.parts(&mut ball, &mut hs);
        ball.is_none_or(|r| y.norm() <= r * (1.0 + 1e-12))
            && hs.iter().all(|h| h.violation(y) <= 1e-12 * (1.0 + h.offset.abs()))
    }

    /// Radius of a centered ball containing the domain, when bounded.
    pub fn outer_radius(&self, dim: usize) -> Option<f64> {
        let mut ball = None;
        let mut hs = Vec::new();
        self.parts(&mut ball, &mut hs);
        let poly_r = polytope_outer_radius(dim, &hs);
        match (ball, poly_r) {
            (Some(b), Some(p)) => Some(b.min(p)),
            (b, p) => b.or(p),
        }
    }

    /// Support function of the closed domain at `x` (`+∞` when unbounded in that direction).
    pub fn support(&self, x: &Vector) -> f64 {
        let mut ball = None;
        let mut hs = Vec::new();
        self.parts(&mut ball, &mut hs);
        region_support(x, ball, &hs)
    }
}

fn polytope_outer_radius(dim: usize, hs: &[Halfspace]) -> Option<f64> {
    if hs.is_empty() {
        return None;
    }
    if dim == 2 {
        let normals: Vec<Vector> = hs.iter().map(|h| h.normal).collect();
        if max_angular_gap(&normals) >= std::f64::consts::PI {
            return None;
        }
    }
    Polytope::from_halfspaces(dim, hs).ok().map(|p| p.outer_radius())
}

fn region_support(x: &Vector, ball: Option<f64>, hs: &[Halfspace]) -> f64 {
    if x.dim() == 1 {
        let mut hi = ball.unwrap_or(f64::INFINITY);
        let mut lo = -hi;
        for h in hs {
            if h.normal.x() > 0.0 {
                hi = hi.min(h.offset / h.normal.x());
            } else {
                lo = lo.max(h.offset / h.normal.x());
            }
        }
        let s = x.x();
        return if s > 0.0 {
            s * hi
        } else if s < 0.0 {
            s * lo
        } else {
            0.0
        };
    }
    match ball {
        None => match Polytope::from_halfspaces(2, hs) {
            Ok(p) => p.support_value(x),
            Err(_) => {
                if x.norm() == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        },
        Some(rho) => {
            let xn = x.norm();
            if xn == 0.0 {
                return 0.0;
            }
            let apex = x.scale(rho / xn);
            if hs.iter().all(|h| h.violation(&apex) <= 0.0) {
                return rho * xn;
            }
            let m = 1.01 * rho;
            let mut poly = vec![Vector::new2(-m, -m), Vector::new2(m, -m), Vector::new2(m, m), Vector::new2(-m, m)];
            for h in hs {
                poly = clip_polygon(&poly, h);
                if poly.is_empty() {
                    return f64::NEG_INFINITY;
                }
            }
            let mut best = f64::NEG_INFINITY;
            let k = poly.len();
            for i in 0..k {
                let p = poly[i];
                let q = poly[(i + 1) % k];
                if p.norm() <= rho {
                    best = best.max(p.dot(x));
                }
                // segment-circle intersections p + t(q-p), t in [0, 1]
                let d = q - p;
                let a = d.norm_sq();
                if a == 0.0 {
                    continue;
                }
                let b = 2.0 * p.dot(&d);
                let c = p.norm_sq() - rho * rho;
                let disc = b * b - 4.0 * a * c;
                if disc < 0.0 {
                    continue;
                }
                let sq = disc.sqrt();
                for t in [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)] {
                    if (0.0..=1.0).contains(&t) {
                        best = best.max((p + d * t).dot(x));
                    }
                }
            }
            best
        }
    }
}
