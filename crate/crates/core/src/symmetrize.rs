//! Rotations of functions, rotation epi-means and rotational
//! epi-symmetrization, all acting exactly on conjugates.

use std::f64::consts::PI;

use serde::Serialize;

use crate::config::Resolution;
use crate::domain::DomainDescriptor;
use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::handle::{ConvexFunction, FunctionHandle};
use crate::rotation::{Rotation, RotationGrid};
use crate::transform::dual_domain_radius;
use crate::vector::Vector;

/// Default starting quadrature order on SO(2).
pub const DEFAULT_ORDER: usize = 128;
/// Largest order reached by automatic doubling.
pub const MAX_ORDER: usize = 1024;
const STABLE_TOL: f64 = 1e-8;

struct Rotated {
    rot: Rotation,
    inner: FunctionHandle,
}

impl ConvexFunction for Rotated {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn primal(&self, x: &Vector) -> ExtReal {
        self.inner.eval_primal(&self.rot.apply_inverse(x))
    }

    fn dual(&self, y: &Vector) -> ExtReal {
        self.inner.eval_dual(&self.rot.apply_inverse(y))
    }

    fn dual_domain(&self) -> DomainDescriptor {
        self.inner.dual_domain().rotated(&self.rot)
    }

    fn label(&self) -> String {
        format!("rotate({:?}, {})", self.rot, self.inner.label())
    }
}

/// `ψ ∘ ϑ⁻¹`, exact at both oracles.
pub fn rotate(h: &FunctionHandle, rot: &Rotation) -> Result<FunctionHandle> {
    crate::error::check_dim(h.dim(), rot.dim())?;
    Ok(FunctionHandle::new(Rotated { rot: *rot, inner: h.clone() }))
}

/// Sum in a fixed binary-tree order; `+∞` absorbs.
pub fn tree_sum(vals: &[ExtReal]) -> ExtReal {
    match vals.len() {
        0 => ExtReal::ZERO,
        1 => vals[0],
        n => tree_sum(&vals[..n / 2]) + tree_sum(&vals[n / 2..]).value(),
    }
}

/// `T_Θ(ψ) = (1/m) ⊡ □ᵢ (ψ ∘ ϑᵢ⁻¹)`, with conjugate `(1/m) Σᵢ ℒψ(ϑᵢ⁻¹ y)`.
pub fn rotation_epi_mean(h: &FunctionHandle, theta: &RotationGrid) -> Result<FunctionHandle> {
    rotation_epi_mean_with(h, theta, Resolution::default())
}

pub fn rotation_epi_mean_with(h: &FunctionHandle, theta: &RotationGrid, res: Resolution) -> Result<FunctionHandle> {
    crate::error::check_dim(h.dim(), theta.dim())?;
    h.check_coercive()?;
    let rots = theta.rotations().to_vec();
    let domain = rots
        .iter()
        .fold(DomainDescriptor::FullSpace, |d, r| d.intersect(&h.dual_domain().rotated(r)));
    let m = rots.len() as f64;
    let inner = h.clone();
    let label = format!("epimean(m={}, {})", rots.len(), h.label());
    Ok(FunctionHandle::from_dual_with(h.dim(), domain, label, res, move |y| {
        let vals: Vec<ExtReal> = rots.iter().map(|r| inner.eval_dual(&r.apply_inverse(y))).collect();
        tree_sum(&vals) * (1.0 / m)
    }))
}

/// A planar function `x ↦ g(|x|)` given by a one-dimensional even profile;
/// the conjugate is radial too, so both oracles reduce to the profile.
struct Radial {
    profile: FunctionHandle,
    domain: DomainDescriptor,
    label: String,
}

impl ConvexFunction for Radial {
    fn dim(&self) -> usize {
        2
    }

    fn primal(&self, x: &Vector) -> ExtReal {
        self.profile.eval_primal(&Vector::new1(x.norm()))
    }

    fn dual(&self, y: &Vector) -> ExtReal {
        self.profile.eval_dual(&Vector::new1(y.norm()))
    }

    fn dual_domain(&self) -> DomainDescriptor {
        self.domain.clone()
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// Quadrature details of a symmetrization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetrizationReport {
    /// Order actually used (equal to 2 in dimension one: the reflection mean).
    pub order: usize,
    /// Largest probe change between the last two orders.
    pub richardson_delta: f64,
    /// `r(ψ)`, the radius of the dual domain of the result.
    pub radius: f64,
}

fn circle_mean(h: &FunctionHandle, y: &Vector, q: usize) -> ExtReal {
    let vals: Vec<ExtReal> = (0..q)
        .map(|k| h.eval_dual(&Rotation::Angle(2.0 * PI * k as f64 / q as f64).apply_inverse(y)))
        .collect();
    tree_sum(&vals) * (1.0 / q as f64)
}

fn probe_points(radius: f64) -> Vec<Vector> {
    let s = if radius.is_finite() { radius } else { 1.0 };
    let mut out = Vec::with_capacity(32);
    for f in [0.2, 0.45, 0.7, 0.95] {
        for k in 0..8 {
            out.push(Vector::polar(f * s, 0.3 + 2.0 * PI * k as f64 / 8.0));
        }
    }
    out
}

/// `ψ_rot`, the function whose conjugate is the Haar average of the rotated
/// conjugates. In the plane the average is a trapezoid rule over `order`
/// equally spaced angles, doubled until 32 probe values move by less than
/// `1e−8` (up to [`MAX_ORDER`]), evaluated along one ray so the result is
/// exactly radial; on the line it is the exact reflection mean.
pub fn rotational_symmetrization(h: &FunctionHandle, order: usize) -> Result<FunctionHandle> {
    Ok(rotational_symmetrization_report(h, order, Resolution::default())?.0)
}

pub fn rotational_symmetrization_report(
    h: &FunctionHandle,
    order: usize,
    res: Resolution,
) -> Result<(FunctionHandle, SymmetrizationReport)> {
    h.check_coercive()?;
    let dr = dual_domain_radius(h)?;
    let inner = h.clone();
    match h.dim() {
        1 => {
            let domain = h.dual_domain().intersect(&h.dual_domain().rotated(&Rotation::Reflection(-1)));
            let label = format!("rot({})", h.label());
            let f = FunctionHandle::from_dual_with(1, domain, label, res, move |y| {
                (inner.eval_dual(y) + inner.eval_dual(&-*y).value()) * 0.5
            });
            Ok((f, SymmetrizationReport { order: 2, richardson_delta: 0.0, radius: dr.radius }))
        }
        2 => {
            if order < 8 {
                return Err(Error::InvalidArgument(format!("quadrature order {order} below 8")));
            }
            let probes = probe_points(dr.radius);
            let mut q = order;
            let mut prev: Vec<ExtReal> = probes.iter().map(|y| circle_mean(h, y, q)).collect();
            let mut delta = f64::INFINITY;
            while 2 * q <= MAX_ORDER.max(order) {
                let next: Vec<ExtReal> = probes.iter().map(|y| circle_mean(h, y, 2 * q)).collect();
                delta = prev
                    .iter()
                    .zip(&next)
                    .map(|(a, b)| if a.is_finite() && b.is_finite() { (a.value() - b.value()).abs() } else { 0.0 })
                    .fold(0.0, f64::max);
                let scale = next.iter().filter(|v| v.is_finite()).map(|v| v.value().abs()).fold(1.0, f64::max);
                if delta < STABLE_TOL * scale {
                    break;
                }
                q *= 2;
                prev = next;
            }
            if delta.is_infinite() {
                // no doubling was possible; compare against the doubled order once
                delta = probes
                    .iter()
                    .map(|y| (circle_mean(h, y, q), circle_mean(h, y, 2 * q)))
                    .map(|(a, b)| if a.is_finite() && b.is_finite() { (a.value() - b.value()).abs() } else { 0.0 })
                    .fold(0.0, f64::max);
            }
            let radius = dr.radius;
            let domain = if radius.is_infinite() {
                DomainDescriptor::FullSpace
            } else if dr.exact {
                DomainDescriptor::Ball(radius)
            } else {
                DomainDescriptor::Estimated { radius, band: dr.band }
            };
            let label = format!("rot(Q={q}, {})", h.label());
            let profile = FunctionHandle::from_dual_with(1, domain.clone(), label.clone(), res, move |t| {
                let s = t.x().abs();
                if s > radius * (1.0 + 1e-12) {
                    ExtReal::INFINITY
                } else {
                    circle_mean(&inner, &Vector::new2(s, 0.0), q)
                }
            });
            let f = FunctionHandle::new(Radial { profile, domain, label });
            Ok((f, SymmetrizationReport { order: q, richardson_delta: delta, radius }))
        }
        n => Err(Error::UnsupportedDimension(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{Quadratic, Support};
    use crate::geometry::Polytope;

    #[test]
    fn identity_mean_is_the_function() {
        let q = FunctionHandle::new(Quadratic::new(2, &[1.0, 0.3, 2.0], None).unwrap());
        let t = rotation_epi_mean(&q, &RotationGrid::identity(2)).unwrap();
        for y in [Vector::new2(0.3, -1.2), Vector::new2(2.0, 1.0)] {
            assert_eq!(t.eval_dual(&y).value(), q.eval_dual(&y).value());
        }
    }

    #[test]
    fn reflection_mean_of_shifted_quadratic() {
        let q = FunctionHandle::new(Quadratic::new(1, &[2.0], Some(Vector::new1(1.0))).unwrap());
        let t = rotation_epi_mean(&q, &RotationGrid::reflections()).unwrap();
        for y in [-2.0, 0.5, 3.0] {
            assert!((t.eval_dual(&Vector::new1(y)).value() - y * y / 4.0).abs() < 1e-15);
        }
        assert!((t.eval_primal(&Vector::new1(1.5)).value() - 2.25).abs() < 1e-3);
    }

    #[test]
    fn octagon_mean_of_square() {
        let sq = FunctionHandle::new(Support::new(Polytope::cube(2, -1.0, 1.0).unwrap()).unwrap());
        let theta = RotationGrid::new(vec![Rotation::angle(0.0), Rotation::angle(PI / 4.0)]).unwrap();
        let t = rotation_epi_mean(&sq, &theta).unwrap();
        assert_eq!(t.eval_dual(&Vector::new2(0.9, 0.0)).value(), 0.0);
        assert!(t.eval_dual(&Vector::new2(0.8, 0.8)).is_pos_infinite());
        assert!((t.dual_domain().inradius() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetrized_quadratic() {
        let q = FunctionHandle::new(Quadratic::diagonal(&[1.0, 4.0]).unwrap());
        let (r, rep) = rotational_symmetrization_report(&q, 256, Resolution::default()).unwrap();
        assert_eq!(rep.order, 256);
        for y in probe_points(1.0) {
            assert!((r.eval_dual(&y).value() - 5.0 / 16.0 * y.norm_sq()).abs() < 1e-12);
        }
        let radial = FunctionHandle::new(Quadratic::diagonal(&[1.0, 1.0]).unwrap());
        let rr = rotational_symmetrization(&radial, 64).unwrap();
        assert!((rr.eval_dual(&Vector::new2(0.3, 0.4)).value() - 0.125).abs() < 1e-14);
        assert!(rotational_symmetrization(&radial, 4).is_err());
    }

    #[test]
    fn symmetrized_square_support_is_ball_indicator_dual() {
        let sq = FunctionHandle::new(Support::new(Polytope::cube(2, -1.0, 1.0).unwrap()).unwrap());
        let r = rotational_symmetrization(&sq, 128).unwrap();
        assert_eq!(r.eval_dual(&Vector::new2(0.6, 0.79)).value(), 0.0);
        assert!(r.eval_dual(&Vector::new2(0.6, 0.81)).is_pos_infinite());
        assert_eq!(r.dual_domain(), DomainDescriptor::Ball(1.0));
    }
}
