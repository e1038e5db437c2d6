//! Supporting affine minorants and outer linearizations `q_{ψ,Y}`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{DomainDescriptor, Membership};
use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::geometry::{max_angular_gap, Polytope};
use crate::handle::{ConvexFunction, FunctionHandle};
use crate::slopes::SlopeSet;
use crate::transform::dual_domain_radius;
use crate::vector::Vector;

/// Angular slack used when deciding whether directions positively span.
pub const SPAN_TOL: f64 = 1e-9;
const SLOPE_TOL: f64 = 1e-12;

/// `x ↦ ⟨x, slope⟩ + intercept`; an intercept of `−∞` marks an improper piece.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffinePiece {
    pub slope: Vector,
    pub intercept: ExtReal,
}

impl AffinePiece {
    pub fn is_proper(&self) -> bool {
        self.intercept.is_finite()
    }

    pub fn eval(&self, x: &Vector) -> ExtReal {
        self.intercept + x.dot(&self.slope)
    }
}

/// Maximal affine minorant `ℓ_{ψ,y}(x) = ⟨x, y⟩ − ℒψ(y)`.
pub fn support_affine(h: &FunctionHandle, y: &Vector) -> AffinePiece {
    AffinePiece { slope: *y, intercept: -h.eval_dual(y) }
}

/// Maximum of finitely many proper affine pieces. With no pieces the
/// function is identically `−∞` (degenerate).
#[derive(Debug, Clone, Serialize)]
pub struct PiecewiseAffine {
    dim: usize,
    pieces: Vec<AffinePiece>,
    source: String,
}

impl PiecewiseAffine {
    pub fn new(dim: usize, pieces: Vec<AffinePiece>, source: impl Into<String>) -> Self {
        let mut kept: Vec<AffinePiece> = Vec::with_capacity(pieces.len());
        for p in pieces.into_iter().filter(AffinePiece::is_proper) {
            match kept.iter_mut().find(|k| k.slope.dist(&p.slope) <= SLOPE_TOL) {
                Some(k) => k.intercept = k.intercept.max(p.intercept),
                None => kept.push(p),
            }
        }
        PiecewiseAffine { dim, pieces: kept, source: source.into() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn is_degenerate(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn slopes(&self) -> Vec<Vector> {
        self.pieces.iter().map(|p| p.slope).collect()
    }

    pub fn eval(&self, x: &Vector) -> ExtReal {
        self.pieces.iter().map(|p| p.eval(x)).fold(ExtReal::NEG_INFINITY, ExtReal::max)
    }

    /// Coercive iff the slopes positively span the space.
    pub fn is_coercive(&self) -> bool {
        !self.is_degenerate() && spanning_verdict(&self.slopes()) == Verdict::Yes
    }

    /// `ℒq(y)`: the lower convex envelope of the points `(yᵢ, ℒψ(yᵢ))` at `y`,
    /// `+∞` outside `conv Y`.
    pub fn conjugate(&self, y: &Vector) -> ExtReal {
        let pts = self.slopes();
        let vals: Vec<f64> = self.pieces.iter().map(|p| -p.intercept.value()).collect();
        lower_envelope(&pts, &vals, y)
    }

    /// `min q = −ℒq(0)` (`−∞` when not coercive).
    pub fn min_value(&self) -> ExtReal {
        -self.conjugate(&Vector::zero(self.dim))
    }

    /// Wraps a coercive linearization as a function handle.
    pub fn into_handle(self) -> Result<FunctionHandle> {
        if self.is_degenerate() {
            return Err(Error::Degenerate(format!("outer linearization of {} is identically −∞", self.source)));
        }
        if !self.is_coercive() {
            return Err(Error::NotCoercive(format!("slopes of {} do not positively span", self.source)));
        }
        Ok(FunctionHandle::new(self))
    }
}

impl ConvexFunction for PiecewiseAffine {
    fn dim(&self) -> usize {
        self.dim
    }

    fn primal(&self, x: &Vector) -> ExtReal {
        self.eval(x)
    }

    fn dual(&self, y: &Vector) -> ExtReal {
        self.conjugate(y)
    }

    fn dual_domain(&self) -> DomainDescriptor {
        match Polytope::from_vertices(&self.slopes()) {
            Ok(p) if p.origin_in_interior() => DomainDescriptor::Polytope(p.facets().to_vec()),
            _ => DomainDescriptor::Estimated { radius: 0.0, band: 0.0 },
        }
    }

    fn label(&self) -> String {
        format!("linearization of {} with {} slopes", self.source, self.pieces.len())
    }

    fn as_piecewise_affine(&self) -> Option<&PiecewiseAffine> {
        Some(self)
    }
}

/// Value at `y` of the lower convex envelope of `(pᵢ, vᵢ)`, by enumerating
/// the points, segments and triangles that contain `y`.
pub fn lower_envelope(pts: &[Vector], vals: &[f64], y: &Vector) -> ExtReal {
    let n = pts.len();
    if n == 0 {
        return ExtReal::INFINITY;
    }
    let scale = pts.iter().map(|p| p.norm()).fold(y.norm(), f64::max).max(1.0);
    let tol = 1e-12 * scale;
    let mut best = f64::INFINITY;
    if y.dim() == 1 {
        for i in 0..n {
            for j in i..n {
                let (a, b) = (pts[i].x(), pts[j].x());
                if (a - y.x()).abs() <= tol {
                    best = best.min(vals[i]);
                }
                if (a - b).abs() > tol && (y.x() - a) * (y.x() - b) <= 0.0 {
                    let t = (y.x() - a) / (b - a);
                    best = best.min((1.0 - t) * vals[i] + t * vals[j]);
                }
            }
        }
        return ExtReal::new(best);
    }
    for i in 0..n {
        let d = *y - pts[i];
        if d.norm() <= tol {
            best = best.min(vals[i]);
        }
        for j in i + 1..n {
            let e = pts[j] - pts[i];
            let len2 = e.norm_sq();
            if len2 > 0.0 && e.cross(&d).abs() <= tol * e.norm() {
                let t = e.dot(&d) / len2;
                if (-1e-12..=1.0 + 1e-12).contains(&t) {
                    best = best.min((1.0 - t) * vals[i] + t * vals[j]);
                }
            }
            for k in j + 1..n {
                let f = pts[k] - pts[i];
                let det = e.cross(&f);
                if det.abs() <= tol * tol {
                    continue;
                }
                let b = d.cross(&f) / det;
                let c = e.cross(&d) / det;
                let a = 1.0 - b - c;
                if a >= -1e-12 && b >= -1e-12 && c >= -1e-12 {
                    best = best.min(a * vals[i] + b * vals[j] + c * vals[k]);
                }
            }
        }
    }
    ExtReal::new(best)
}

/// `q_{ψ,Y}(x) = max_{y ∈ Y} ⟨x, y⟩ − ℒψ(y)`; slopes outside `dom(ℒψ)` are dropped.
pub fn outer_linearization(h: &FunctionHandle, y: &SlopeSet) -> PiecewiseAffine {
    let pieces: Vec<AffinePiece> = y.points().par_iter().map(|p| support_affine(h, p)).collect();
    PiecewiseAffine::new(h.dim(), pieces, h.label())
}

/// Tri-state answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Yes,
    No,
    Indeterminate,
}

impl Verdict {
    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

/// Whether the points positively span the space, indeterminate within
/// [`SPAN_TOL`] of degeneracy.
pub fn spanning_verdict(points: &[Vector]) -> Verdict {
    let Some(first) = points.first() else {
        return Verdict::No;
    };
    if first.dim() == 1 {
        let neg = points.iter().any(|p| p.x() < 0.0);
        let pos = points.iter().any(|p| p.x() > 0.0);
        return if neg && pos { Verdict::Yes } else { Verdict::No };
    }
    let gap = max_angular_gap(points);
    if gap < PI - SPAN_TOL {
        Verdict::Yes
    } else if gap > PI + SPAN_TOL {
        Verdict::No
    } else {
        Verdict::Indeterminate
    }
}

/// `pos(Y) = ℝⁿ`, equivalently the origin is interior to `conv Y`.
pub fn origin_in_interior_hull(y: &SlopeSet) -> bool {
    spanning_verdict(y.points()).is_yes()
}

/// Indices of a positively spanning subset with at most `2n` elements.
pub fn spanning_subset(y: &SlopeSet) -> Result<Vec<usize>> {
    if !origin_in_interior_hull(y) {
        return Err(Error::NotSpanning);
    }
    let pts = y.points();
    if y.dim() == 1 {
        let neg = pts.iter().position(|p| p.x() < 0.0).expect("spanning");
        let pos = pts.iter().position(|p| p.x() > 0.0).expect("spanning");
        let mut v = vec![neg, pos];
        v.sort_unstable();
        return Ok(v);
    }
    let start = pts.iter().position(|p| p.norm() > 0.0).expect("spanning");
    let a0 = pts[start].angle();
    // counter-clockwise offset from the starting direction, in [0, 2π)
    let offset = |i: usize| (pts[i].angle() - a0).rem_euclid(2.0 * PI);
    let mut chosen = vec![start];
    let mut cur = 0.0;
    while 2.0 * PI - cur >= PI - SPAN_TOL {
        // farthest reachable direction with a jump below π
        let next = (0..pts.len())
            .filter(|&i| pts[i].norm() > 0.0)
            .filter(|&i| {
                let o = offset(i);
                o > cur && o - cur < PI - SPAN_TOL
            })
            .max_by(|&i, &j| offset(i).total_cmp(&offset(j)))
            .ok_or(Error::NotSpanning)?;
        chosen.push(next);
        cur = offset(next);
    }
    Ok(chosen)
}

/// `tY` for `t ∈ (0, 1)`.
pub fn scale_slopes(y: &SlopeSet, t: f64) -> Result<SlopeSet> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidArgument(format!("slope scale must lie in (0, 1), got {t}")));
    }
    y.scale(t)
}

/// Result of [`check_admissible`].
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityVerdict {
    /// `q_{ψ,Y}` is proper and coercive: some `Y_o ⊆ Y ∩ dom(ℒψ)` positively spans.
    pub in_conv_c: Verdict,
    pub spanning_subset: Option<Vec<usize>>,
    /// The stronger condition with `Y_o` inside the open ball `r(ψ)·B`.
    pub inside_interior_ball: Verdict,
    pub detail: String,
}

/// Admissibility of a slope set for `ψ`.
pub fn check_admissible(h: &FunctionHandle, y: &SlopeSet) -> AdmissibilityVerdict {
    let domain = h.dual_domain();
    let member: Vec<Membership> = y
        .points()
        .iter()
        .map(|p| match domain.contains(p) {
            Membership::Indeterminate => Membership::Indeterminate,
            _ if h.eval_dual(p).is_finite() => Membership::Inside,
            _ => Membership::Outside,
        })
        .collect();
    let inside: Vec<usize> = (0..y.len()).filter(|&i| member[i] == Membership::Inside).collect();
    let maybe: Vec<usize> = (0..y.len()).filter(|&i| member[i] != Membership::Outside).collect();
    let pick = |idx: &[usize]| -> Vec<Vector> { idx.iter().map(|&i| y.points()[i]).collect() };

    let (in_conv_c, spanning) = match spanning_verdict(&pick(&inside)) {
        Verdict::Yes => {
            let sub = SlopeSet::new(pick(&inside)).and_then(|s| spanning_subset(&s)).ok();
            (Verdict::Yes, sub.map(|s| s.into_iter().map(|k| inside[k]).collect()))
        }
        v => {
            let widened = spanning_verdict(&pick(&maybe));
            if v == Verdict::Indeterminate || (maybe.len() > inside.len() && widened != Verdict::No) {
                (Verdict::Indeterminate, None)
            } else {
                (Verdict::No, None)
            }
        }
    };

    let (radius, band) = match dual_domain_radius(h) {
        Ok(r) => (r.radius, r.band.max(domain.band())),
        Err(_) => (0.0, 0.0),
    };
    let strict: Vec<usize> = (0..y.len()).filter(|&i| y.points()[i].norm() < radius - band).collect();
    let near: Vec<usize> = (0..y.len()).filter(|&i| y.points()[i].norm() < radius + band).collect();
    let inside_interior_ball = match spanning_verdict(&pick(&strict)) {
        Verdict::Yes => Verdict::Yes,
        _ if band > 0.0 && spanning_verdict(&pick(&near)) != Verdict::No => Verdict::Indeterminate,
        Verdict::Indeterminate => Verdict::Indeterminate,
        _ => Verdict::No,
    };
    let outside = member.iter().filter(|m| **m == Membership::Outside).count();
    let detail = format!(
        "{} of {} slopes in dom(Lψ), {} outside, {} indeterminate; r(ψ) = {}{}",
        inside.len(),
        y.len(),
        outside,
        y.len() - inside.len() - outside,
        radius,
        if band > 0.0 { format!(" ± {band}") } else { String::new() }
    );
    AdmissibilityVerdict { in_conv_c, spanning_subset: spanning, inside_interior_ball, detail }
}
