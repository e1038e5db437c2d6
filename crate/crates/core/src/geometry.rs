//! Convex polygons (and segments in dimension one): support functions, mean
//! width, circumscribed halfspace intersections and the indicator embedding.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::Indicator;
use crate::handle::FunctionHandle;
use crate::vector::Vector;

const MERGE_TOL: f64 = 1e-10;

/// `{x : ⟨x, normal⟩ ≤ offset}` with a unit normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: f64,
}

impl Halfspace {
    /// Normalizes `normal`, scaling `offset` accordingly.
    pub fn new(normal: Vector, offset: f64) -> Self {
        let len = normal.norm();
        Halfspace { normal: normal.scale(1.0 / len), offset: offset / len }
    }

    pub fn violation(&self, x: &Vector) -> f64 {
        x.dot(&self.normal) - self.offset
    }
}

/// A bounded convex polytope with both representations.
///
/// In the plane vertices are stored counter-clockwise; on the line they are
/// the two endpoints `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vector>,
    facets: Vec<Halfspace>,
}

impl Polytope {
    /// Convex hull of `points`; collinear and duplicate points are merged.
    pub fn from_vertices(points: &[Vector]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Empty("polytope without vertices".into()));
        };
        match first.dim() {
            1 => {
                let lo = points.iter().map(|p| p.x()).fold(f64::INFINITY, f64::min);
                let hi = points.iter().map(|p| p.x()).fold(f64::NEG_INFINITY, f64::max);
                Self::segment(lo, hi)
            }
            2 => {
                let hull = convex_hull(points);
                if hull.len() < 3 {
                    return Err(Error::Empty("polygon with empty interior".into()));
                }
                let facets = facets_of(&hull);
                Ok(Polytope { dim: 2, vertices: hull, facets })
            }
            n => Err(Error::UnsupportedDimension(n)),
        }
    }

    pub fn segment(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Empty(format!("segment [{lo}, {hi}]")));
        }
        Ok(Polytope {
            dim: 1,
            vertices: vec![Vector::new1(lo), Vector::new1(hi)],
            facets: vec![
                Halfspace { normal: Vector::new1(1.0), offset: hi },
                Halfspace { normal: Vector::new1(-1.0), offset: -lo },
            ],
        })
    }

    /// The cube `[lo, hi]ⁿ`.
    pub fn cube(n: usize, lo: f64, hi: f64) -> Result<Self> {
        match n {
            1 => Self::segment(lo, hi),
            2 => Self::from_vertices(&[
                Vector::new2(lo, lo),
                Vector::new2(hi, lo),
                Vector::new2(hi, hi),
                Vector::new2(lo, hi),
            ]),
            _ => Err(Error::UnsupportedDimension(n)),
        }
    }

    /// Regular `m`-gon inscribed in the circle of radius `r`, first vertex on the x-axis.
    pub fn regular(m: usize, r: f64) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidArgument(format!("regular polygon needs m >= 3, got {m}")));
        }
        let pts: Vec<Vector> = (0..m).map(|k| Vector::polar(r, 2.0 * PI * k as f64 / m as f64)).collect();
        Self::from_vertices(&pts)
    }

    /// Bounded intersection of halfspaces; the normals must positively span.
    pub fn from_halfspaces(dim: usize, hs: &[Halfspace]) -> Result<Self> {
        match dim {
            1 => {
                let hi = hs.iter().filter(|h| h.normal.x() > 0.0).map(|h| h.offset).fold(f64::INFINITY, f64::min);
                let lo = hs.iter().filter(|h| h.normal.x() < 0.0).map(|h| -h.offset).fold(f64::NEG_INFINITY, f64::max);
                if !hi.is_finite() || !lo.is_finite() {
                    return Err(Error::NotSpanning);
                }
                Self::segment(lo, hi)
            }
            2 => {
                let normals: Vec<Vector> = hs.iter().map(|h| h.normal).collect();
                let gap = max_angular_gap(&normals);
                if gap >= PI - 1e-12 {
                    return Err(Error::NotSpanning);
                }
                let bmax = hs.iter().map(|h| h.offset.abs()).fold(0.0, f64::max);
                let m = 2.0 * bmax / (gap / 2.0).cos() + 1.0;
                let mut poly = vec![
                    Vector::new2(-m, -m),
                    Vector::new2(m, -m),
                    Vector::new2(m, m),
                    Vector::new2(-m, m),
                ];
                for h in hs {
                    poly = clip_polygon(&poly, h);
                    if poly.is_empty() {
                        return Err(Error::Empty("halfspace intersection".into()));
                    }
                }
                Self::from_vertices(&poly)
            }
            n => Err(Error::UnsupportedDimension(n)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    /// `h_P(u) = max over vertices of ⟨x, u⟩`.
    pub fn support_value(&self, u: &Vector) -> f64 {
        self.vertices.iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.facets.iter().all(|h| h.violation(x) <= tol)
    }

    /// Strict interior membership of the origin.
    pub fn origin_in_interior(&self) -> bool {
        self.facets.iter().all(|h| h.offset > MERGE_TOL)
    }

    /// Distance from the origin to the boundary (negative when outside).
    pub fn inradius_about_origin(&self) -> f64 {
        self.facets.iter().map(|h| h.offset).fold(f64::INFINITY, f64::min)
    }

    pub fn outer_radius(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn area(&self) -> f64 {
        if self.dim == 1 {
            return self.vertices[1].x() - self.vertices[0].x();
        }
        polygon_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        if self.dim == 1 {
            return 2.0 * self.area();
        }
        let n = self.vertices.len();
        (0..n).map(|i| self.vertices[i].dist(&self.vertices[(i + 1) % n])).sum()
    }

    /// Mean width via the polygon fast path `w = perimeter / π`.
    pub fn mean_width(&self) -> Result<f64> {
        if self.dim != 2 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        Ok(self.perimeter() / PI)
    }

    /// Mean width as `(1/π) ∫₀^{2π} h_P(θ) dθ` by the trapezoid rule.
    pub fn mean_width_quadrature(&self, points: usize) -> Result<f64> {
        if self.dim != 2 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        let h = 2.0 * PI / points as f64;
        let s: f64 = (0..points).map(|k| self.support_value(&Vector::polar(1.0, k as f64 * h))).sum();
        Ok(s * h / PI)
    }

    /// Radius of the centered ball with the same mean width.
    pub fn rot_radius(&self) -> Result<f64> {
        Ok(self.mean_width()? / 2.0)
    }

    pub fn translate(&self, t: &Vector) -> Polytope {
        let vertices: Vec<Vector> = self.vertices.iter().map(|v| *v + *t).collect();
        let facets = self
            .facets
            .iter()
            .map(|h| Halfspace { normal: h.normal, offset: h.offset + h.normal.dot(t) })
            .collect();
        Polytope { dim: self.dim, vertices, facets }
    }

    pub fn centroid(&self) -> Vector {
        if self.dim == 1 {
            return Vector::new1(0.5 * (self.vertices[0].x() + self.vertices[1].x()));
        }
        let n = self.vertices.len();
        let (mut cx, mut cy, mut a) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let w = p.cross(&q);
            a += w;
            cx += (p.x() + q.x()) * w;
            cy += (p.y() + q.y()) * w;
        }
        Vector::new2(cx / (3.0 * a), cy / (3.0 * a))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some("poly") => {}
            other => return Err(Error::Parse(format!("expected `poly` header, found {other:?}"))),
        }
        let mut pts = Vec::new();
        for line in lines {
            let mut toks = line.split_whitespace();
            if toks.next() != Some("v") {
                return Err(Error::Parse(format!("expected vertex line `v x y`, found `{line}`")));
            }
            let coords: Vec<f64> = toks
                .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("{t}: {e}"))))
                .collect::<Result<_>>()?;
            pts.push(Vector::from_slice(&coords)?);
        }
        if let Some(p) = pts.first() {
            if pts.iter().any(|q| q.dim() != p.dim()) {
                return Err(Error::Parse("vertices of mixed dimension".into()));
            }
        }
        Self::from_vertices(&pts)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_file_string(&self) -> String {
        let mut s = String::from("poly\n");
        for v in &self.vertices {
            let coords: Vec<String> = v.coords().iter().map(|c| format!("{c:?}")).collect();
            let _ = writeln!(s, "v {}", coords.join(" "));
        }
        s
    }
}

/// Andrew's monotone chain; returns the hull counter-clockwise without
/// collinear points.
pub fn convex_hull(points: &[Vector]) -> Vec<Vector> {
    let mut pts: Vec<Vector> = points.to_vec();
    pts.sort_by(|a, b| a.x().total_cmp(&b.x()).then(a.y().total_cmp(&b.y())));
    pts.dedup_by(|a, b| a.dist(b) <= MERGE_TOL);
    if pts.len() < 3 {
        return pts;
    }
    // left turn by more than a relative sine of MERGE_TOL
    let turn = |o: &Vector, a: &Vector, b: &Vector| {
        let (u, v) = (*a - *o, *b - *o);
        u.cross(&v) - MERGE_TOL * u.norm() * v.norm()
    };
    let mut lower: Vec<Vector> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Vector> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn facets_of(ccw: &[Vector]) -> Vec<Halfspace> {
    let n = ccw.len();
    (0..n)
        .map(|i| {
            let p = ccw[i];
            let q = ccw[(i + 1) % n];
            let d = q - p;
            Halfspace::new(Vector::new2(d.y(), -d.x()), Vector::new2(d.y(), -d.x()).dot(&p))
        })
        .collect()
}

pub fn polygon_area(ccw: &[Vector]) -> f64 {
    let n = ccw.len();
    0.5 * (0..n).map(|i| ccw[i].cross(&ccw[(i + 1) % n])).sum::<f64>()
}

/// Sutherland–Hodgman step: intersection of a convex polygon with a halfplane.
pub fn clip_polygon(poly: &[Vector], h: &Halfspace) -> Vec<Vector> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let dp = h.violation(&p);
        let dq = h.violation(&q);
        if dp <= 0.0 {
            out.push(p);
        }
        if (dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0) {
            let t = dp / (dp - dq);
            out.push(p + (q - p) * t);
        }
    }
    out
}

/// Largest angular gap between the directions of the nonzero `points`
/// (2π when fewer than one nonzero point). Zero vectors are ignored.
pub fn max_angular_gap(points: &[Vector]) -> f64 {
    let mut angles: Vec<f64> = points.iter().filter(|p| p.norm() > 0.0).map(|p| p.angle()).collect();
    if angles.is_empty() {
        return 2.0 * PI;
    }
    angles.sort_by(f64::total_cmp);
    let mut gap = angles[0] + 2.0 * PI - angles[angles.len() - 1];
    for w in angles.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    gap
}

/// `P(K, U) = ⋂_{u ∈ U} {x : ⟨x, u⟩ ≤ h_K(u)}`.
pub fn halfspace_intersection(k: &Polytope, directions: &[Vector]) -> Result<Polytope> {
    let hs: Vec<Halfspace> = directions
        .iter()
        .filter(|u| u.norm() > 0.0)
        .map(|u| {
            let u = u.normalized();
            Halfspace { normal: u, offset: k.support_value(&u) }
        })
        .collect();
    if hs.is_empty() {
        return Err(Error::NotSpanning);
    }
    Polytope::from_halfspaces(k.dim(), &hs)
}

/// The indicator `𝟙_K` as a function handle; its conjugate is `h_K`.
pub fn schneider_embed(k: &Polytope) -> Result<FunctionHandle> {
    if !k.origin_in_interior() {
        return Err(Error::OriginNotInterior);
    }
    Ok(FunctionHandle::new(Indicator::new(k.clone())))
}

/// `Y_U = {λu : u ∈ U, λ ∈ {0, Δ, …, λ_cap}}`.
pub fn ray_slopes(directions: &[Vector], lambda_cap: f64, steps: usize) -> Vec<Vector> {
    let mut out = vec![Vector::zero(directions[0].dim())];
    for u in directions {
        let u = u.normalized();
        for k in 1..=steps {
            out.push(u.scale(lambda_cap * k as f64 / steps as f64));
        }
    }
    out
}
