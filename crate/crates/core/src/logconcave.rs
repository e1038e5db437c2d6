//! Log-concave functions `f = e^{−ψ}`: Asplund sums, total mass and
//! rotational hypo-symmetrization.

use serde::Serialize;

use crate::calculus::{epi_scale, inf_convolve};
use crate::config::{Resolution, TAIL_GAP};
use crate::error::{Error, Result};
use crate::geometry::{clip_polygon, polygon_area, Halfspace, Polytope};
use crate::grid::GridSpec;
use crate::handle::{primal_window, FunctionHandle};
use crate::linearization::PiecewiseAffine;
use crate::symmetrize::{rotational_symmetrization, DEFAULT_ORDER};
use crate::vector::Vector;

/// Largest tolerated share of the mass carried by the outer ring of cells.
pub const BOUNDARY_MASS_TOL: f64 = 1e-9;

/// `f = e^{−ψ}`.
#[derive(Debug, Clone)]
pub struct LogConcaveHandle {
    base: FunctionHandle,
}

impl LogConcaveHandle {
    pub fn new(base: FunctionHandle) -> Self {
        LogConcaveHandle { base }
    }

    pub fn base(&self) -> &FunctionHandle {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn eval(&self, x: &Vector) -> f64 {
        self.base.eval_primal(x).exp_neg()
    }

    /// `J(f)` on an automatically sized box (exact for piecewise-affine bases).
    pub fn mass(&self) -> Result<MassReport> {
        total_mass_auto(self, Resolution::default())
    }
}

/// `a·f ⋆ b·g = e^{−(a⊡ψ □ b⊡φ)}`.
pub fn asplund_sum(f: &LogConcaveHandle, g: &LogConcaveHandle, a: f64, b: f64) -> Result<LogConcaveHandle> {
    let base = inf_convolve(&epi_scale(a, f.base())?, &epi_scale(b, g.base())?)?;
    Ok(LogConcaveHandle::new(base))
}

/// `f_rot = e^{−ψ_rot}`.
pub fn hypo_symmetrize(f: &LogConcaveHandle) -> Result<LogConcaveHandle> {
    Ok(LogConcaveHandle::new(rotational_symmetrization(f.base(), DEFAULT_ORDER)?))
}

/// A computed total mass.
#[derive(Debug, Clone, Serialize)]
pub struct MassReport {
    pub value: f64,
    /// Share of the mass in the outermost ring of quadrature cells.
    pub boundary_fraction: f64,
    /// Bound on the mass outside the truncation region.
    pub tail_bound: f64,
    pub method: &'static str,
    pub grid: Option<GridSpec>,
}

/// `J(f) = ∫ e^{−ψ}` by the tensor midpoint rule on the cells of `quad`.
pub fn total_mass(f: &LogConcaveHandle, quad: &GridSpec) -> Result<MassReport> {
    let n = quad.dim();
    let lo: Vec<f64> = (0..n).map(|a| quad.lo()[a] + 0.5 * quad.spacing(a)).collect();
    let hi: Vec<f64> = (0..n).map(|a| quad.hi()[a] - 0.5 * quad.spacing(a)).collect();
    let shape: Vec<usize> = quad.shape().iter().map(|k| k - 1).collect();
    if shape.iter().any(|k| *k < 2) {
        return Err(Error::InvalidArgument("quadrature grid needs at least 3 points per axis".into()));
    }
    let centers = GridSpec::new(lo, hi, shape)?;
    let vals = f.base().sample_primal(&centers)?;
    let m0 = vals.values().iter().filter_map(|v| v.finite()).fold(f64::INFINITY, f64::min);
    let vol = quad.cell_volume();
    let (mut total, mut ring) = (0.0, 0.0);
    for (k, v) in vals.values().iter().enumerate() {
        let w = (-(v.value() - m0)).exp();
        if !v.is_finite() {
            continue;
        }
        total += w;
        if centers.on_boundary(k) {
            ring += w;
        }
    }
    let scale = (-m0).exp() * vol;
    let (total, ring) = (total * scale, ring * scale);
    let boundary_fraction = if total > 0.0 { ring / total } else { 0.0 };
    if boundary_fraction > BOUNDARY_MASS_TOL {
        return Err(Error::BoxTooSmall { boundary: ring, total });
    }
    Ok(MassReport { value: total, boundary_fraction, tail_bound: ring, method: "midpoint", grid: Some(quad.clone()) })
}

/// Box `[−W, W]ⁿ` containing `{ψ ≤ min ψ + 40}`, bounded from the conjugate.
pub fn auto_quadrature_box(h: &FunctionHandle, points: usize) -> Result<GridSpec> {
    let n = h.dim();
    let dual = |y: &Vector| h.eval_dual(y);
    let w = primal_window(n, &dual, h.dual_domain().inradius(), TAIL_GAP)
        .ok_or_else(|| Error::NotCoercive(format!("{}: conjugate infinite at the origin", h.label())))?;
    GridSpec::cube(n, -w, w, points)
}

/// `J(f)` with the exact path for piecewise-affine bases and the midpoint
/// rule on an automatic box otherwise.
pub fn total_mass_auto(f: &LogConcaveHandle, res: Resolution) -> Result<MassReport> {
    if let Some(q) = f.base().as_piecewise_affine() {
        let value = piecewise_affine_mass(q)?;
        return Ok(MassReport {
            value,
            boundary_fraction: 0.0,
            tail_bound: value * (-EXACT_GAP).exp(),
            method: "exact-piecewise-affine",
            grid: None,
        });
    }
    let quad = auto_quadrature_box(f.base(), res.points(f.dim()))?;
    total_mass(f, &quad)
}

const EXACT_GAP: f64 = 50.0;

/// `(1 − e^{−z}) / z`, continuous at zero.
fn phi1(z: f64) -> f64 {
    if z.abs() < 1e-12 {
        1.0 - 0.5 * z
    } else {
        -(-z).exp_m1() / z
    }
}

/// Second divided difference of `t ↦ e^{−t}` at three points.
pub fn exp_neg_dd2(a: f64, b: f64, c: f64) -> f64 {
    let mut v = [a, b, c];
    v.sort_by(f64::total_cmp);
    let [a, b, c] = v;
    let (u, w) = (b - a, c - a);
    if w < 1.0 {
        // Σ_{m≥2} (−1)^m / m! · h_{m−2}(u, w), with h_k the complete symmetric polynomial
        let mut sum = 0.0;
        let mut h = 1.0;
        let mut upow = 1.0;
        let mut fact = 2.0;
        for m in 2..40 {
            if m > 2 {
                upow *= u;
                h = w * h + upow;
                fact *= m as f64;
            }
            let term = h / fact;
            sum += if m % 2 == 0 { term } else { -term };
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        return (-a).exp() * sum;
    }
    let d1 = -(-a).exp() * phi1(u);
    let d2 = -(-b).exp() * phi1(c - b);
    (d2 - d1) / w
}

/// `∫ e^{−q}` in closed form for a coercive piecewise-affine `q`.
///
/// The sublevel set `{q ≤ q(0) + 50}` is split into the cells where each
/// piece is active, and `e^{−affine}` is integrated exactly on each cell.
/// Since `min q ≤ q(0)`, the neglected tail is below `e^{−50}` times the mass.
/// Degenerate or non-coercive linearizations have infinite mass.
pub fn piecewise_affine_mass(q: &PiecewiseAffine) -> Result<f64> {
    if q.is_degenerate() || !q.is_coercive() {
        return Ok(f64::INFINITY);
    }
    let pieces = q.pieces();
    // q(x) = max_i ⟨x, y_i⟩ − c_i
    let c: Vec<f64> = pieces.iter().map(|p| -p.intercept.value()).collect();
    let ys: Vec<Vector> = pieces.iter().map(|p| p.slope).collect();
    let level = c.iter().map(|ci| -ci).fold(f64::NEG_INFINITY, f64::max) + EXACT_GAP;
    if q.dim() == 1 {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (y, ci) in ys.iter().zip(&c) {
            if y.x() > 0.0 {
                hi = hi.min((level + ci) / y.x());
            } else if y.x() < 0.0 {
                lo = lo.max((level + ci) / y.x());
            }
        }
        let mut cells = Vec::new();
        for i in 0..ys.len() {
            let (mut a, mut b) = (lo, hi);
            for j in 0..ys.len() {
                let d = ys[j].x() - ys[i].x();
                if d > 0.0 {
                    b = b.min((c[j] - c[i]) / d);
                } else if d < 0.0 {
                    a = a.max((c[j] - c[i]) / d);
                }
            }
            if b > a {
                cells.push((i, a, b));
            }
        }
        let val = |i: usize, x: f64| ys[i].x() * x - c[i];
        let m = cells.iter().map(|&(i, a, b)| val(i, a).min(val(i, b))).fold(f64::INFINITY, f64::min);
        let total: f64 = cells
            .iter()
            .map(|&(i, a, b)| (b - a) * (-(val(i, a) - m)).exp() * phi1(ys[i].x() * (b - a)))
            .sum();
        return Ok(total * (-m).exp());
    }
    let hs: Vec<Halfspace> =
        ys.iter().zip(&c).filter(|(y, _)| y.norm() > 0.0).map(|(y, ci)| Halfspace::new(*y, level + ci)).collect();
    let sub = Polytope::from_halfspaces(2, &hs)?;
    let mut cells = Vec::new();
    for i in 0..ys.len() {
        let mut cell = sub.vertices().to_vec();
        for j in 0..ys.len() {
            if j == i || cell.is_empty() {
                continue;
            }
            cell = clip_polygon(&cell, &Halfspace { normal: ys[j] - ys[i], offset: c[j] - c[i] });
        }
        if cell.len() >= 3 {
            cells.push((i, cell));
        }
    }
    let covered: f64 = cells.iter().map(|(_, cell)| polygon_area(cell)).sum();
    if !sub.contains(&Vector::zero(2), 0.0) || (covered - sub.area()).abs() > 1e-9 * sub.area() {
        return Err(Error::Degenerate(format!("linearization cells cover {covered} of the sublevel area {}", sub.area())));
    }
    let val = |i: usize, x: &Vector| x.dot(&ys[i]) - c[i];
    let m = cells
        .iter()
        .flat_map(|(i, cell)| cell.iter().map(move |x| val(*i, x)))
        .fold(f64::INFINITY, f64::min);
    let mut total = 0.0;
    for (i, cell) in &cells {
        let t = |x: &Vector| val(*i, x) - m;
        for k in 1..cell.len() - 1 {
            let (p0, p1, p2) = (cell[0], cell[k], cell[k + 1]);
            let area = 0.5 * (p1 - p0).cross(&(p2 - p0)).abs();
            if area > 0.0 {
                total += 2.0 * area * exp_neg_dd2(t(&p0), t(&p1), t(&p2));
            }
        }
    }
    Ok(total * (-m).exp())
}
