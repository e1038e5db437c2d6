//! Discrete Legendre–Fenchel transforms.
//!
//! The 1-d transform builds the lower convex hull of the samples and walks
//! it against sorted slopes; the 2-d transform factorizes the supremum
//! axis by axis. Both return exactly the discrete supremum over the samples
//! (the conjugate of a point set equals the conjugate of its convex hull),
//! so they agree with the brute-force reference up to rounding.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::PROBE_DIRECTIONS;
use crate::domain::DomainDescriptor;
use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::grid::{GridFunction, GridSpec};
use crate::handle::FunctionHandle;
use crate::vector::Vector;

/// Marker for "no maximizer" (empty source).
pub const NO_ARGMAX: usize = usize::MAX;

/// Lower convex hull of 1-d samples, answering conjugate queries.
#[derive(Debug, Clone)]
pub struct Llt {
    xs: Vec<f64>,
    fs: Vec<f64>,
    idx: Vec<usize>,
    /// slopes[k] is the slope of hull segment k → k+1.
    slopes: Vec<f64>,
}

impl Llt {
    /// Builds the hull; infinite samples are skipped. Returns `None` when no
    /// sample is finite.
    fn build(xs: &[f64], fs: impl Iterator<Item = f64>) -> Option<Llt> {
        let mut hx: Vec<f64> = Vec::new();
        let mut hf: Vec<f64> = Vec::new();
        let mut hi: Vec<usize> = Vec::new();
        for (k, (x, f)) in xs.iter().zip(fs).enumerate() {
            if !f.is_finite() {
                continue;
            }
            while hx.len() >= 2 {
                let n = hx.len();
                // drop the last vertex if it lies on or above the chord
                let lhs = (hf[n - 1] - hf[n - 2]) * (x - hx[n - 2]);
                let rhs = (f - hf[n - 2]) * (hx[n - 1] - hx[n - 2]);
                if lhs >= rhs {
                    hx.pop();
                    hf.pop();
                    hi.pop();
                } else {
                    break;
                }
            }
            hx.push(*x);
            hf.push(f);
            hi.push(k);
        }
        if hx.is_empty() {
            return None;
        }
        let slopes = hx.windows(2).zip(hf.windows(2)).map(|(x, f)| (f[1] - f[0]) / (x[1] - x[0])).collect();
        Some(Llt { xs: hx, fs: hf, idx: hi, slopes })
    }

    /// Conjugate value and the original index of the maximizing sample.
    pub fn eval_with_argmax(&self, y: f64) -> (f64, usize) {
        let k = self.slopes.partition_point(|s| *s < y);
        (y * self.xs[k] - self.fs[k], self.idx[k])
    }

    pub fn eval(&self, y: f64) -> ExtReal {
        ExtReal::new(self.eval_with_argmax(y).0)
    }

    /// Conjugate at nondecreasing queries in one sweep.
    pub fn eval_sorted(&self, ys: &[f64]) -> Vec<(f64, usize)> {
        let mut k = 0;
        ys.iter()
            .map(|&y| {
                while k < self.slopes.len() && self.slopes[k] < y {
                    k += 1;
                }
                (y * self.xs[k] - self.fs[k], self.idx[k])
            })
            .collect()
    }

    /// Lower hull value at `x` (`+∞` outside the hull's span).
    pub fn hull_value(&self, x: f64) -> ExtReal {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return ExtReal::INFINITY;
        }
        let k = self.xs.partition_point(|v| *v <= x);
        if k == 0 {
            return ExtReal::new(self.fs[0]);
        }
        if k == n || self.xs[k - 1] == x {
            return ExtReal::new(self.fs[k - 1]);
        }
        let t = (x - self.xs[k - 1]) / (self.xs[k] - self.xs[k - 1]);
        ExtReal::new(self.fs[k - 1] + t * (self.fs[k] - self.fs[k - 1]))
    }

    pub fn hull_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.fs.iter().copied())
    }
}

/// Linear-time Legendre transform of sorted samples `(x, ψ(x))`.
pub fn fast_conjugate_1d(samples: &[(f64, ExtReal)]) -> Result<Llt> {
    if samples.windows(2).any(|w| !(w[0].0 < w[1].0)) {
        return Err(Error::Unsorted);
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    Llt::build(&xs, samples.iter().map(|s| s.1.value()))
        .ok_or_else(|| Error::Improper("all samples are infinite".into()))
}

/// Precomputed per-row hulls of a grid function, answering single-point
/// conjugate queries in `O(rows · log cols)`.
#[derive(Debug, Clone)]
pub struct Conjugator {
    spec: GridSpec,
    rows: Vec<Option<Llt>>,
    row_coords: Vec<f64>,
}

impl Conjugator {
    pub fn new(src: &GridFunction) -> Result<Self> {
        let spec = src.spec().clone();
        let vals = src.values();
        let (rows, row_coords) = if spec.dim() == 1 {
            let xs = spec.axis_coords(0);
            (vec![Llt::build(&xs, vals.iter().map(|v| v.value()))], vec![0.0])
        } else {
            let m = spec.shape()[1];
            let cols = spec.axis_coords(1);
            let rows: Vec<Option<Llt>> = (0..spec.shape()[0])
                .into_par_iter()
                .map(|i| Llt::build(&cols, vals[i * m..(i + 1) * m].iter().map(|v| v.value())))
                .collect();
            (rows, spec.axis_coords(0))
        };
        if rows.iter().all(Option::is_none) {
            return Err(Error::Improper("all samples are infinite".into()));
        }
        Ok(Conjugator { spec, rows, row_coords })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// Discrete supremum `max_k ⟨x, s_k⟩ − g(s_k)` and the flat index of the maximizer.
    pub fn eval_with_argmax(&self, x: &Vector) -> (f64, usize) {
        if self.spec.dim() == 1 {
            return self.rows[0].as_ref().map(|h| h.eval_with_argmax(x.x())).unwrap_or((f64::NEG_INFINITY, NO_ARGMAX));
        }
        let m = self.spec.shape()[1];
        let mut best = (f64::NEG_INFINITY, NO_ARGMAX);
        for (i, row) in self.rows.iter().enumerate() {
            if let Some(h) = row {
                let (v, j) = h.eval_with_argmax(x.y());
                let v = x.x() * self.row_coords[i] + v;
                if v > best.0 {
                    best = (v, i * m + j);
                }
            }
        }
        best
    }

    pub fn eval(&self, x: &Vector) -> ExtReal {
        ExtReal::new(self.eval_with_argmax(x).0)
    }
}

/// A conjugate sampled on a dual grid, with the maximizing source node of
/// every entry.
#[derive(Debug, Clone)]
pub struct ConjugateGrid {
    pub grid: GridFunction,
    pub argmax: Vec<usize>,
    pub source: String,
}

impl ConjugateGrid {
    /// Replaces entries whose maximizer sits on the source grid's outer ring
    /// by `+∞` (the supremum is not certified inside the source box).
    pub fn certify(mut self, source: &GridSpec) -> Result<GridFunction> {
        let spec = self.grid.spec().clone();
        let vals: Vec<ExtReal> = std::mem::take(&mut self.argmax)
            .into_iter()
            .zip(self.grid.into_values())
            .map(|(a, v)| if a == NO_ARGMAX || source.on_boundary(a) { ExtReal::INFINITY } else { v })
            .collect();
        if !vals.iter().any(|v| v.is_finite()) {
            return Err(Error::Improper("no certified value on the target grid".into()));
        }
        GridFunction::new(spec, vals)
    }
}

/// Fast discrete conjugate of a grid function onto `target` (1-d: hull walk;
/// 2-d: axis-wise factorization).
pub fn conjugate_grid(src: &GridFunction, target: &GridSpec) -> Result<ConjugateGrid> {
    let s = src.spec();
    if s.dim() != target.dim() {
        return Err(Error::Dimension { expected: s.dim(), found: target.dim() });
    }
    let vals = src.values();
    if s.dim() == 1 {
        let xs = s.axis_coords(0);
        let hull = Llt::build(&xs, vals.iter().map(|v| v.value()))
            .ok_or_else(|| Error::Improper("all samples are infinite".into()))?;
        let (v, a): (Vec<ExtReal>, Vec<usize>) =
            hull.eval_sorted(&target.axis_coords(0)).into_iter().map(|(v, a)| (ExtReal::new(v), a)).unzip();
        return Ok(ConjugateGrid { grid: GridFunction::new(target.clone(), v)?, argmax: a, source: String::new() });
    }
    let (n0, n1) = (s.shape()[0], s.shape()[1]);
    let (q0, q1) = (target.shape()[0], target.shape()[1]);
    let s0 = s.axis_coords(0);
    let s1 = s.axis_coords(1);
    let t0 = target.axis_coords(0);
    let t1 = target.axis_coords(1);
    // pass 1: per source row i, 1-d conjugate over axis 1 at every t1
    let pass1: Vec<Option<Vec<(f64, usize)>>> = (0..n0)
        .into_par_iter()
        .map(|i| Llt::build(&s1, vals[i * n1..(i + 1) * n1].iter().map(|v| v.value())).map(|h| h.eval_sorted(&t1)))
        .collect();
    if pass1.iter().all(Option::is_none) {
        return Err(Error::Improper("all samples are infinite".into()));
    }
    // pass 2: per target column q, 1-d conjugate over axis 0 of -pass1[.][q]
    let cols: Vec<Vec<(f64, usize)>> = (0..q1)
        .into_par_iter()
        .map(|q| {
            let g = pass1.iter().map(|row| row.as_ref().map_or(f64::INFINITY, |r| -r[q].0));
            let hull = Llt::build(&s0, g).expect("at least one finite row");
            hull.eval_sorted(&t0)
                .into_iter()
                .map(|(v, i)| (v, i * n1 + pass1[i].as_ref().expect("finite row")[q].1))
                .collect()
        })
        .collect();
    let mut values = vec![ExtReal::ZERO; q0 * q1];
    let mut argmax = vec![NO_ARGMAX; q0 * q1];
    for (q, col) in cols.into_iter().enumerate() {
        for (p, (v, a)) in col.into_iter().enumerate() {
            values[p * q1 + q] = ExtReal::new(v);
            argmax[p * q1 + q] = a;
        }
    }
    Ok(ConjugateGrid { grid: GridFunction::new(target.clone(), values)?, argmax, source: String::new() })
}

/// Brute-force discrete conjugate (reference path): every dual node takes
/// the maximum over all primal samples; ties go to the smaller index.
pub fn discrete_conjugate_reference(src: &GridFunction, dual: &GridSpec) -> Result<ConjugateGrid> {
    if src.spec().dim() != dual.dim() {
        return Err(Error::Dimension { expected: src.spec().dim(), found: dual.dim() });
    }
    let finite: Vec<(usize, Vector, f64)> = src
        .values()
        .iter()
        .enumerate()
        .filter_map(|(k, v)| v.finite().map(|f| (k, src.spec().point(k), f)))
        .collect();
    if finite.is_empty() {
        return Err(Error::Improper("all samples are infinite".into()));
    }
    let (values, argmax): (Vec<ExtReal>, Vec<usize>) = (0..dual.len())
        .into_par_iter()
        .map(|q| {
            let y = dual.point(q);
            let mut best = (f64::NEG_INFINITY, NO_ARGMAX);
            for (k, x, f) in &finite {
                let v = x.dot(&y) - f;
                if v > best.0 {
                    best = (v, *k);
                }
            }
            (ExtReal::new(best.0), best.1)
        })
        .unzip();
    Ok(ConjugateGrid { grid: GridFunction::new(dual.clone(), values)?, argmax, source: "reference".into() })
}

/// Discrete conjugate of a grid function (the supremum over primal samples).
pub fn discrete_conjugate(src: &GridFunction, dual: &GridSpec) -> Result<ConjugateGrid> {
    let mut c = conjugate_grid(src, dual)?;
    c.source = "grid".into();
    Ok(c)
}

/// Discrete conjugate of a handle sampled on `primal`.
pub fn discrete_conjugate_handle(h: &FunctionHandle, primal: &GridSpec, dual: &GridSpec) -> Result<ConjugateGrid> {
    let src = GridFunction::sample(primal, |x| h.eval_primal(x)).map_err(|_| {
        Error::Improper(format!("{} is infinite on every node of the primal grid", h.label()))
    })?;
    let mut c = conjugate_grid(&src, dual)?;
    c.source = h.label();
    Ok(c)
}

/// Alias matching the 2-d transform contract.
pub fn conjugate_2d(grid: &GridFunction, dual: &GridSpec) -> Result<ConjugateGrid> {
    if grid.spec().dim() != 2 {
        return Err(Error::Dimension { expected: 2, found: grid.spec().dim() });
    }
    conjugate_grid(grid, dual)
}

/// Default dual box `[−R, R]ⁿ` with `R = 1.5 ×` the largest finite-difference
/// slope of the samples.
pub fn default_dual_grid(src: &GridFunction) -> Result<GridSpec> {
    let l = src.lipschitz_estimate().max(1e-3);
    let s = src.spec();
    GridSpec::new(vec![-1.5 * l; s.dim()], vec![1.5 * l; s.dim()], s.shape().to_vec())
}

/// Discrete closed convex hull of a grid function, evaluated at its nodes.
///
/// Exact in dimension one (lower hull of the samples). In dimension two the
/// hull is recovered through a dual grid covering every finite-difference
/// slope of the input; nodes whose recovering slope hits the dual box are
/// treated as outside the hull.
pub fn biconjugate(grid: &GridFunction) -> Result<GridFunction> {
    let s = grid.spec();
    if s.dim() == 1 {
        let xs = s.axis_coords(0);
        let hull = Llt::build(&xs, grid.values().iter().map(|v| v.value()))
            .ok_or_else(|| Error::Improper("all samples are infinite".into()))?;
        let vals = xs.iter().map(|x| hull.hull_value(*x)).collect();
        return GridFunction::new(s.clone(), vals);
    }
    let l = grid.lipschitz_estimate().max(1e-6);
    let r = 1.25 * l + 1.0;
    let k = 2 * s.shape().iter().copied().max().unwrap_or(3) + 1;
    let dual = GridSpec::cube(2, -r, r, k)?;
    let conj = conjugate_grid(grid, &dual)?;
    let back = conjugate_grid(&conj.grid, s)?;
    // values never exceed the input; clamp rounding from the two passes
    let certified = back.certify(&dual)?;
    let vals = certified.values().iter().zip(grid.values()).map(|(b, g)| (*b).min(*g)).collect();
    GridFunction::new(s.clone(), vals)
}

/// Result of a domain-radius computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DomainRadius {
    pub radius: f64,
    pub band: f64,
    pub exact: bool,
}

/// `r(ψ)`: radius of the largest open centered ball inside `dom(ℒψ)`.
///
/// Exact whenever the handle's descriptor is exact; otherwise bisection on
/// directional finiteness of the conjugate over the probe star.
pub fn dual_domain_radius(h: &FunctionHandle) -> Result<DomainRadius> {
    let d = h.dual_domain();
    if !d.is_estimated() {
        let r = d.inradius();
        if !(r > 0.0) {
            return Err(Error::NotCoercive(format!("{}: origin not interior to dual domain", h.label())));
        }
        return Ok(DomainRadius { radius: r, band: 0.0, exact: true });
    }
    estimate_radius_by_probes(h, 1e-6)
}

/// Bisection on directional finiteness of `ℒψ`, one search per probe direction.
pub fn estimate_radius_by_probes(h: &FunctionHandle, band: f64) -> Result<DomainRadius> {
    let n = h.dim();
    if !h.eval_dual(&Vector::zero(n)).is_finite() {
        return Err(Error::NotCoercive(format!("{}: conjugate infinite at the origin", h.label())));
    }
    let dirs = if n == 1 { 2 } else { PROBE_DIRECTIONS };
    let mut radius = f64::INFINITY;
    for k in 0..dirs {
        let u = Vector::direction(n, k, dirs);
        let finite = |t: f64| h.eval_dual(&u.scale(t)).is_finite();
        let mut lo = 0.0;
        let mut hi = 1e-3;
        while finite(hi) {
            lo = hi;
            hi *= 2.0;
            if hi > 1e8 {
                break;
            }
        }
        if hi > 1e8 {
            continue;
        }
        if lo == 0.0 && !finite(1e-9) {
            return Err(Error::NotCoercive(format!("{}: conjugate infinite arbitrarily near the origin", h.label())));
        }
        while hi - lo > band {
            let mid = 0.5 * (lo + hi);
            if finite(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        radius = radius.min(lo);
    }
    Ok(DomainRadius { radius, band, exact: false })
}

/// Estimated conjugate domain of a grid-backed function by slope thresholding:
/// beyond the true domain the discrete conjugate grows with slope close to the
/// support of the sample box, so the first radius where the directional slope
/// exceeds 90% of that support bounds the domain.
pub fn estimate_grid_dual_domain(conj: &Conjugator, src: &GridSpec) -> DomainDescriptor {
    let n = src.dim();
    let dirs = if n == 1 { 2 } else { PROBE_DIRECTIONS };
    let mut radius = f64::INFINITY;
    let mut band: f64 = 0.0;
    for k in 0..dirs {
        let u = Vector::direction(n, k, dirs);
        let support: f64 = (0..n).map(|a| (u[a] * src.lo()[a]).max(u[a] * src.hi()[a])).sum();
        let step = 0.01 * src.max_spacing().max(1e-3) / support.max(1e-9);
        let slope = |t: f64| {
            let a = conj.eval(&u.scale(t)).value();
            let b = conj.eval(&u.scale(t + step)).value();
            (b - a) / step
        };
        let mut t = 0.0;
        let limit = 1e4;
        while t < limit && slope(t) < 0.9 * support {
            t = if t == 0.0 { step } else { t * 1.5 };
        }
        if t >= limit {
            continue;
        }
        let (mut lo, mut hi) = (t / 1.5, t);
        if t == 0.0 {
            lo = 0.0;
        }
        while hi - lo > step {
            let mid = 0.5 * (lo + hi);
            if slope(mid) < 0.9 * support {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        radius = radius.min(lo);
        band = band.max(hi - lo + step);
    }
    if radius.is_infinite() {
        DomainDescriptor::FullSpace
    } else {
        DomainDescriptor::Estimated { radius, band }
    }
}
