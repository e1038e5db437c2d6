//! Convex functions carried with an exact conjugate oracle.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{Resolution, PROBE_DIRECTIONS, PROBE_RADIUS, TAIL_GAP};
use crate::domain::DomainDescriptor;
use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::grid::{GridFunction, GridSpec};
use crate::linearization::PiecewiseAffine;
use crate::transform::{conjugate_grid, Conjugator, NO_ARGMAX};
use crate::vector::Vector;

/// A proper lsc convex function on ℝⁿ together with its conjugate.
pub trait ConvexFunction: Send + Sync {
    fn dim(&self) -> usize;
    fn primal(&self, x: &Vector) -> ExtReal;
    fn dual(&self, y: &Vector) -> ExtReal;
    /// Description of `dom(ℒψ)`.
    fn dual_domain(&self) -> DomainDescriptor;
    fn label(&self) -> String;

    fn sample_primal(&self, grid: &GridSpec) -> Result<GridFunction> {
        GridFunction::sample(grid, |x| self.primal(x))
    }

    fn as_piecewise_affine(&self) -> Option<&PiecewiseAffine> {
        None
    }
}

/// Shared, cheaply clonable handle to a convex function.
#[derive(Clone)]
pub struct FunctionHandle(Arc<dyn ConvexFunction>);

impl fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FunctionHandle({})", self.label())
    }
}

impl FunctionHandle {
    pub fn new<F: ConvexFunction + 'static>(f: F) -> Self {
        FunctionHandle(Arc::new(f))
    }

    /// A function known through its conjugate only. The primal is recovered
    /// by discrete conjugation of the dual on a lazily built grid.
    pub fn from_dual<F>(dim: usize, domain: DomainDescriptor, label: impl Into<String>, dual: F) -> Self
    where
        F: Fn(&Vector) -> ExtReal + Send + Sync + 'static,
    {
        Self::new(DualDefined::new(dim, domain, label, Resolution::default(), dual))
    }

    pub fn from_dual_with<F>(dim: usize, domain: DomainDescriptor, label: impl Into<String>, res: Resolution, dual: F) -> Self
    where
        F: Fn(&Vector) -> ExtReal + Send + Sync + 'static,
    {
        Self::new(DualDefined::new(dim, domain, label, res, dual))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn eval_primal(&self, x: &Vector) -> ExtReal {
        self.0.primal(x)
    }

    pub fn eval_dual(&self, y: &Vector) -> ExtReal {
        self.0.dual(y)
    }

    pub fn dual_domain(&self) -> DomainDescriptor {
        self.0.dual_domain()
    }

    pub fn label(&self) -> String {
        self.0.label()
    }

    pub fn sample_primal(&self, grid: &GridSpec) -> Result<GridFunction> {
        crate::error::check_dim(self.dim(), grid.dim())?;
        self.0.sample_primal(grid)
    }

    pub fn as_piecewise_affine(&self) -> Option<&PiecewiseAffine> {
        self.0.as_piecewise_affine()
    }

    pub fn inner(&self) -> &dyn ConvexFunction {
        &*self.0
    }

    /// `ℒψ(0)` finite and `ℒψ` finite on a small probe sphere.
    pub fn check_coercive(&self) -> Result<()> {
        let n = self.dim();
        if !self.eval_dual(&Vector::zero(n)).is_finite() {
            return Err(Error::NotCoercive(format!("{}: conjugate infinite at the origin", self.label())));
        }
        let dirs = if n == 1 { 2 } else { PROBE_DIRECTIONS };
        for k in 0..dirs {
            let y = Vector::direction(n, k, dirs).scale(PROBE_RADIUS);
            if !self.eval_dual(&y).is_finite() {
                return Err(Error::NotCoercive(format!("{}: conjugate infinite at {y}", self.label())));
            }
        }
        Ok(())
    }

    /// Largest violation of the convexity inequality over random chords in
    /// `[-r, r]ⁿ` (chords with an infinite endpoint are skipped).
    pub fn convexity_violation(&self, r: f64, trials: usize, seed: u64) -> f64 {
        let n = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..trials {
            let a = random_point(&mut rng, n, r);
            let b = random_point(&mut rng, n, r);
            let t: f64 = rng.gen();
            let (fa, fb) = (self.eval_primal(&a), self.eval_primal(&b));
            if !(fa.is_finite() && fb.is_finite()) {
                continue;
            }
            let m = self.eval_primal(&(a.scale(t) + b.scale(1.0 - t)));
            let bound = t * fa.value() + (1.0 - t) * fb.value();
            worst = worst.max(m.value() - bound);
        }
        worst
    }

    /// Smallest Fenchel–Young gap `ψ(x) + ℒψ(y) − ⟨x, y⟩` over random pairs.
    pub fn fenchel_young_min_gap(&self, r: f64, trials: usize, seed: u64) -> f64 {
        let n = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = f64::INFINITY;
        for _ in 0..trials {
            let x = random_point(&mut rng, n, r);
            let y = random_point(&mut rng, n, r);
            let g = self.eval_primal(&x) + self.eval_dual(&y).value() - x.dot(&y);
            if g.is_finite() {
                worst = worst.min(g.value());
            }
        }
        worst
    }
}

fn random_point(rng: &mut ChaCha8Rng, n: usize, r: f64) -> Vector {
    if n == 1 {
        Vector::new1(rng.gen_range(-r..=r))
    } else {
        Vector::new2(rng.gen_range(-r..=r), rng.gen_range(-r..=r))
    }
}

/// Convenience free functions mirroring the handle methods.
pub fn eval_primal(h: &FunctionHandle, x: &Vector) -> ExtReal {
    h.eval_primal(x)
}

pub fn eval_dual(h: &FunctionHandle, y: &Vector) -> ExtReal {
    h.eval_dual(y)
}

/// Radius `W` such that `{ψ ≤ min ψ + gap}` lies in the ball `W·B`, bounded
/// from the conjugate alone: `ψ(x) − min ψ ≥ s|x| − ℒψ(su) + ℒψ(0)` for every
/// `s > 0` and unit `u = x/|x|`. Returns `None` when `ℒψ(0)` is not finite.
pub fn primal_window(dim: usize, dual: &dyn Fn(&Vector) -> ExtReal, inradius: f64, gap: f64) -> Option<f64> {
    let d0 = dual(&Vector::zero(dim)).finite()?;
    let s_max = if inradius.is_finite() { 0.95 * inradius } else { 1e4 };
    let dirs = if dim == 1 { 2 } else { PROBE_DIRECTIONS };
    let ratio = 2f64.powf(-0.25);
    let mut w: f64 = 0.0;
    for k in 0..dirs {
        let u = Vector::direction(dim, k, dirs);
        let mut best = f64::INFINITY;
        let mut s = s_max;
        for _ in 0..200 {
            if let Some(v) = dual(&u.scale(s)).finite() {
                best = best.min((gap + v - d0) / s);
            }
            s *= ratio;
        }
        if !best.is_finite() {
            return None;
        }
        w = w.max(best);
    }
    Some(1.1 * w)
}

struct DualCache {
    grid: GridFunction,
    conj: Conjugator,
}

/// A function given by an exact conjugate evaluator; see
/// [`FunctionHandle::from_dual`].
pub struct DualDefined {
    dim: usize,
    domain: DomainDescriptor,
    label: String,
    resolution: Resolution,
    dual: Box<dyn Fn(&Vector) -> ExtReal + Send + Sync>,
    cache: OnceLock<std::result::Result<DualCache, String>>,
}

impl DualDefined {
    pub fn new<F>(dim: usize, domain: DomainDescriptor, label: impl Into<String>, resolution: Resolution, dual: F) -> Self
    where
        F: Fn(&Vector) -> ExtReal + Send + Sync + 'static,
    {
        DualDefined { dim, domain, label: label.into(), resolution, dual: Box::new(dual), cache: OnceLock::new() }
    }

    /// Half-width of the dual sampling box.
    pub fn dual_box_radius(&self) -> Result<f64> {
        Ok(self.cache()?.grid.spec().hi()[0])
    }

    fn cache(&self) -> Result<&DualCache> {
        self.cache
            .get_or_init(|| self.build_cache().map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| Error::Improper(e.clone()))
    }

    fn build_cache(&self) -> Result<DualCache> {
        let n = self.dim;
        let dual = |y: &Vector| (self.dual)(y);
        let d0 = dual(&Vector::zero(n))
            .finite()
            .ok_or_else(|| Error::NotCoercive(format!("{}: conjugate infinite at the origin", self.label)))?;
        let cap = self.resolution.max_dual_radius;
        let radius = match self.domain.outer_radius(n) {
            Some(o) => (1.5 * o).min(cap),
            None => {
                let w = primal_window(n, &dual, self.domain.inradius(), TAIL_GAP).unwrap_or(10.0);
                let dirs = if n == 1 { 2 } else { PROBE_DIRECTIONS };
                let mut r: f64 = 1.0;
                loop {
                    let done = (0..dirs).all(|k| {
                        let v = dual(&Vector::direction(n, k, dirs).scale(r));
                        !v.is_finite() || v.value() >= d0 + w * r
                    });
                    if done || r >= cap {
                        break r.min(cap);
                    }
                    r *= 1.25;
                }
            }
        };
        let mut k = self.resolution.points(n);
        if k.is_multiple_of(2) {
            k += 1;
        }
        let spec = GridSpec::cube(n, -radius, radius, k)?;
        let grid = GridFunction::sample(&spec, dual)?;
        let conj = Conjugator::new(&grid)?;
        Ok(DualCache { grid, conj })
    }
}

impl ConvexFunction for DualDefined {
    fn dim(&self) -> usize {
        self.dim
    }

    fn primal(&self, x: &Vector) -> ExtReal {
        let Ok(c) = self.cache() else {
            return ExtReal::INFINITY;
        };
        let (v, a) = c.conj.eval_with_argmax(x);
        if a == NO_ARGMAX || c.grid.spec().on_boundary(a) {
            ExtReal::INFINITY
        } else {
            ExtReal::new(v)
        }
    }

    fn dual(&self, y: &Vector) -> ExtReal {
        (self.dual)(y)
    }

    fn dual_domain(&self) -> DomainDescriptor {
        self.domain.clone()
    }

    fn label(&self) -> String {
        self.label.clone()
    }

    fn sample_primal(&self, grid: &GridSpec) -> Result<GridFunction> {
        let c = self.cache()?;
        conjugate_grid(&c.grid, grid)?.certify(c.grid.spec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_defined_recovers_quadratic() {
        let h = FunctionHandle::from_dual(2, DomainDescriptor::FullSpace, "q", |y| ExtReal::new(0.5 * y.norm_sq()));
        for x in [Vector::new2(0.0, 0.0), Vector::new2(1.0, -0.5), Vector::new2(2.0, 3.0)] {
            let v = h.eval_primal(&x).value();
            assert!((v - 0.5 * x.norm_sq()).abs() < 1e-3, "{x}: {v}");
        }
        let g = GridSpec::cube(2, -2.0, 2.0, 9).unwrap();
        let s = h.sample_primal(&g).unwrap();
        for k in 0..g.len() {
            assert!((s.values()[k].value() - 0.5 * g.point(k).norm_sq()).abs() < 1e-3);
        }
    }

    #[test]
    fn dual_defined_indicator_from_norm() {
        // conjugate of |y| is the indicator of the unit ball
        let h = FunctionHandle::from_dual(2, DomainDescriptor::FullSpace, "ball", |y| ExtReal::new(y.norm()));
        assert_eq!(h.eval_primal(&Vector::new2(0.5, 0.5)).value(), 0.0);
        assert!(h.eval_primal(&Vector::new2(0.8, 0.7)).is_pos_infinite());
        assert!(h.eval_primal(&Vector::new2(1.05, 0.0)).is_pos_infinite());
        assert_eq!(h.eval_primal(&Vector::new2(0.99, 0.0)).value(), 0.0);
    }

    #[test]
    fn window_bound() {
        let d = |y: &Vector| ExtReal::new(0.5 * y.norm_sq());
        let w = primal_window(2, &d, f64::INFINITY, 40.0).unwrap();
        // true window sqrt(80) ≈ 8.94
        assert!(w >= 80f64.sqrt() && w < 1.2 * 80f64.sqrt());
        let inf = |_: &Vector| ExtReal::INFINITY;
        assert!(primal_window(1, &inf, f64::INFINITY, 40.0).is_none());
    }

    #[test]
    fn coercivity_probe() {
        let h = FunctionHandle::from_dual(1, DomainDescriptor::FullSpace, "lin", |y| {
            if y.x() >= 0.0 {
                ExtReal::ZERO
            } else {
                ExtReal::INFINITY
            }
        });
        assert!(h.check_coercive().is_err());
    }
}
