//! Extremal drivers: `Φ*` over rotations and slope families, the `F_N`
//! outer log-linearization optimizer, the Urysohn-type mass check and the
//! covering minimizer.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::{inf_convolve_with, outer_parallel};
use crate::config::{Resolution, CERTIFICATE_REL_TOL};
use crate::error::{Error, Result};
use crate::families::Quadratic;
use crate::handle::FunctionHandle;
use crate::linearization::{check_admissible, outer_linearization, support_affine, PiecewiseAffine, Verdict};
use crate::logconcave::{hypo_symmetrize, piecewise_affine_mass, total_mass_auto, LogConcaveHandle};
use crate::rotation::{Rotation, RotationGrid};
use crate::slopes::{DiscreteMeasure, SlopeSet};
use crate::symmetrize::{rotate, rotational_symmetrization_report, DEFAULT_ORDER};
use crate::transform::dual_domain_radius;
use crate::vector::Vector;

/// One-sided inequality `lhs ≤ rhs` with an explicit tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Certificate {
    pub fn le(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = rhs - lhs;
        Certificate { name: name.into(), lhs, rhs, slack, tol, pass: slack >= -tol || lhs == rhs }
    }
}

/// One evaluated candidate of a driver.
#[derive(Debug, Clone, Serialize)]
pub struct Candidate {
    pub rotation: usize,
    pub set: usize,
    pub value: f64,
}

/// Optimizer budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Budget {
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { restarts: 16, iters: 200, seed: 0 }
    }
}

/// Structured result of a driver run.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalReport {
    pub value: f64,
    pub argmin_rotation: Option<Rotation>,
    pub argmin_set: Option<Vec<Vector>>,
    pub candidates: Vec<Candidate>,
    pub certificate: Option<Certificate>,
    pub seed: Option<u64>,
    pub budget: Option<Budget>,
    pub notes: Vec<String>,
}

impl ExtremalReport {
    fn empty() -> Self {
        ExtremalReport {
            value: f64::INFINITY,
            argmin_rotation: None,
            argmin_set: None,
            candidates: Vec::new(),
            certificate: None,
            seed: None,
            budget: None,
            notes: Vec::new(),
        }
    }
}

/// A functional on coercive convex functions. Outer linearizations that are
/// not proper and coercive are assigned `+∞`.
pub trait Functional: Send + Sync {
    fn name(&self) -> String;
    fn of_linearization(&self, q: &PiecewiseAffine) -> Result<f64>;
    fn of_handle(&self, h: &FunctionHandle) -> Result<f64>;
}

/// `ψ ↦ log J(e^{−ψ})`: monotone decreasing, concave under infimal
/// convolution (Prékopa–Leindler) and upper semicontinuous.
#[derive(Debug, Clone, Copy)]
pub struct LogMass;

/// `ψ ↦ −log J(e^{−ψ})`: monotone increasing and convex.
#[derive(Debug, Clone, Copy)]
pub struct NegLogMass;

/// `Φ_avg(ψ, μ) = ∫ ℒψ dμ`: linear and monotone decreasing.
#[derive(Debug, Clone)]
pub struct PhiAvg(pub DiscreteMeasure);

fn linearization_mass(q: &PiecewiseAffine) -> Result<Option<f64>> {
    if q.is_degenerate() || !q.is_coercive() {
        return Ok(None);
    }
    Ok(Some(piecewise_affine_mass(q)?))
}

fn handle_mass(h: &FunctionHandle) -> Result<f64> {
    Ok(total_mass_auto(&LogConcaveHandle::new(h.clone()), Resolution::default())?.value)
}

impl Functional for LogMass {
    fn name(&self) -> String {
        "log-mass".into()
    }

    fn of_linearization(&self, q: &PiecewiseAffine) -> Result<f64> {
        Ok(linearization_mass(q)?.map_or(f64::INFINITY, f64::ln))
    }

    fn of_handle(&self, h: &FunctionHandle) -> Result<f64> {
        Ok(handle_mass(h)?.ln())
    }
}

impl Functional for NegLogMass {
    fn name(&self) -> String {
        "neg-log-mass".into()
    }

    fn of_linearization(&self, q: &PiecewiseAffine) -> Result<f64> {
        Ok(linearization_mass(q)?.map_or(f64::INFINITY, |j| -j.ln()))
    }

    fn of_handle(&self, h: &FunctionHandle) -> Result<f64> {
        Ok(-handle_mass(h)?.ln())
    }
}

impl Functional for PhiAvg {
    fn name(&self) -> String {
        "phi-avg".into()
    }

    fn of_linearization(&self, q: &PiecewiseAffine) -> Result<f64> {
        if q.is_degenerate() || !q.is_coercive() {
            return Ok(f64::INFINITY);
        }
        Ok(self.0.atoms().iter().map(|(u, w)| w * q.conjugate(u).value()).sum())
    }

    fn of_handle(&self, h: &FunctionHandle) -> Result<f64> {
        Ok(self.0.atoms().iter().map(|(u, w)| w * h.eval_dual(u).value()).sum())
    }
}

/// Parses `log-mass`, `neg-log-mass` or `phi-avg:<measure>`.
pub fn parse_functional(tag: &str, dim: usize) -> Result<Box<dyn Functional>> {
    match tag {
        "log-mass" => Ok(Box::new(LogMass)),
        "neg-log-mass" => Ok(Box::new(NegLogMass)),
        t if t.starts_with("phi-avg:") => Ok(Box::new(PhiAvg(DiscreteMeasure::parse_spec(&t[8..], dim)?))),
        t => Err(Error::Parse(format!("unknown functional `{t}`"))),
    }
}

/// Three-sample check of the monotone-decreasing and concave intent of a
/// functional; returns warnings instead of failing.
pub fn functional_sanity(phi: &dyn Functional) -> Result<Vec<String>> {
    let res = Resolution::coarse();
    let base = FunctionHandle::new(Quadratic::diagonal(&[1.0, 1.0])?);
    let higher = FunctionHandle::new(Quadratic::new(2, &[1.0, 0.0, 1.0], Some(Vector::new2(0.0, 0.0)))?);
    let higher = crate::calculus::epi_scale(1.0, &higher)?;
    let shifted = FunctionHandle::from_dual_with(2, crate::DomainDescriptor::FullSpace, "quadratic + 1", res, {
        let h = higher.clone();
        move |y| h.eval_dual(y) + (-1.0)
    });
    let mut warnings = Vec::new();
    let (lo, hi) = (phi.of_handle(&base)?, phi.of_handle(&shifted)?);
    if hi > lo + 1e-9 {
        warnings.push(format!("{}: not monotone decreasing ({hi} for the larger function vs {lo})", phi.name()));
    }
    let a = FunctionHandle::new(Quadratic::diagonal(&[1.0, 4.0])?);
    let b = FunctionHandle::new(Quadratic::diagonal(&[4.0, 1.0])?);
    let mix = inf_convolve_with(
        &crate::calculus::epi_scale(0.5, &a)?,
        &crate::calculus::epi_scale(0.5, &b)?,
        res,
    )?;
    let (pa, pb, pm) = (phi.of_handle(&a)?, phi.of_handle(&b)?, phi.of_handle(&mix)?);
    if pm < 0.5 * (pa + pb) - 1e-6 * pm.abs().max(1.0) {
        warnings.push(format!("{}: not concave under infimal convolution ({pm} < {})", phi.name(), 0.5 * (pa + pb)));
    }
    Ok(warnings)
}

/// A finite family of slope sets.
#[derive(Debug, Clone, Serialize)]
pub struct SlopeFamily {
    pub sets: Vec<SlopeSet>,
    pub description: String,
}

impl SlopeFamily {
    pub fn new(sets: Vec<SlopeSet>, description: impl Into<String>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::Empty("slope family".into()));
        }
        Ok(SlopeFamily { sets, description: description.into() })
    }

    /// `count` random spanning sets of `size` points inside `rho·B`.
    pub fn random(dim: usize, count: usize, size: usize, rho: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sets = (0..count)
            .map(|_| SlopeSet::random_spanning(&mut rng, dim, size, rho))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sets, format!("random(count={count}, size={size}, rho={rho}, seed={seed})"))
    }

    /// Indices of members in `𝒴_ψ`, and skipped members with a reason.
    pub fn admissible_for(&self, h: &FunctionHandle) -> (Vec<usize>, Vec<String>) {
        let mut kept = Vec::new();
        let mut skipped = Vec::new();
        for (i, y) in self.sets.iter().enumerate() {
            let v = check_admissible(h, y);
            if v.inside_interior_ball == Verdict::Yes {
                kept.push(i);
            } else {
                skipped.push(format!("set {i} skipped: {:?} ({})", v.inside_interior_ball, v.detail));
            }
        }
        (kept, skipped)
    }
}

/// `Φ*(ψ, 𝒴) = min over ϑ ∈ Θ, Y ∈ 𝒴 of Φ(q_{ψ∘ϑ⁻¹, Y})`, over the members of
/// the family admissible for `ψ`.
pub fn phi_star(h: &FunctionHandle, fam: &SlopeFamily, rot: &RotationGrid, phi: &dyn Functional) -> Result<ExtremalReport> {
    phi_star_impl(h, fam, rot, phi, true)
}

/// Like [`phi_star`] but without admissibility filtering: members whose
/// linearization is not proper and coercive simply count as `+∞`.
pub fn phi_star_unfiltered(
    h: &FunctionHandle,
    fam: &SlopeFamily,
    rot: &RotationGrid,
    phi: &dyn Functional,
) -> Result<ExtremalReport> {
    phi_star_impl(h, fam, rot, phi, false)
}

fn phi_star_impl(
    h: &FunctionHandle,
    fam: &SlopeFamily,
    rot: &RotationGrid,
    phi: &dyn Functional,
    filter: bool,
) -> Result<ExtremalReport> {
    crate::error::check_dim(h.dim(), rot.dim())?;
    let mut report = ExtremalReport::empty();
    let members: Vec<usize> = if filter {
        let (kept, skipped) = fam.admissible_for(h);
        report.notes.extend(skipped);
        kept
    } else {
        (0..fam.sets.len()).collect()
    };
    if members.is_empty() {
        return Err(Error::Empty("no admissible slope set in the family".into()));
    }
    let rotated: Vec<FunctionHandle> = rot.rotations().iter().map(|r| rotate(h, r)).collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..rotated.len()).flat_map(|r| members.iter().map(move |&s| (r, s))).collect();
    let values: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|&(r, s)| phi.of_linearization(&outer_linearization(&rotated[r], &fam.sets[s])))
        .collect();
    let mut best: Option<usize> = None;
    for (k, (&(r, s), v)) in jobs.iter().zip(values).enumerate() {
        let value = v?;
        report.candidates.push(Candidate { rotation: r, set: s, value });
        if best.is_none_or(|b| value < report.candidates[b].value) {
            best = Some(k);
        }
    }
    let b = &report.candidates[best.expect("nonempty")];
    report.value = b.value;
    if b.value.is_finite() {
        report.argmin_rotation = Some(rot.rotations()[b.rotation]);
        report.argmin_set = Some(fam.sets[b.set].points().to_vec());
    } else {
        report.notes.push("every candidate linearization is degenerate or not coercive".into());
    }
    report.notes.push(format!("functional {} over {} rotations and {} slope sets", phi.name(), rot.len(), members.len()));
    Ok(report)
}

/// `Φ*(ψ) ≤ Φ*(ψ_rot)` on a shared family and rotation grid.
pub fn symmetrization_check(
    h: &FunctionHandle,
    fam: &SlopeFamily,
    rot: &RotationGrid,
    phi: &dyn Functional,
    tol: f64,
) -> Result<(ExtremalReport, ExtremalReport, Certificate)> {
    let (sym, _) = rotational_symmetrization_report(h, DEFAULT_ORDER, Resolution::default())?;
    let a = phi_star(h, fam, rot, phi)?;
    let b = phi_star(&sym, fam, rot, phi)?;
    let scale = a.value.abs().max(b.value.abs()).max(1.0);
    let cert = Certificate::le(format!("Phi*(psi) <= Phi*(psi_rot) [{}]", phi.name()), a.value, b.value, tol * scale);
    Ok((a, b, cert))
}

/// `Φ*` along `ψ_j = ψ □ b_{1/j}(ψ)`; returns `(j, Φ*(ψ_j))` pairs.
pub fn usc_probe(
    h: &FunctionHandle,
    fam: &SlopeFamily,
    rot: &RotationGrid,
    phi: &dyn Functional,
    js: &[usize],
) -> Result<Vec<(usize, f64)>> {
    js.iter()
        .map(|&j| {
            let hj = outer_parallel(h, 1.0 / j as f64)?;
            Ok((j, phi_star_unfiltered(&hj, fam, rot, phi)?.value))
        })
        .collect()
}

/// `J(e^{−q_{ψ,Y}})` for an arbitrary point list (duplicates allowed).
fn slope_mass(h: &FunctionHandle, pts: &[Vector]) -> f64 {
    let pieces = pts.iter().map(|y| support_affine(h, y)).collect();
    let q = PiecewiseAffine::new(h.dim(), pieces, "");
    piecewise_affine_mass(&q).unwrap_or(f64::INFINITY)
}

fn project(y: Vector, rho: f64) -> Vector {
    let r = y.norm();
    if r > rho {
        y.scale(rho / r)
    } else {
        y
    }
}

/// Coordinate pattern search with halving steps.
fn pattern_search(h: &FunctionHandle, mut pts: Vec<Vector>, rho: f64, iters: usize) -> (f64, Vec<Vector>) {
    let n = h.dim();
    let mut best = slope_mass(h, &pts);
    let mut step = rho / 4.0;
    for _ in 0..iters {
        let mut improved = false;
        for i in 0..pts.len() {
            for a in 0..n {
                for sign in [1.0, -1.0] {
                    let mut c = pts[i].coords().to_vec();
                    c[a] += sign * step;
                    let cand = project(Vector::from_slice(&c).expect("finite"), rho);
                    let old = pts[i];
                    pts[i] = cand;
                    let v = slope_mass(h, &pts);
                    if v < best {
                        best = v;
                        improved = true;
                        break;
                    }
                    pts[i] = old;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-7 * rho {
                break;
            }
        }
    }
    (best, pts)
}

fn initial_slopes(rng: &mut ChaCha8Rng, n: usize, count: usize, rho: f64) -> Vec<Vector> {
    let r0 = 0.8 * rho.min(1.5);
    let mut pts = Vec::with_capacity(count);
    if n == 1 {
        let s = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        pts.push(Vector::new1(s * r0));
        pts.push(Vector::new1(-s * r0));
        while pts.len() < count {
            pts.push(Vector::new1(rng.gen_range(-r0..=r0)));
        }
    } else {
        let phase = rng.gen_range(0.0..2.0 * PI);
        for k in 0..3 {
            pts.push(Vector::polar(r0, phase + 2.0 * PI * k as f64 / 3.0));
        }
        while pts.len() < count {
            let r = r0 * rng.gen::<f64>().sqrt();
            pts.push(Vector::polar(r, rng.gen_range(0.0..2.0 * PI)));
        }
    }
    pts
}

/// A new slope bisecting the widest angular gap of `pts` at their mean radius.
fn extra_slope(pts: &[Vector]) -> Vector {
    if pts[0].dim() == 1 {
        let lo = pts.iter().map(|p| p.x()).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(|p| p.x()).fold(f64::NEG_INFINITY, f64::max);
        return Vector::new1(0.5 * (lo + hi));
    }
    let mut angles: Vec<f64> = pts.iter().filter(|p| p.norm() > 0.0).map(|p| p.angle()).collect();
    angles.sort_by(f64::total_cmp);
    let mut gap = (angles[0] + 2.0 * PI - angles[angles.len() - 1], angles[angles.len() - 1]);
    for w in angles.windows(2) {
        if w[1] - w[0] > gap.0 {
            gap = (w[1] - w[0], w[0]);
        }
    }
    let r = pts.iter().map(|p| p.norm()).sum::<f64>() / pts.len() as f64;
    Vector::polar(r, gap.1 + 0.5 * gap.0)
}

/// Default cap on slope norms for the `F_N` search.
pub const DEFAULT_RHO_CAP: f64 = 8.0;

/// Upper bound on `F_N(f)`: the least mass of `e^{−q_{ψ,Y}}` over `|Y| ≤ N`,
/// by multi-start pattern search over slopes in `min(ρ_cap, 0.999 r(ψ))·B`.
pub fn outer_mass_approx(f: &LogConcaveHandle, n_slopes: usize, budget: &Budget, rho_cap: f64) -> Result<ExtremalReport> {
    Ok(outer_mass_ladder(f, n_slopes, n_slopes, budget, rho_cap)?.pop().expect("one report"))
}

/// `F_N` for `N = n_min..=n_max`, each level warm-started from the previous
/// optimum plus one slope, so the reported bounds are nonincreasing in `N`.
pub fn outer_mass_ladder(
    f: &LogConcaveHandle,
    n_min: usize,
    n_max: usize,
    budget: &Budget,
    rho_cap: f64,
) -> Result<Vec<ExtremalReport>> {
    let h = f.base();
    let n = h.dim();
    if n_min < n + 1 || n_max < n_min {
        return Err(Error::InvalidArgument(format!("N must be at least {} (got {n_min}..={n_max})", n + 1)));
    }
    if budget.restarts == 0 || budget.iters == 0 {
        return Err(Error::InvalidArgument("optimizer budget must be positive".into()));
    }
    h.check_coercive()?;
    let rho = rho_cap.min(0.999 * dual_domain_radius(h)?.radius);
    let mut reports = Vec::new();
    let mut warm: Option<Vec<Vector>> = None;
    for count in n_min..=n_max {
        let seed = budget.seed.wrapping_add(count as u64);
        let runs: Vec<(f64, Vec<Vector>)> = (0..budget.restarts)
            .into_par_iter()
            .map(|k| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(k as u64));
                let start = match (&warm, k) {
                    (Some(prev), 0) => {
                        let mut p = prev.clone();
                        p.push(extra_slope(prev));
                        p
                    }
                    _ => initial_slopes(&mut rng, n, count, rho),
                };
                pattern_search(h, start, rho, budget.iters)
            })
            .collect();
        let mut report = ExtremalReport::empty();
        let mut best = 0;
        for (k, (v, _)) in runs.iter().enumerate() {
            report.candidates.push(Candidate { rotation: 0, set: k, value: *v });
            if *v < runs[best].0 {
                best = k;
            }
        }
        report.value = runs[best].0;
        report.argmin_set = Some(runs[best].1.clone());
        report.seed = Some(seed);
        report.budget = Some(*budget);
        report.notes.push(format!("N = {count}, slope radius cap {rho}"));
        warm = Some(runs[best].1.clone());
        reports.push(report);
    }
    Ok(reports)
}

/// `F_N(f) ≤ F_N(f_rot) + band` under identical budgets, with `band = 1%` of `J(f)`.
pub fn fn_inequality_check(
    f: &LogConcaveHandle,
    n_slopes: usize,
    budget: &Budget,
    rho_cap: f64,
) -> Result<(ExtremalReport, ExtremalReport, Certificate)> {
    let frot = hypo_symmetrize(f)?;
    let a = outer_mass_approx(f, n_slopes, budget, rho_cap)?;
    let b = outer_mass_approx(&frot, n_slopes, budget, rho_cap)?;
    let band = 0.01 * f.mass()?.value;
    let cert = Certificate::le(format!("F_{n_slopes}(f) <= F_{n_slopes}(f_rot)"), a.value, b.value, band);
    Ok((a, b, cert))
}

/// Masses of `f` and `f_rot`.
#[derive(Debug, Clone, Serialize)]
pub struct UrysohnReport {
    pub mass: f64,
    pub mass_rot: f64,
    pub certificate: Certificate,
}

/// `J(f) ≤ J(f_rot)`, with a relative tolerance of `1e−3`.
pub fn urysohn_check(f: &LogConcaveHandle) -> Result<UrysohnReport> {
    let mass = f.mass()?.value;
    let mass_rot = hypo_symmetrize(f)?.mass()?.value;
    let tol = 1e-3 * mass.max(mass_rot);
    Ok(UrysohnReport { mass, mass_rot, certificate: Certificate::le("J(f) <= J(f_rot)", mass, mass_rot, tol) })
}

fn avg_at(h: &FunctionHandle, mu: &DiscreteMeasure, rot: &Rotation) -> f64 {
    mu.atoms().iter().map(|(u, w)| w * h.eval_dual(&rot.apply_inverse(u)).value()).sum()
}

/// `min_ϑ Φ_avg(ψ∘ϑ⁻¹, μ)` over a rotation sweep (refined by golden-section
/// search around the sweep minimum in the plane), against `Φ_avg(ψ_rot, μ)`.
pub fn covering_minimize(h: &FunctionHandle, mu: &DiscreteMeasure, rot: &RotationGrid) -> Result<ExtremalReport> {
    crate::error::check_dim(h.dim(), mu.dim())?;
    crate::error::check_dim(h.dim(), rot.dim())?;
    let r = dual_domain_radius(h)?.radius;
    if !(mu.radius() < r) {
        return Err(Error::InvalidArgument(format!("measure radius {} is not below r(ψ) = {r}", mu.radius())));
    }
    let values: Vec<f64> = rot.rotations().par_iter().map(|t| avg_at(h, mu, t)).collect();
    let mut report = ExtremalReport::empty();
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        report.candidates.push(Candidate { rotation: k, set: 0, value: *v });
        if *v < values[best] {
            best = k;
        }
    }
    let mut best_rot = rot.rotations()[best];
    let mut best_val = values[best];
    if let (Rotation::Angle(t0), true) = (best_rot, rot.len() > 1) {
        let width = 2.0 * PI / rot.len() as f64;
        let g = |t: f64| avg_at(h, mu, &Rotation::angle(t));
        let (t, v) = golden_section(g, t0 - width, t0 + width, 80);
        if v < best_val {
            best_val = v;
            best_rot = Rotation::angle(t);
            report.notes.push(format!("golden-section refinement improved the sweep minimum by {}", values[best] - v));
        }
    }
    let (sym, rep) = rotational_symmetrization_report(h, DEFAULT_ORDER, Resolution::default())?;
    let bench: f64 = mu.atoms().iter().map(|(u, w)| w * sym.eval_dual(u).value()).sum();
    let tol = CERTIFICATE_REL_TOL * bench.abs().max(1.0) + rep.richardson_delta;
    report.value = best_val;
    report.argmin_rotation = Some(best_rot);
    report.certificate = Some(Certificate::le("min Phi_avg(psi o rot^-1) <= Phi_avg(psi_rot)", best_val, bench, tol));
    report.notes.push(format!("{} rotations, symmetrization order {}", rot.len(), rep.order));
    Ok(report)
}

/// Golden-section minimization on `[a, b]`; returns `(argmin, min)`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{Indicator, Support};
    use crate::geometry::Polytope;

    #[test]
    fn certificate_sign() {
        assert!(Certificate::le("x", 1.0, 2.0, 0.0).pass);
        assert!(!Certificate::le("x", 2.0, 1.0, 0.5).pass);
        assert!(Certificate::le("x", 2.0, 1.9, 0.2).pass);
    }

    #[test]
    fn golden() {
        let (t, v) = golden_section(|x| (x - 0.3).powi(2), -1.0, 1.0, 80);
        assert!((t - 0.3).abs() < 1e-7 && v < 1e-14);
    }

    #[test]
    fn covering_square() {
        let sq = FunctionHandle::new(Indicator::new(Polytope::cube(2, -1.0, 1.0).unwrap()));
        let rep = covering_minimize(&sq, &DiscreteMeasure::tri3(), &RotationGrid::equally_spaced(2, 720).unwrap()).unwrap();
        assert!(rep.value <= 4.0 / PI);
        assert!(rep.certificate.unwrap().pass);
        let single = DiscreteMeasure::new(vec![(Vector::zero(2), 1.0)]).unwrap();
        let rep = covering_minimize(&sq, &single, &RotationGrid::equally_spaced(2, 36).unwrap()).unwrap();
        assert!(rep.candidates.iter().all(|c| c.value == 0.0));
    }

    #[test]
    fn phi_star_with_dense_family_is_close_to_phi() {
        let q = FunctionHandle::new(Quadratic::diagonal(&[1.0, 1.0]).unwrap());
        let fam = SlopeFamily::new(vec![SlopeSet::ball_grid(2, 6.0, 24).unwrap()], "dense").unwrap();
        let rep = phi_star(&q, &fam, &RotationGrid::identity(2), &LogMass).unwrap();
        assert!((rep.value - (2.0 * PI).ln()).abs() < 0.02, "{}", rep.value);
    }

    #[test]
    fn non_spanning_family_is_skipped() {
        let sq = FunctionHandle::new(Support::new(Polytope::cube(2, -1.0, 1.0).unwrap()).unwrap());
        let fam = SlopeFamily::new(vec![SlopeSet::cube_vertices(2).unwrap()], "cube").unwrap();
        assert!(phi_star(&sq, &fam, &RotationGrid::identity(2), &LogMass).is_err());
        let half = SlopeFamily::new(vec![SlopeSet::cube_vertices(2).unwrap().scale(0.5).unwrap()], "half").unwrap();
        assert!(phi_star(&sq, &half, &RotationGrid::identity(2), &LogMass).unwrap().value.is_finite());
    }

    #[test]
    fn functional_contracts() {
        assert!(functional_sanity(&LogMass).unwrap().is_empty());
        assert!(!functional_sanity(&NegLogMass).unwrap().is_empty());
    }
}
