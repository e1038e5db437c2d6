//! Finite slope sets and discrete probability measures on slopes.

use std::f64::consts::PI;
use std::path::Path;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::vector::Vector;

const DISTINCT_TOL: f64 = 1e-12;

/// A nonempty finite set of dual vectors with pairwise distinct points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeSet {
    points: Vec<Vector>,
}

impl SlopeSet {
    pub fn new(points: Vec<Vector>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Empty("slope set".into()));
        };
        let n = first.dim();
        for (i, p) in points.iter().enumerate() {
            crate::error::check_dim(n, p.dim())?;
            if !p.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite slope {p}")));
            }
            if points[..i].iter().any(|q| q.dist(p) <= DISTINCT_TOL) {
                return Err(Error::InvalidArgument(format!("duplicate slope {p}")));
            }
        }
        Ok(SlopeSet { points })
    }

    /// Like [`SlopeSet::new`] but silently drops repeated points.
    pub fn dedup(points: Vec<Vector>) -> Result<Self> {
        let mut kept: Vec<Vector> = Vec::with_capacity(points.len());
        for p in points {
            if !kept.iter().any(|q| q.dist(&p) <= DISTINCT_TOL) {
                kept.push(p);
            }
        }
        Self::new(kept)
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn radius(&self) -> f64 {
        self.points.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    pub fn subset(&self, idx: &[usize]) -> Result<SlopeSet> {
        SlopeSet::new(idx.iter().map(|&i| self.points[i]).collect())
    }

    pub fn union(&self, other: &SlopeSet) -> Result<SlopeSet> {
        SlopeSet::dedup(self.points.iter().chain(other.points.iter()).copied().collect())
    }

    /// The `2ⁿ` vertices `(±1, …, ±1)`.
    pub fn cube_vertices(n: usize) -> Result<Self> {
        match n {
            1 => SlopeSet::new(vec![Vector::new1(-1.0), Vector::new1(1.0)]),
            2 => SlopeSet::new(vec![
                Vector::new2(1.0, 1.0),
                Vector::new2(-1.0, 1.0),
                Vector::new2(-1.0, -1.0),
                Vector::new2(1.0, -1.0),
            ]),
            n => Err(Error::UnsupportedDimension(n)),
        }
    }

    /// `{±eᵢ}` scaled by `r`.
    pub fn axes(n: usize, r: f64) -> Result<Self> {
        match n {
            1 => SlopeSet::new(vec![Vector::new1(r), Vector::new1(-r)]),
            2 => SlopeSet::new(vec![
                Vector::new2(r, 0.0),
                Vector::new2(0.0, r),
                Vector::new2(-r, 0.0),
                Vector::new2(0.0, -r),
            ]),
            n => Err(Error::UnsupportedDimension(n)),
        }
    }

    /// `m` equally spaced points on the circle of radius `r`, starting at angle `phase`.
    pub fn regular(m: usize, r: f64, phase: f64) -> Result<Self> {
        if m < 1 {
            return Err(Error::Empty("regular slope set".into()));
        }
        SlopeSet::new((0..m).map(|k| Vector::polar(r, phase + 2.0 * PI * k as f64 / m as f64)).collect())
    }

    /// Square lattice of spacing `rho / k` clipped to the closed ball `rho·B`
    /// (in 1-d: `2k + 1` equally spaced points on `[−rho, rho]`).
    pub fn ball_grid(n: usize, rho: f64, k: usize) -> Result<Self> {
        let h = rho / k as f64;
        let k = k as i64;
        let pts = match n {
            1 => (-k..=k).map(|i| Vector::new1(i as f64 * h)).collect(),
            2 => {
                let mut v = Vec::new();
                for i in -k..=k {
                    for j in -k..=k {
                        let p = Vector::new2(i as f64 * h, j as f64 * h);
                        if p.norm() <= rho * (1.0 + 1e-12) {
                            v.push(p);
                        }
                    }
                }
                v
            }
            n => return Err(Error::UnsupportedDimension(n)),
        };
        SlopeSet::new(pts)
    }

    /// A random set of `size ≥ n + 1` points inside `rho·B` whose first `n + 1`
    /// points form a simplex containing the origin in its interior.
    pub fn random_spanning<R: Rng>(rng: &mut R, n: usize, size: usize, rho: f64) -> Result<Self> {
        if size < n + 1 {
            return Err(Error::InvalidArgument(format!("spanning set needs at least {} points", n + 1)));
        }
        let mut pts = Vec::with_capacity(size);
        match n {
            1 => {
                pts.push(Vector::new1(-rho * rng.gen_range(0.2..=1.0)));
                pts.push(Vector::new1(rho * rng.gen_range(0.2..=1.0)));
                while pts.len() < size {
                    pts.push(Vector::new1(rho * rng.gen_range(-1.0..=1.0)));
                }
            }
            2 => {
                // three directions with all gaps below 150°
                let phase = rng.gen_range(0.0..2.0 * PI);
                for k in 0..3 {
                    let jitter = rng.gen_range(-PI / 12.0..=PI / 12.0);
                    let a = phase + 2.0 * PI * k as f64 / 3.0 + jitter;
                    pts.push(Vector::polar(rho * rng.gen_range(0.3..=1.0), a));
                }
                while pts.len() < size {
                    let r = rho * rng.gen::<f64>().sqrt();
                    pts.push(Vector::polar(r, rng.gen_range(0.0..2.0 * PI)));
                }
            }
            n => return Err(Error::UnsupportedDimension(n)),
        }
        SlopeSet::dedup(pts)
    }

    pub fn scale(&self, t: f64) -> Result<SlopeSet> {
        SlopeSet::new(self.points.iter().map(|p| p.scale(t)).collect())
    }

    /// One point per non-empty line, coordinates separated by whitespace or commas.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pts = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let coords: Vec<f64> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("{t}: {e}"))))
                .collect::<Result<_>>()?;
            pts.push(Vector::from_slice(&coords)?);
        }
        SlopeSet::new(pts)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// Finitely many atoms with nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteMeasure {
    atoms: Vec<(Vector, f64)>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<(Vector, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Empty("measure without atoms".into()));
        }
        if atoms.iter().any(|(_, w)| !(*w >= 0.0)) {
            return Err(Error::InvalidArgument("negative weight".into()));
        }
        let total: f64 = atoms.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("weights sum to {total}, not 1")));
        }
        Ok(DiscreteMeasure { atoms })
    }

    pub fn uniform(points: &[Vector]) -> Result<Self> {
        let w = 1.0 / points.len() as f64;
        let mut atoms: Vec<(Vector, f64)> = points.iter().map(|p| (*p, w)).collect();
        // absorb rounding so the weights sum to one exactly enough
        if let Some(last) = atoms.last_mut() {
            last.1 = 1.0 - w * (points.len() - 1) as f64;
        }
        Self::new(atoms)
    }

    /// Uniform measure on the unit normals at 90°, 210° and 330°.
    pub fn tri3() -> Self {
        let pts: Vec<Vector> = [90.0f64, 210.0, 330.0].iter().map(|d| Vector::polar(1.0, d.to_radians())).collect();
        Self::uniform(&pts).expect("three atoms")
    }

    pub fn atoms(&self) -> &[(Vector, f64)] {
        &self.atoms
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].0.dim()
    }

    /// `R_μ`: largest atom norm.
    pub fn radius(&self) -> f64 {
        self.atoms.iter().map(|(p, _)| p.norm()).fold(0.0, f64::max)
    }

    /// `tri3`, `origin`, or a file of `x y w` lines.
    pub fn parse_spec(spec: &str, dim: usize) -> Result<Self> {
        match spec {
            "tri3" => Ok(Self::tri3()),
            "origin" => Self::new(vec![(Vector::zero(dim), 1.0)]),
            path => {
                let text = std::fs::read_to_string(path)?;
                let mut atoms = Vec::new();
                for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
                    let v: Vec<f64> = line
                        .split(|c: char| c.is_whitespace() || c == ',')
                        .filter(|t| !t.is_empty())
                        .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("{t}: {e}"))))
                        .collect::<Result<_>>()?;
                    let (w, p) = v.split_last().ok_or_else(|| Error::Parse("empty atom line".into()))?;
                    atoms.push((Vector::from_slice(p)?, *w));
                }
                Self::new(atoms)
            }
        }
    }
}
