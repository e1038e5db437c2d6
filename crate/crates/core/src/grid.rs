use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::vector::Vector;

/// A uniform grid on a box `∏ [loᵢ, hiᵢ]` with `shape[i]` nodes per axis
/// (endpoints included). Flat indices are row-major, axis 0 outermost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    lo: Vec<f64>,
    hi: Vec<f64>,
    shape: Vec<usize>,
}

impl GridSpec {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, shape: Vec<usize>) -> Result<Self> {
        let n = shape.len();
        if n == 0 || n > 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        if lo.len() != n || hi.len() != n {
            return Err(Error::InvalidArgument("grid box and shape have different dimensions".into()));
        }
        for i in 0..n {
            if shape[i] < 2 {
                return Err(Error::InvalidArgument(format!("grid needs at least 2 points per axis, got {}", shape[i])));
            }
            if !(lo[i] < hi[i]) || !lo[i].is_finite() || !hi[i].is_finite() {
                return Err(Error::InvalidArgument(format!("invalid grid interval [{}, {}]", lo[i], hi[i])));
            }
        }
        Ok(GridSpec { lo, hi, shape })
    }

    /// `[lo, hi]ⁿ` with `k` points per axis.
    pub fn cube(n: usize, lo: f64, hi: f64, k: usize) -> Result<Self> {
        Self::new(vec![lo; n], vec![hi; n], vec![k; n])
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / (self.shape[axis] - 1) as f64
    }

    pub fn max_spacing(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).fold(0.0, f64::max)
    }

    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        if i + 1 == self.shape[axis] {
            self.hi[axis]
        } else {
            self.lo[axis] + i as f64 * self.spacing(axis)
        }
    }

    pub fn axis_coords(&self, axis: usize) -> Vec<f64> {
        (0..self.shape[axis]).map(|i| self.coord(axis, i)).collect()
    }

    /// Multi-index of a flat index.
    pub fn unravel(&self, flat: usize) -> [usize; 2] {
        if self.dim() == 1 {
            [flat, 0]
        } else {
            [flat / self.shape[1], flat % self.shape[1]]
        }
    }

    pub fn point(&self, flat: usize) -> Vector {
        let [i, j] = self.unravel(flat);
        if self.dim() == 1 {
            Vector::new1(self.coord(0, i))
        } else {
            Vector::new2(self.coord(0, i), self.coord(1, j))
        }
    }

    pub fn points(&self) -> Vec<Vector> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }

    /// Whether the flat index lies on the outer ring of the grid.
    pub fn on_boundary(&self, flat: usize) -> bool {
        let idx = self.unravel(flat);
        (0..self.dim()).any(|a| idx[a] == 0 || idx[a] + 1 == self.shape[a])
    }

    /// Distance (in cells) to the outer ring.
    pub fn collar_depth(&self, flat: usize) -> usize {
        let idx = self.unravel(flat);
        (0..self.dim()).map(|a| idx[a].min(self.shape[a] - 1 - idx[a])).min().unwrap_or(0)
    }

    pub fn contains(&self, x: &Vector) -> bool {
        (0..self.dim()).all(|a| x[a] >= self.lo[a] && x[a] <= self.hi[a])
    }

    /// Volume of one cell.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).product()
    }
}

/// Extended-real values sampled on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<ExtReal>,
}

impl GridFunction {
    pub fn new(spec: GridSpec, values: Vec<ExtReal>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::InvalidArgument(format!(
                "grid has {} nodes but {} values were given",
                spec.len(),
                values.len()
            )));
        }
        if !values.iter().any(|v| v.is_finite()) {
            return Err(Error::Improper("grid function has no finite value".into()));
        }
        if values.iter().any(|v| v.is_neg_infinite()) {
            return Err(Error::Improper("grid function takes the value -inf".into()));
        }
        Ok(GridFunction { spec, values })
    }

    /// Samples `f` at every node.
    pub fn sample<F>(spec: &GridSpec, f: F) -> Result<Self>
    where
        F: Fn(&Vector) -> ExtReal + Sync,
    {
        let values: Vec<ExtReal> = (0..spec.len()).into_par_iter().map(|k| f(&spec.point(k))).collect();
        Self::new(spec.clone(), values)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn into_values(self) -> Vec<ExtReal> {
        self.values
    }

    pub fn get(&self, flat: usize) -> ExtReal {
        self.values[flat]
    }

    /// Largest finite-difference slope between neighbouring finite nodes.
    pub fn lipschitz_estimate(&self) -> f64 {
        let s = &self.spec;
        let mut l: f64 = 0.0;
        for k in 0..s.len() {
            let [i, j] = s.unravel(k);
            let v = self.values[k];
            if !v.is_finite() {
                continue;
            }
            let mut check = |other: usize, h: f64| {
                let w = self.values[other];
                if w.is_finite() {
                    l = l.max((w.value() - v.value()).abs() / h);
                }
            };
            if s.dim() == 1 {
                if i + 1 < s.shape()[0] {
                    check(k + 1, s.spacing(0));
                }
            } else {
                if i + 1 < s.shape()[0] {
                    check(k + s.shape()[1], s.spacing(0));
                }
                if j + 1 < s.shape()[1] {
                    check(k + 1, s.spacing(1));
                }
            }
        }
        l
    }

    /// Multilinear interpolation; `+∞` outside the box or next to an infinite node.
    pub fn interpolate(&self, x: &Vector) -> ExtReal {
        let s = &self.spec;
        if !s.contains(x) {
            return ExtReal::INFINITY;
        }
        let locate = |axis: usize| {
            let t = (x[axis] - s.lo()[axis]) / s.spacing(axis);
            let i = (t.floor() as usize).min(s.shape()[axis] - 2);
            (i, t - i as f64)
        };
        if s.dim() == 1 {
            let (i, t) = locate(0);
            let (a, b) = (self.values[i], self.values[i + 1]);
            if t == 0.0 {
                return a;
            }
            if t == 1.0 {
                return b;
            }
            if !a.is_finite() || !b.is_finite() {
                return ExtReal::INFINITY;
            }
            return ExtReal::new(a.value() * (1.0 - t) + b.value() * t);
        }
        let (i, t) = locate(0);
        let (j, u) = locate(1);
        let m = s.shape()[1];
        let corners = [
            (self.values[i * m + j], (1.0 - t) * (1.0 - u)),
            (self.values[(i + 1) * m + j], t * (1.0 - u)),
            (self.values[i * m + j + 1], (1.0 - t) * u),
            (self.values[(i + 1) * m + j + 1], t * u),
        ];
        let mut acc = 0.0;
        for (v, w) in corners {
            if w == 0.0 {
                continue;
            }
            if !v.is_finite() {
                return ExtReal::INFINITY;
            }
            acc += w * v.value();
        }
        ExtReal::new(acc)
    }

    /// Parses the text grid format (`dim`, `box`, `shape` header lines, then
    /// one value per line in row-major order, `inf` for +∞).
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let mut header = |key: &str| -> Result<Vec<String>> {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing `{key}` line")))?;
            let mut toks = line.split_whitespace();
            if toks.next() != Some(key) {
                return Err(Error::Parse(format!("expected `{key}` line, found `{line}`")));
            }
            Ok(toks.map(String::from).collect())
        };
        let num = |t: &str| t.parse::<f64>().map_err(|e| Error::Parse(format!("{t}: {e}")));
        let dim_tok = header("dim")?;
        let n: usize = dim_tok
            .first()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad `dim` line".into()))?;
        let bx: Vec<f64> = header("box")?.iter().map(|t| num(t)).collect::<Result<_>>()?;
        let shape: Vec<usize> = header("shape")?
            .iter()
            .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("{t}: {e}"))))
            .collect::<Result<_>>()?;
        if bx.len() != 2 * n || shape.len() != n {
            return Err(Error::Parse(format!("header inconsistent with dim {n}")));
        }
        let lo = (0..n).map(|i| bx[2 * i]).collect();
        let hi = (0..n).map(|i| bx[2 * i + 1]).collect();
        let spec = GridSpec::new(lo, hi, shape)?;
        let values: Vec<ExtReal> = lines
            .map(|t| match t {
                "inf" | "+inf" => Ok(ExtReal::INFINITY),
                t => num(t).map(ExtReal::new),
            })
            .collect::<Result<_>>()?;
        Self::new(spec, values)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_file_string(&self) -> String {
        let s = &self.spec;
        let mut out = format!("dim {}\nbox", s.dim());
        for a in 0..s.dim() {
            let _ = write!(out, " {:?} {:?}", s.lo()[a], s.hi()[a]);
        }
        out.push_str("\nshape");
        for k in s.shape() {
            let _ = write!(out, " {k}");
        }
        out.push('\n');
        for v in &self.values {
            if v.is_finite() {
                let _ = writeln!(out, "{:?}", v.value());
            } else {
                out.push_str("inf\n");
            }
        }
        out
    }
}
