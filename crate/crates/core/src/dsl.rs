//! One-line function specifications: `name key=value ...`.
//!
//! ```text
//! quadratic diag=1,4
//! quadratic matrix=2,0.5,1 center=0.1,0
//! sqrt1p            (dimension 1 unless dim=2)
//! indicator box=[-1,1]^2
//! support vertices=1,0;0,1;-1,-1
//! support regular=6 radius=1.5
//! indicator poly=square.poly
//! norm-power p=3 diag=1,2
//! grid file=psi.grid
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::families::{GridBacked, Indicator, NormPower, Quadratic, Sqrt1p, Support};
use crate::geometry::Polytope;
use crate::grid::GridFunction;
use crate::handle::FunctionHandle;
use crate::vector::Vector;

fn numbers(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("`{t}`: {e}"))))
        .collect()
}

fn number(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("`{s}`: {e}")))
}

/// `[lo,hi]^n`
fn parse_box(s: &str) -> Result<Polytope> {
    let bad = || Error::Parse(format!("box `{s}` is not of the form [lo,hi]^n"));
    let (interval, n) = match s.split_once('^') {
        Some((i, n)) => (i, n.trim().parse::<usize>().map_err(|_| bad())?),
        None => (s, 1),
    };
    let inner = interval.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
    match numbers(inner)?.as_slice() {
        [lo, hi] if lo < hi => match n {
            1 => Polytope::segment(*lo, *hi),
            n => Polytope::cube(n, *lo, *hi),
        },
        _ => Err(bad()),
    }
}

fn parse_vertices(s: &str) -> Result<Polytope> {
    let pts = s.split(';').map(|p| Vector::from_slice(&numbers(p)?)).collect::<Result<Vec<_>>>()?;
    Polytope::from_vertices(&pts)
}

fn polytope_from(args: &BTreeMap<&str, &str>, base: &Path) -> Result<Polytope> {
    if let Some(b) = args.get("box") {
        parse_box(b)
    } else if let Some(v) = args.get("vertices") {
        parse_vertices(v)
    } else if let Some(p) = args.get("poly") {
        Polytope::load(&base.join(p))
    } else if let Some(m) = args.get("regular") {
        let m = m.parse::<usize>().map_err(|e| Error::Parse(format!("regular={m}: {e}")))?;
        let r = args.get("radius").map_or(Ok(1.0), |r| number(r))?;
        Polytope::regular(m, r)
    } else {
        Err(Error::Parse("polytope needs one of box=, vertices=, poly=, regular=".into()))
    }
}

fn check_keys(name: &str, args: &BTreeMap<&str, &str>, allowed: &[&str]) -> Result<()> {
    match args.keys().find(|k| !allowed.contains(k)) {
        Some(k) => Err(Error::Parse(format!("`{name}` does not take `{k}=`"))),
        None => Ok(()),
    }
}

/// Builds a handle from a one-line spec; relative file paths resolve against
/// the working directory.
pub fn make_function(spec: &str) -> Result<FunctionHandle> {
    make_function_in(spec, Path::new("."))
}

/// Like [`make_function`], resolving relative file paths against `base`.
pub fn make_function_in(spec: &str, base: &Path) -> Result<FunctionHandle> {
    let mut toks = spec.split_whitespace();
    let name = toks.next().ok_or_else(|| Error::Parse("empty function spec".into()))?;
    let mut args = BTreeMap::new();
    for t in toks {
        let (k, v) = t.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, found `{t}`")))?;
        if args.insert(k, v).is_some() {
            return Err(Error::Parse(format!("duplicate key `{k}`")));
        }
    }
    match name {
        "quadratic" => {
            check_keys(name, &args, &["diag", "matrix", "a", "center"])?;
            let center = args.get("center").map(|c| numbers(c).and_then(|v| Vector::from_slice(&v))).transpose()?;
            let q = match (args.get("diag"), args.get("matrix"), args.get("a")) {
                (Some(d), None, None) => {
                    let d = numbers(d)?;
                    match d.as_slice() {
                        [a] => Quadratic::new(1, &[*a], center)?,
                        [a, b] => Quadratic::new(2, &[*a, 0.0, *b], center)?,
                        _ => return Err(Error::UnsupportedDimension(d.len())),
                    }
                }
                (None, Some(m), None) => Quadratic::new(2, &numbers(m)?, center)?,
                (None, None, Some(a)) => Quadratic::new(1, &[number(a)?], center)?,
                (None, None, None) => Quadratic::new(2, &[1.0, 0.0, 1.0], center)?,
                _ => return Err(Error::Parse("quadratic takes one of diag=, matrix=, a=".into())),
            };
            Ok(FunctionHandle::new(q))
        }
        "sqrt1p" => {
            check_keys(name, &args, &["dim"])?;
            let dim = args.get("dim").map_or(Ok(1), |d| d.parse::<usize>().map_err(|e| Error::Parse(format!("dim={d}: {e}"))))?;
            if !(1..=2).contains(&dim) {
                return Err(Error::UnsupportedDimension(dim));
            }
            Ok(FunctionHandle::new(Sqrt1p { dim }))
        }
        "indicator" | "support" => {
            check_keys(name, &args, &["box", "vertices", "poly", "regular", "radius"])?;
            let poly = polytope_from(&args, base)?;
            if name == "indicator" {
                Ok(FunctionHandle::new(Indicator::new(poly)))
            } else {
                Ok(FunctionHandle::new(Support::new(poly)?))
            }
        }
        "norm-power" => {
            check_keys(name, &args, &["p", "dim", "diag"])?;
            let p = number(args.get("p").ok_or_else(|| Error::Parse("norm-power needs p=".into()))?)?;
            let diag = match (args.get("diag"), args.get("dim")) {
                (Some(d), _) => numbers(d)?,
                (None, Some(d)) => vec![1.0; d.parse::<usize>().map_err(|e| Error::Parse(format!("dim={d}: {e}")))?],
                (None, None) => vec![1.0; 2],
            };
            Ok(FunctionHandle::new(NormPower::new(p, diag)?))
        }
        "grid" => {
            check_keys(name, &args, &["file"])?;
            let file = args.get("file").ok_or_else(|| Error::Parse("grid needs file=".into()))?;
            let g = GridFunction::load(&base.join(file))?;
            Ok(FunctionHandle::new(GridBacked::new(g, *file)?))
        }
        other => Err(Error::Parse(format!("unknown function family `{other}`"))),
    }
}
