//! The `epiconv` experiment runner.
//!
//! Every subcommand prints (or writes with `--out`) a JSON report
//! `{schema, command, inputs, resolved_defaults, results, certificates, timings}`.
//! Exit codes: 0 when every certificate passes, 1 on a failed certificate,
//! 2 on a configuration error, 3 on a numerical abort.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::calculus::{epi_distance, inf_convolve, EpiDistanceParams};
use crate::domain::DomainDescriptor;
use crate::dsl::make_function;
use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::extremal::{
    covering_minimize, functional_sanity, outer_mass_ladder, parse_functional, symmetrization_check, urysohn_check, Budget,
    Certificate, SlopeFamily, DEFAULT_RHO_CAP,
};
use crate::geometry::{halfspace_intersection, schneider_embed, Polytope};
use crate::grid::{GridFunction, GridSpec};
use crate::handle::FunctionHandle;
use crate::linearization::{check_admissible, outer_linearization, support_affine, PiecewiseAffine};
use crate::logconcave::{hypo_symmetrize, piecewise_affine_mass, LogConcaveHandle};
use crate::rotation::{Rotation, RotationGrid};
use crate::slopes::{DiscreteMeasure, SlopeSet};
use crate::symmetrize::{rotation_epi_mean, rotational_symmetrization_report, DEFAULT_ORDER};
use crate::transform::{conjugate_grid, default_dual_grid, dual_domain_radius};
use crate::vector::Vector;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "epiconv", version, about = "Outer linearizations, epi-symmetrization and extremal drivers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Conjugate values at points (--at) or on a grid (--grid)
    Conjugate,
    /// Infimal convolution of --fn and --fn2
    Infconv,
    /// Outer linearization of --fn with slopes --slopes
    Linearize,
    /// Rotational epi-symmetrization
    Symmetrize,
    /// Rotation epi-mean over --rot equally spaced rotations
    Epimean,
    /// Mass inequality J(f) <= J(f_rot)
    Urysohn,
    /// Upper bounds on F_N by multi-start pattern search
    Approx,
    /// Phi* of --fn and of its symmetrization on a shared family
    Phistar,
    /// Rotation sweep of the averaged conjugate
    Cover,
    /// Convex-body checks through the indicator embedding
    Schneider,
    /// Counterexamples on admissibility of slope sets
    DemoRemarks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by all subcommands; a `--config` JSON file with the same
/// (long) names supplies values not given on the command line.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct Options {
    /// JSON file with default values for any of these flags
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Function spec, e.g. "quadratic diag=1,4"
    #[arg(long = "fn", global = true)]
    #[serde(rename = "fn")]
    pub function: Option<String>,
    /// Second function spec
    #[arg(long = "fn2", global = true)]
    #[serde(rename = "fn2")]
    pub function2: Option<String>,
    /// Primal grid "lo,hi,k[,lo2,hi2,k2]"
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Dual grid, same syntax as --grid
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub dual_grid: Option<String>,
    /// Number of equally spaced rotations
    #[arg(long, global = true)]
    pub rot: Option<usize>,
    /// Slope file or gen:N,rho
    #[arg(long, global = true)]
    pub slopes: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Restarts and sweeps "R,I"
    #[arg(long, global = true)]
    pub budget: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Certificate tolerance override
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Points "x1[,x2][;...]"
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub at: Option<String>,
    /// Polytope file
    #[arg(long, global = true)]
    pub poly: Option<PathBuf>,
    /// tri3, origin or a measure file
    #[arg(long, global = true)]
    pub measure: Option<String>,
    /// log-mass, neg-log-mass or phi-avg:<measure>
    #[arg(long, global = true)]
    pub phi: Option<String>,
    /// Number of slopes N, or a range "a..b"
    #[arg(long, global = true)]
    pub n: Option<String>,
    /// Angular order of the symmetrization
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Radius for distances and slope caps
    #[arg(long, global = true)]
    pub rho: Option<f64>,
    /// Number of slope sets generated by gen:N,rho
    #[arg(long, global = true)]
    pub family_size: Option<usize>,
    /// Also optimize the symmetrized function (approx)
    #[arg(long, global = true)]
    #[serde(default)]
    pub compare_rot: bool,
}

impl Options {
    fn merge(self, file: Options) -> Options {
        Options {
            config: self.config,
            function: self.function.or(file.function),
            function2: self.function2.or(file.function2),
            grid: self.grid.or(file.grid),
            dual_grid: self.dual_grid.or(file.dual_grid),
            rot: self.rot.or(file.rot),
            slopes: self.slopes.or(file.slopes),
            seed: self.seed.or(file.seed),
            budget: self.budget.or(file.budget),
            out: self.out.or(file.out),
            format: self.format.or(file.format),
            tol: self.tol.or(file.tol),
            at: self.at.or(file.at),
            poly: self.poly.or(file.poly),
            measure: self.measure.or(file.measure),
            phi: self.phi.or(file.phi),
            n: self.n.or(file.n),
            order: self.order.or(file.order),
            rho: self.rho.or(file.rho),
            family_size: self.family_size.or(file.family_size),
            compare_rot: self.compare_rot || file.compare_rot,
        }
    }

    fn inputs(&self) -> Value {
        let mut v = serde_json::to_value(self).unwrap_or(Value::Null);
        if let Value::Object(m) = &mut v {
            m.retain(|_, x| !x.is_null() && *x != Value::Bool(false));
        }
        v
    }
}

impl serde::Serialize for Options {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let fmt = self.format.map(|f| match f {
            Format::Json => "json",
            Format::Csv => "csv",
        });
        json!({
            "config": self.config, "fn": self.function, "fn2": self.function2, "grid": self.grid,
            "dual-grid": self.dual_grid, "rot": self.rot, "slopes": self.slopes, "seed": self.seed,
            "budget": self.budget, "out": self.out, "format": fmt, "tol": self.tol, "at": self.at,
            "poly": self.poly, "measure": self.measure, "phi": self.phi, "n": self.n, "order": self.order,
            "rho": self.rho, "family-size": self.family_size, "compare-rot": self.compare_rot,
        })
        .serialize(s)
    }
}

/// Failures of a run, mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Config(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::NotPositiveDefinite
            | Error::OriginNotInterior
            | Error::Dimension { .. }
            | Error::UnsupportedDimension(_)
            | Error::InvalidArgument(_)
            | Error::Io(_) => Failure::Config(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn config_err<T>(msg: impl Into<String>) -> Run<T> {
    Err(Failure::Config(msg.into()))
}

/// JSON number, with `"inf"`/`"-inf"`/`"nan"` strings for non-finite values.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn ext(x: ExtReal) -> Value {
    num(x.value())
}

fn vec_json(v: &Vector) -> Value {
    Value::Array(v.coords().iter().map(|&c| num(c)).collect())
}

fn cert_json(c: &Certificate) -> Value {
    json!({
        "name": c.name, "lhs": num(c.lhs), "rhs": num(c.rhs),
        "slack": num(c.slack), "tol": num(c.tol), "pass": c.pass,
    })
}

fn rotation_json(r: &Rotation) -> Value {
    match r {
        Rotation::Reflection(s) => json!({ "reflection": s }),
        Rotation::Angle(t) => json!({ "angle": num(*t) }),
    }
}

/// A check that is either met or not, recorded as `0 ≤ 0` or `1 ≤ 0`.
fn verdict_cert(name: impl Into<String>, ok: bool) -> Certificate {
    Certificate::le(name, if ok { 0.0 } else { 1.0 }, 0.0, 0.0)
}

struct Report {
    resolved: Map<String, Value>,
    results: Map<String, Value>,
    certificates: Vec<Certificate>,
    table: Option<(Vec<&'static str>, Vec<Vec<Value>>)>,
}

impl Report {
    fn new() -> Self {
        Report { resolved: Map::new(), results: Map::new(), certificates: Vec::new(), table: None }
    }

    fn resolve(&mut self, key: &str, v: impl Into<Value>) {
        self.resolved.insert(key.into(), v.into());
    }

    fn result(&mut self, key: &str, v: impl Into<Value>) {
        self.results.insert(key.into(), v.into());
    }
}

fn parse_grid(s: &str) -> Result<GridSpec> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 && parts.len() != 6 {
        return Err(Error::Parse(format!("grid `{s}` is not lo,hi,k[,lo2,hi2,k2]")));
    }
    let (mut lo, mut hi, mut shape) = (Vec::new(), Vec::new(), Vec::new());
    for c in parts.chunks(3) {
        let f = |t: &str| t.parse::<f64>().map_err(|e| Error::Parse(format!("`{t}`: {e}")));
        lo.push(f(c[0])?);
        hi.push(f(c[1])?);
        shape.push(c[2].parse::<usize>().map_err(|e| Error::Parse(format!("`{}`: {e}", c[2])))?);
    }
    GridSpec::new(lo, hi, shape)
}

fn parse_points(s: &str, dim: usize) -> Result<Vec<Vector>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let c = p
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("`{t}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            let v = Vector::from_slice(&c)?;
            crate::error::check_dim(dim, v.dim())?;
            Ok(v)
        })
        .collect()
}

fn parse_budget(s: &str) -> Result<Budget> {
    let bad = || Error::Parse(format!("budget `{s}` is not R,I"));
    let (r, i) = s.split_once(',').ok_or_else(bad)?;
    Ok(Budget {
        restarts: r.trim().parse().map_err(|_| bad())?,
        iters: i.trim().parse().map_err(|_| bad())?,
        seed: 0,
    })
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("`{s}` is not N or a..b"));
    match s.split_once("..") {
        Some((a, b)) => Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            Ok((n, n))
        }
    }
}

fn rotation_grid(dim: usize, m: usize) -> Result<RotationGrid> {
    if dim == 1 {
        Ok(RotationGrid::reflections())
    } else {
        RotationGrid::equally_spaced(2, m)
    }
}

struct Ctx {
    opts: Options,
}

impl Ctx {
    fn function(&self, rep: &mut Report) -> Run<FunctionHandle> {
        match &self.opts.function {
            Some(s) => {
                let h = make_function(s)?;
                rep.resolve("fn", h.label());
                Ok(h)
            }
            None => config_err("--fn is required"),
        }
    }

    fn seed(&self, rep: &mut Report) -> Run<u64> {
        match self.opts.seed {
            Some(s) => {
                rep.resolve("seed", s);
                Ok(s)
            }
            None => config_err("--seed is required for this command"),
        }
    }

    fn points(&self, dim: usize) -> Run<Vec<Vector>> {
        Ok(match &self.opts.at {
            Some(s) => parse_points(s, dim)?,
            None => Vec::new(),
        })
    }

    fn slope_sets(&self, dim: usize, rep: &mut Report) -> Run<SlopeFamily> {
        let spec = match &self.opts.slopes {
            Some(s) => s.clone(),
            None => return config_err("--slopes is required"),
        };
        if let Some(g) = spec.strip_prefix("gen:") {
            let (n, rho) = g.split_once(',').ok_or_else(|| Error::Parse(format!("`{spec}` is not gen:N,rho")))?;
            let n: usize = n.trim().parse().map_err(|_| Error::Parse(format!("`{n}` is not a count")))?;
            let rho: f64 = rho.trim().parse().map_err(|_| Error::Parse(format!("`{rho}` is not a radius")))?;
            let count = self.opts.family_size.unwrap_or(1);
            let seed = self.seed(rep)?;
            rep.resolve("family-size", count);
            Ok(SlopeFamily::random(dim, count, n, rho, seed)?)
        } else {
            let set = SlopeSet::load(Path::new(&spec))?;
            crate::error::check_dim(dim, set.dim())?;
            Ok(SlopeFamily::new(vec![set], spec)?)
        }
    }

    fn tol(&self, rep: &mut Report, default: f64) -> f64 {
        let t = self.opts.tol.unwrap_or(default);
        rep.resolve("tol", num(t));
        t
    }
}

fn cmd_conjugate(ctx: &Ctx, rep: &mut Report) -> Run<()> {
    let h = ctx.function(rep)?;
    let pts = ctx.points(h.dim())?;
    if pts.is_empty() && ctx.opts.grid.is_none() {
        return config_err("conjugate needs --at or --grid");
    }
    let values: Vec<Value> = pts.iter().map(|y| json!({ "y": vec_json(y), "value": ext(h.eval_dual(y)) })).collect();
    rep.table = Some((vec!["y", "value"], pts.iter().map(|y| vec![vec_json(y), ext(h.eval_dual(y))]).collect()));
    rep.result("points", values);
    if let Some(g) = &ctx.opts.grid {
        let primal = parse_grid(g)?;
        crate::error::check_dim(h.dim(), primal.dim())?;
        let src = GridFunction::sample(&primal, |x| h.eval_primal(x))?;
        let dual = match &ctx.opts.dual_grid {
            Some(d) => parse_grid(d)?,
            None => default_dual_grid(&src)?,
        };
        rep.resolve("grid", g.clone());
        rep.resolve("dual-grid", format!("{:?}", dual));
        let conj = conjugate_grid(&src, &dual)?.certify(&primal)?;
        let lip = src.lipschitz_estimate();
        let tol = ctx.tol(rep, crate::config::grid_tol(primal.max_spacing(), lip));
        let mut err: f64 = 0.0;
        let mut compared = 0usize;
        let mut rows = Vec::new();
        for k in 0..dual.len() {
            let y = dual.point(k);
            let (d, a) = (conj.get(k), h.eval_dual(&y));
            rows.push(vec![vec_json(&y), ext(d), ext(a)]);
            if let (Some(d), Some(a)) = (d.finite(), a.finite()) {
                if !dual.on_boundary(k) {
                    err = err.max((d - a).abs());
                    compared += 1;
                }
            }
        }
        rep.result("grid", json!({ "nodes": dual.len(), "compared": compared, "max_error": num(err), "lipschitz": num(lip) }));
        rep.table = Some((vec!["y", "discrete", "oracle"], rows));
        rep.certificates.push(Certificate::le("grid conjugate error <= 2 h L", err, 0.0, tol));
    }
    Ok(())
}

fn cmd_infconv(ctx: &Ctx, rep: &mut Report) -> Run<()> {
    let h1 = ctx.function(rep)?;
    let h2 = match &ctx.opts.function2 {
        Some(s) => make_function(s)?,
        None => return config_err("--fn2 is required"),
    };
    rep.resolve("fn2", h2.label());
    let h = inf_convolve(&h1, &h2)?;
    let pts = ctx.points(h.dim())?;
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for x in &pts {
        let (p, d) = (h.eval_primal(x), h.eval_dual(x));
        out.push(json!({ "x": vec_json(x), "primal": ext(p), "dual": ext(d) }));
        rows.push(vec![vec_json(x), ext(p), ext(d)]);
    }
    rep.result("label", h.label());
    rep.result("radius", num(dual_domain_radius(&h)?.radius));
    rep.result("points", out);
    rep.table = Some((vec!["x", "primal", "dual"], rows));
    Ok(())
}

fn cmd_linearize(ctx: &Ctx, rep: &mut Report) -> Run<()> {
    let h = ctx.function(rep)?;
    let fam = ctx.slope_sets(h.dim(), rep)?;
    let y = &fam.sets[0];
    let verdict = check_admissible(&h, y);
    let q = outer_linearization(&h, y);
    let pieces: Vec<Value> =
        q.pieces().iter().map(|p| json!({ "slope": vec_json(&p.slope), "intercept": ext(p.intercept) })).collect();
    rep.result("slopes", y.points().iter().map(vec_json).collect::<Vec<_>>());
    rep.result("pieces", pieces);
    rep.result("degenerate", q.is_degenerate());
    rep.result("coercive", q.is_coercive());
    rep.result(
        "admissibility",
        json!({
            "in_conv_c": format!("{:?}", verdict.in_conv_c),
            "spanning_subset": verdict.spanning_subset,
            "inside_interior_ball": format!("{:?}", verdict.inside_interior_ball),
            "detail": verdict.detail,
        }),
    );
    if !q.is_degenerate() && q.is_coercive() {
        rep.result("mass", num(piecewise_affine_mass(&q)?));
    }
    let tol = ctx.tol(rep, 1e-6);
    let mut probes = ctx.points(h.dim())?;
    if probes.is_empty() {
        probes = crate::calculus::ball_sample(h.dim(), 2.0, 64);
    }
    let mut worst = f64::NEG_INFINITY;
    let mut rows = Vec::new();
    for x in &probes {
        let (qv, pv) = (q.eval(x), h.eval_primal(x));
        rows.push(vec![vec_json(x), ext(qv), ext(pv)]);
        if let (Some(a), Some(b)) = (qv.finite(), pv.finite()) {
            worst = worst.max((a - b) / (1.0 + b.abs()));
        }
    }
    rep.table = Some((vec!["x", "q", "psi"], rows));
    rep.certificates.push(Certificate::le("q <= psi (relative excess)", worst.max(0.0), 0.0, tol));
    Ok(())
}

fn cmd_symmetrize(ctx: &Ctx, rep: &mut Report) -> Run<()> {
    let h = ctx.function(rep)?;
    let order = ctx.opts.order.unwrap_or(DEFAULT_ORDER);
    rep.resolve("order", order);
    let (sym, sr) = rotational_symmetrization_report(&h, order, crate::config::Resolution::default())?;
    rep.result("order", sr.order);
    rep.result("richardson_delta", num(sr.richardson_delta));
    rep.result("radius", num(sr.radius));
    let pts = ctx.points(h.dim())?;
    let mut rows = Vec::new();
    for y in &pts {
        rows.push(vec![vec_json(y), ext(sym.eval_dual(y)), ext(sym.eval_primal(y))]);
    }
    rep.result(
        "points",
        rows.iter().map(|r| json!({ "at": r[0], "dual": r[1], "primal": r[2] })).collect::<Vec<_>>(),
    );
    rep.table = Some((vec!["at", "dual", "primal"], rows));
    Ok(())
}

fn cmd_epimean(ctx: &Ctx, rep: &mut Report) -> Run<()> {
    let h = ctx.function(rep)?;
    let m = ctx.opts.rot.unwrap_or(8);
    rep.resolve("rot", m);
    let theta = rotation_grid(h.dim(), m)?;
    let mean = rotation_epi_mean(&h, &theta)?;
    let (sym, _) = rotational_symmetrization_report(&h, DEFAULT_ORDER, crate::config::Resolution::default())?;
    let r = dual_domain_radius(&h)?.radius;
    let rho = ctx.opts.rho.unwrap_or(if r.is_finite() { 0.5 * r } else { 1.0 });
    rep.resolve("rho", num(rho));
    let d = epi_distance(&mean, &sym, &EpiDistanceParams::new(rho))?;
    rep.result("rotations", theta.len());
    rep.result("distance_to_symmetrization", num(d));
    let pts = ctx.points(h.dim())?;
    let rows: Vec<Vec<Value>> = pts.iter().map(|y| vec![vec_json(y), ext(mean.eval_dual(y))]).collect();
    rep.result("points", rows.iter().map(|r| json!({ "y": r[0], "dual": r[1] })).collect::<Vec<_>>());
    rep.table = Some((vec!["y", "dual"], rows));
    Ok(())
}

fn cmd_urysohn(ctx: &Ctx, rep: &mut Report) -> Run<()> {
    let h = ctx.function(rep)?;
    if let Some(s) = ctx.opts.seed {
        rep.resolve("seed", s);
    }
    let mut u = urysohn_check(&LogConcaveHandle::new(h))?;
    let rel = ctx.tol(rep, u.certificate.tol / u.mass.max(u.mass_rot));
    u.certificate = Certificate::le(u.certificate.name.clone(), u.mass, u.mass_rot, rel * u.mass.max(u.mass_rot));
    rep.result("mass", num(u.mass));
    rep.result("mass_rot", num(u.mass_rot));
    rep.table = Some((vec!["mass", "mass_rot"], vec![vec![num(u.mass), num(u.mass_rot)]]));
    rep.certificates.push(u.certificate);
    Ok(())
}

fn cmd_approx(ctx: &Ctx, rep: &mut Report) -> Run<()> {
    let h = ctx.function(rep)?;
    let seed = ctx.seed(rep)?;
    let (lo, hi) = parse_range(ctx.opts.n.as_deref().unwrap_or("4"))?;
    let mut budget = match &ctx.opts.budget {
        Some(b) => parse_budget(b)?,
        None => Budget::default(),
    };
    budget.seed = seed;
    let rho_cap = ctx.opts.rho.unwrap_or(DEFAULT_RHO_CAP);
    rep.resolve("n", format!("{lo}..{hi}"));
    rep.resolve("budget", format!("{},{}", budget.restarts, budget.iters));
    rep.resolve("rho", num(rho_cap));
    let tol = ctx.tol(rep, crate::config::CERTIFICATE_REL_TOL);
    let f = LogConcaveHandle::new(h);
    let mass = f.mass()?.value;
    rep.result("mass", num(mass));
    let ladder = outer_mass_ladder(&f, lo, hi, &budget, rho_cap)?;
    let rot_ladder = if ctx.opts.compare_rot {
        Some(outer_mass_ladder(&hypo_symmetrize(&f)?, lo, hi, &budget, rho_cap)?)
    } else {
        None
    };
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for (i, r) in ladder.iter().enumerate() {
        let n = lo + i;
        let slopes: Vec<Value> = r.argmin_set.iter().flatten().map(vec_json).collect();
        let restarts: Vec<Value> = r.candidates.iter().map(|c| num(c.value)).collect();
        let mut e = json!({ "n": n, "value": num(r.value), "slopes": slopes, "restarts": restarts, "seed": r.seed });
        let mut row = vec![json!(n), num(r.value)];
        rep.certificates.push(Certificate::le(format!("J(f) <= F_{n}(f)"), mass, r.value, tol * mass));
        if i > 0 {
            rep.certificates.push(Certificate::le(format!("F_{n} <= F_{}", n - 1), r.value, ladder[i - 1].value, 0.0));
        }
        if let Some(rl) = &rot_ladder {
            let v = rl[i].value;
            e["value_rot"] = num(v);
            row.push(num(v));
            rep.certificates.push(Certificate::le(format!("F_{n}(f) <= F_{n}(f_rot) + band"), r.value, v, 0.01 * mass));
        }
        rows.push(row);
        entries.push(e);
    }
    rep.result("ladder", entries);
    let mut header = vec!["n", "value"];
    if rot_ladder.is_some() {
        header.push("value_rot");
    }
    rep.table = Some((header, rows));
    Ok(())
}

fn cmd_phistar(ctx: &Ctx, rep: &mut Report) -> Run<()> {
    let h = ctx.function(rep)?;
    let fam = ctx.slope_sets(h.dim(), rep)?;
    let m = ctx.opts.rot.unwrap_or(180);
    rep.resolve("rot", m);
    let tag = ctx.opts.phi.clone().unwrap_or_else(|| "log-mass".into());
    rep.resolve("phi", tag.clone());
    let phi = parse_functional(&tag, h.dim()).map_err(Failure::from)?;
    let tol = ctx.tol(rep, 1e-4);
    let warnings = if h.dim() == 2 { functional_sanity(phi.as_ref())? } else { Vec::new() };
    let (a, b, cert) = symmetrization_check(&h, &fam, &rotation_grid(h.dim(), m)?, phi.as_ref(), tol)?;
    let side = |r: &crate::extremal::ExtremalReport| {
        json!({
            "value": num(r.value),
            "argmin_rotation": r.argmin_rotation.as_ref().map(rotation_json),
            "argmin_set": r.argmin_set.as_ref().map(|s| s.iter().map(vec_json).collect::<Vec<_>>()),
            "notes": r.notes,
        })
    };
    rep.result("phi_star", side(&a));
    rep.result("phi_star_rot", side(&b));
    rep.result("warnings", warnings);
    rep.table = Some((vec!["phi_star", "phi_star_rot"], vec![vec![num(a.value), num(b.value)]]));
    rep.certificates.push(cert);
    Ok(())
}

fn cmd_cover(ctx: &Ctx, rep: &mut Report) -> Run<()> {
    let h = match (&ctx.opts.poly, &ctx.opts.function) {
        (Some(p), _) => {
            rep.resolve("poly", p.display().to_string());
            schneider_embed(&Polytope::load(p)?)?
        }
        (None, Some(_)) => ctx.function(rep)?,
        (None, None) => return config_err("cover needs --poly or --fn"),
    };
    let spec = ctx.opts.measure.clone().unwrap_or_else(|| "tri3".into());
    rep.resolve("measure", spec.clone());
    let mu = DiscreteMeasure::parse_spec(&spec, h.dim())?;
    let m = ctx.opts.rot.unwrap_or(720);
    rep.resolve("rot", m);
    let theta = rotation_grid(h.dim(), m)?;
    let r = covering_minimize(&h, &mu, &theta)?;
    rep.result("min", num(r.value));
    rep.result("argmin_rotation", r.argmin_rotation.as_ref().map(rotation_json));
    let vals: Vec<f64> = r.candidates.iter().map(|c| c.value).collect();
    let spread = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - vals.iter().cloned().fold(f64::INFINITY, f64::min);
    rep.result("sweep_spread", num(spread));
    rep.result("notes", r.notes.clone());
    rep.table = Some((
        vec!["rotation", "value"],
        r.candidates.iter().map(|c| vec![rotation_json(&theta.rotations()[c.rotation]), num(c.value)]).collect(),
    ));
    if let Some(mut c) = r.certificate {
        if let Some(t) = ctx.opts.tol {
            c = Certificate::le(c.name, c.lhs, c.rhs, t);
        }
        rep.certificates.push(c);
    }
    Ok(())
}

fn cmd_schneider(ctx: &Ctx, rep: &mut Report) -> Run<()> {
    let k = match &ctx.opts.poly {
        Some(p) => Polytope::load(p)?,
        None => return config_err("schneider needs --poly"),
    };
    if k.dim() != 2 {
        return Err(Error::UnsupportedDimension(k.dim()).into());
    }
    let m = ctx.opts.rot.unwrap_or(4);
    rep.resolve("rot", m);
    let dirs: Vec<Vector> = (0..m).map(|i| Vector::direction(2, i, m)).collect();
    let (area, w) = (k.area(), k.mean_width()?);
    let ball_area = PI * (0.5 * w).powi(2);
    let p = halfspace_intersection(&k, &dirs)?;
    let contained = k.vertices().iter().all(|v| p.contains(v, 1e-9));
    let f = LogConcaveHandle::new(schneider_embed(&k)?);
    let u = urysohn_check(&f)?;
    rep.result("area", num(area));
    rep.result("perimeter", num(k.perimeter()));
    rep.result("mean_width", num(w));
    rep.result("rot_radius", num(k.rot_radius()?));
    rep.result("ball_area", num(ball_area));
    rep.result("circumscribed", json!({ "directions": m, "vertices": p.vertices().len(), "area": num(p.area()) }));
    rep.result("mass", num(u.mass));
    rep.result("mass_rot", num(u.mass_rot));
    rep.table = Some((
        vec!["area", "ball_area", "mass", "mass_rot"],
        vec![vec![num(area), num(ball_area), num(u.mass), num(u.mass_rot)]],
    ));
    let tol = ctx.tol(rep, 1e-9);
    rep.certificates.push(Certificate::le("area(K) <= pi (w/2)^2", area, ball_area, tol * ball_area));
    rep.certificates.push(u.certificate);
    rep.certificates.push(Certificate::le("|J(chi_K) - area(K)| <= 1% area", (u.mass - area).abs(), 0.01 * area, 0.0));
    rep.certificates.push(Certificate::le(
        "|J(chi_K_rot) - pi (w/2)^2| <= 1%",
        (u.mass_rot - ball_area).abs(),
        0.01 * ball_area,
        0.0,
    ));
    rep.certificates.push(verdict_cert("K inside P(K,U)", contained));
    Ok(())
}

/// `φ(x) = 0` on the unit ball and `|x| − √|x|` outside; its conjugate is
/// finite exactly on the open unit ball.
struct OpenBallExample {
    dim: usize,
}

impl crate::handle::ConvexFunction for OpenBallExample {
    fn dim(&self) -> usize {
        self.dim
    }

    fn primal(&self, x: &Vector) -> ExtReal {
        let r = x.norm();
        ExtReal::new(if r <= 1.0 { 0.0 } else { r - r.sqrt() })
    }

    fn dual(&self, y: &Vector) -> ExtReal {
        let s = y.norm();
        if s >= 1.0 {
            ExtReal::INFINITY
        } else if s <= 0.5 {
            ExtReal::new(s)
        } else {
            ExtReal::new(0.25 / (1.0 - s))
        }
    }

    fn dual_domain(&self) -> DomainDescriptor {
        DomainDescriptor::Ball(1.0)
    }

    fn label(&self) -> String {
        "open-ball example".into()
    }
}

fn cmd_demo_remarks(_ctx: &Ctx, rep: &mut Report) -> Run<()> {
    let mut demos = Vec::new();

    // Boundary slopes of sqrt(1+|x|^2) give proper affine minorants, those of φ do not.
    let s = make_function("sqrt1p dim=2")?;
    let phi = FunctionHandle::new(OpenBallExample { dim: 2 });
    let u = Vector::new2(1.0, 0.0);
    let (ls, lp) = (support_affine(&s, &u), support_affine(&phi, &u));
    let dual_at = ext(s.eval_dual(&Vector::new2(0.6, 0.0)));
    demos.push(json!({
        "case": "boundary slopes",
        "sqrt1p_dual_at_0.6": dual_at,
        "sqrt1p_boundary_piece_proper": ls.is_proper(),
        "open_ball_boundary_piece_proper": lp.is_proper(),
    }));
    rep.certificates.push(verdict_cert("sqrt1p: slope on the unit sphere gives a proper minorant", ls.is_proper()));
    rep.certificates.push(verdict_cert("open-ball example: slope on the unit sphere is improper", !lp.is_proper()));

    // Square support: cube vertices work for ψ but not for ψ_rot.
    let sq = make_function("support box=[-1,1]^2")?;
    let cube = SlopeSet::cube_vertices(2)?;
    let v = check_admissible(&sq, &cube);
    let (sym, _) = rotational_symmetrization_report(&sq, DEFAULT_ORDER, crate::config::Resolution::default())?;
    let q_rot = outer_linearization(&sym, &cube);
    let q = outer_linearization(&sq, &cube);
    demos.push(json!({
        "case": "square support with cube vertices",
        "in_conv_c": format!("{:?}", v.in_conv_c),
        "q_coercive": q.is_coercive(),
        "q_rot_degenerate": q_rot.is_degenerate(),
    }));
    rep.certificates.push(verdict_cert("square support: cube vertices admissible", v.in_conv_c.is_yes()));
    rep.certificates.push(verdict_cert("square support: q of psi_rot is identically -inf", q_rot.is_degenerate()));

    // Conjugate (x1+1)^(-1/4) on the closed disk: Y works for ψ_rot only, and
    // a three-rotation epi-mean misses Y entirely.
    let res = crate::config::Resolution::coarse();
    let dual = |y: &Vector| {
        if y.norm() > 1.0 {
            ExtReal::INFINITY
        } else {
            ExtReal::new((y.x() + 1.0).powf(-0.25))
        }
    };
    let psi = FunctionHandle::from_dual_with(2, DomainDescriptor::Ball(1.0), "(y1+1)^(-1/4) on the disk", res, dual);
    let radial = |s: f64| {
        let k = 1 << 14;
        let h = 2.0 * PI / k as f64;
        (0..k).map(|i| (s * ((i as f64 + 0.5) * h).cos() + 1.0).powf(-0.25)).sum::<f64>() / k as f64
    };
    let psi_rot = FunctionHandle::from_dual_with(2, DomainDescriptor::Ball(1.0), "symmetrization", res, move |y: &Vector| {
        let s = y.norm();
        if s > 1.0 {
            ExtReal::INFINITY
        } else {
            ExtReal::new(radial(s))
        }
    });
    let r2 = 0.5f64.sqrt();
    let y = SlopeSet::new(vec![Vector::new2(-1.0, 0.0), Vector::new2(r2, r2), Vector::new2(r2, -r2)])?;
    let (q, q_rot) = (outer_linearization(&psi, &y), outer_linearization(&psi_rot, &y));
    let theta = RotationGrid::new(vec![Rotation::angle(0.0), Rotation::angle(-0.75 * PI), Rotation::angle(0.75 * PI)])?;
    let mean = rotation_epi_mean(&psi, &theta)?;
    let q_mean = outer_linearization(&mean, &y);
    let usable = |q: &PiecewiseAffine| !q.is_degenerate() && q.is_coercive();
    demos.push(json!({
        "case": "singular conjugate on the disk",
        "q_rot_coercive": usable(&q_rot),
        "q_coercive": usable(&q),
        "q_proper_pieces": q.pieces().len(),
        "q_epi_mean_degenerate": q_mean.is_degenerate(),
    }));
    rep.certificates.push(verdict_cert("singular example: q of psi_rot is proper and coercive", usable(&q_rot)));
    rep.certificates.push(verdict_cert("singular example: q of psi is not coercive", !usable(&q)));
    rep.certificates.push(verdict_cert("singular example: three-rotation epi-mean gives q identically -inf", q_mean.is_degenerate()));
    rep.result("demos", demos);
    Ok(())
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(csv_cell).collect::<Vec<_>>().join(" "),
        Value::Object(_) => v.to_string().replace(',', ";"),
        other => other.to_string(),
    }
}

fn render_csv(table: &Option<(Vec<&'static str>, Vec<Vec<Value>>)>) -> String {
    let mut s = String::new();
    if let Some((header, rows)) = table {
        s.push_str(&header.join(","));
        s.push('\n');
        for r in rows {
            s.push_str(&r.iter().map(csv_cell).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
    }
    s
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Conjugate => "conjugate",
        Command::Infconv => "infconv",
        Command::Linearize => "linearize",
        Command::Symmetrize => "symmetrize",
        Command::Epimean => "epimean",
        Command::Urysohn => "urysohn",
        Command::Approx => "approx",
        Command::Phistar => "phistar",
        Command::Cover => "cover",
        Command::Schneider => "schneider",
        Command::DemoRemarks => "demo-remarks",
    }
}

/// Output of a finished run.
pub struct Outcome {
    pub exit_code: i32,
    pub report: Value,
    pub csv: String,
}

fn execute(cli: Cli) -> std::result::Result<Outcome, (i32, String)> {
    let start = Instant::now();
    let mut opts = cli.opts;
    if let Some(path) = opts.config.clone() {
        let text = std::fs::read_to_string(&path).map_err(|e| (2, format!("{}: {e}", path.display())))?;
        let file: Options = serde_json::from_str(&text).map_err(|e| (2, format!("{}: {e}", path.display())))?;
        opts = opts.merge(file);
    }
    if let Some(t) = opts.tol {
        if !(t >= 0.0 && t.is_finite()) {
            return Err((2, format!("--tol must be a finite nonnegative number, got {t}")));
        }
    }
    let ctx = Ctx { opts };
    let mut rep = Report::new();
    let run = match cli.command {
        Command::Conjugate => cmd_conjugate(&ctx, &mut rep),
        Command::Infconv => cmd_infconv(&ctx, &mut rep),
        Command::Linearize => cmd_linearize(&ctx, &mut rep),
        Command::Symmetrize => cmd_symmetrize(&ctx, &mut rep),
        Command::Epimean => cmd_epimean(&ctx, &mut rep),
        Command::Urysohn => cmd_urysohn(&ctx, &mut rep),
        Command::Approx => cmd_approx(&ctx, &mut rep),
        Command::Phistar => cmd_phistar(&ctx, &mut rep),
        Command::Cover => cmd_cover(&ctx, &mut rep),
        Command::Schneider => cmd_schneider(&ctx, &mut rep),
        Command::DemoRemarks => cmd_demo_remarks(&ctx, &mut rep),
    };
    match run {
        Err(Failure::Config(m)) => return Err((2, m)),
        Err(Failure::Numerical(m)) => return Err((3, m)),
        Ok(()) => {}
    }
    let pass = rep.certificates.iter().all(|c| c.pass);
    let report = json!({
        "schema": SCHEMA_VERSION,
        "command": command_name(cli.command),
        "inputs": ctx.opts.inputs(),
        "resolved_defaults": Value::Object(rep.resolved),
        "results": Value::Object(rep.results),
        "certificates": rep.certificates.iter().map(cert_json).collect::<Vec<_>>(),
        "timings": { "total_ms": start.elapsed().as_secs_f64() * 1e3 },
    });
    Ok(Outcome { exit_code: if pass { 0 } else { 1 }, report, csv: render_csv(&rep.table) })
}

/// Parses `args` (including the program name), runs the command, writes the
/// report and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(n) = crate::config::thread_cap() {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = cli.opts.out.clone();
    let format = cli.opts.format.unwrap_or(Format::Json);
    match execute(cli) {
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
        Ok(o) => {
            let text = serde_json::to_string_pretty(&o.report).expect("serializable report") + "\n";
            let written = match (&out, format) {
                (Some(p), Format::Json) => std::fs::write(p, &text),
                (Some(p), Format::Csv) => std::fs::write(p, &text).and_then(|_| std::fs::write(p.with_extension("csv"), &o.csv)),
                (None, Format::Json) => {
                    print!("{text}");
                    Ok(())
                }
                (None, Format::Csv) => {
                    print!("{}", o.csv);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 2;
            }
            o.exit_code
        }
    }
}

/// Runs without printing; used by tests.
pub fn run_captured<I, T>(args: I) -> std::result::Result<Outcome, (i32, String)>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| (2, e.to_string()))?;
    execute(cli)
}
