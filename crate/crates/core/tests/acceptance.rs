//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! The lines go straight to stdout and show in plain `cargo test` output.

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use epiconv::calculus::{ball_function, epi_distance, outer_parallel, EpiDistanceParams};
use epiconv::dsl::make_function;
use epiconv::extremal::{
    covering_minimize, fn_inequality_check, outer_mass_ladder, phi_star, phi_star_unfiltered, symmetrization_check,
    urysohn_check, usc_probe, Budget, Functional, LogMass, NegLogMass, SlopeFamily,
};
use epiconv::families::{GridBacked, Quadratic, Support};
use epiconv::geometry::{schneider_embed, Polytope};
use epiconv::linearization::{check_admissible, outer_linearization};
use epiconv::logconcave::{hypo_symmetrize, LogConcaveHandle};
use epiconv::symmetrize::{rotation_epi_mean, rotational_symmetrization, DEFAULT_ORDER};
use epiconv::transform::{
    biconjugate, conjugate_grid, default_dual_grid, discrete_conjugate_reference, dual_domain_radius, Conjugator,
};
use epiconv::{DiscreteMeasure, ExtReal, FunctionHandle, GridFunction, GridSpec, RotationGrid, SlopeSet, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(id: usize, name: &str, limit_secs: Option<f64>, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let mut o = f();
    let secs = t.elapsed().as_secs_f64();
    if let Some(l) = limit_secs {
        if secs > l {
            o.pass = false;
            o.detail.push_str(&format!("; runtime limit {l} s exceeded"));
        }
    }
    // written to the handle directly so the line shows without --nocapture
    let line = format!("criterion {id:>2} [{}] {name}: {} ({secs:.1} s)\n", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    o.pass
}

fn grid_handle_1d() -> FunctionHandle {
    // x^4/4 + x/2 sampled on a file-style grid
    let spec = GridSpec::cube(1, -2.0, 2.0, 257).unwrap();
    let g = GridFunction::sample(&spec, |x| ExtReal::new(0.25 * x.x().powi(4) + 0.5 * x.x())).unwrap();
    FunctionHandle::new(GridBacked::new(GridFunction::parse(&g.to_file_string()).unwrap(), "grid").unwrap())
}

fn grid_handle_2d() -> FunctionHandle {
    let spec = GridSpec::cube(2, -2.0, 2.0, 65).unwrap();
    let g = GridFunction::sample(&spec, |x| ExtReal::new(0.25 * x.norm_sq().powi(2) + 0.5 * x.x() + 0.2 * x.y() * x.y()))
        .unwrap();
    FunctionHandle::new(GridBacked::new(g, "grid").unwrap())
}

fn builtins(dim: usize) -> Vec<(&'static str, FunctionHandle)> {
    let f = |s: &str| make_function(s).unwrap();
    if dim == 1 {
        vec![
            ("quadratic", f("quadratic a=1.5")),
            ("sqrt1p", f("sqrt1p")),
            ("indicator", f("indicator box=[-1,1]")),
            ("support", f("support box=[-1,2]")),
            ("norm-power", f("norm-power p=3 diag=1")),
            ("grid", grid_handle_1d()),
        ]
    } else {
        vec![
            ("quadratic", f("quadratic diag=1,4")),
            ("sqrt1p", f("sqrt1p dim=2")),
            ("indicator", f("indicator box=[-1,1]^2")),
            ("support", f("support box=[-1,1]^2")),
            ("norm-power", f("norm-power p=3 diag=1,2")),
            ("grid", grid_handle_2d()),
        ]
    }
}

fn criterion_1() -> Outcome {
    let mut worst_ratio: f64 = 0.0;
    let mut parts = Vec::new();
    let mut brute: f64 = 0.0;
    for (dim, k) in [(1usize, 1025usize), (2, 257)] {
        let spec = GridSpec::cube(dim, -1.5, 1.5, k).unwrap();
        for (name, h) in builtins(dim) {
            let src = h.sample_primal(&spec).unwrap();
            let bi = biconjugate(&src).unwrap();
            let tol = 2.0 * spec.max_spacing() * src.lipschitz_estimate();
            let mut err: f64 = 0.0;
            for i in 0..spec.len() {
                if spec.on_boundary(i) {
                    continue;
                }
                if let (Some(a), Some(b)) = (src.get(i).finite(), bi.get(i).finite()) {
                    err = err.max((a - b).abs());
                } else if src.get(i).is_finite() != bi.get(i).is_finite() {
                    err = f64::INFINITY;
                }
            }
            worst_ratio = worst_ratio.max(err / tol);
            if err > tol {
                parts.push(format!("{dim}d {name}: {err:.2e} > {tol:.2e}"));
            }
            if dim == 1 {
                let dual = default_dual_grid(&src).unwrap();
                let fast = conjugate_grid(&src, &dual).unwrap().grid;
                let slow = discrete_conjugate_reference(&src, &dual).unwrap().grid;
                for (a, b) in fast.values().iter().zip(slow.values()) {
                    let d = if a.is_finite() && b.is_finite() { (a.value() - b.value()).abs() } else if a == b { 0.0 } else { f64::INFINITY };
                    brute = brute.max(d);
                }
            }
        }
    }
    let pass = worst_ratio <= 1.0 && brute <= 1e-12;
    Outcome {
        pass,
        detail: format!(
            "12 biconjugations, worst error/(2hL) = {worst_ratio:.3}; fast vs brute 1-d max diff {brute:.1e}{}",
            if parts.is_empty() { String::new() } else { format!("; {}", parts.join(", ")) }
        ),
    }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut analytic: f64 = 0.0;
    let mut grid_ratio: f64 = 0.0;
    let mut radius_ok = true;
    for dim in [1usize, 2] {
        let h = make_function(&format!("sqrt1p dim={dim}")).unwrap();
        let r = dual_domain_radius(&h).unwrap();
        radius_ok &= r.exact && r.radius == 1.0;
        let k = if dim == 1 { 1025 } else { 257 };
        let spec = GridSpec::cube(dim, -12.0, 12.0, k).unwrap();
        let src = h.sample_primal(&spec).unwrap();
        let conj = Conjugator::new(&src).unwrap();
        let tol = 2.0 * spec.max_spacing() * src.lipschitz_estimate();
        for _ in 0..1000 {
            let y = if dim == 1 {
                Vector::new1(rng.gen_range(-1.0..1.0))
            } else {
                Vector::polar(rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI))
            };
            let exact = -(1.0 - y.norm_sq()).max(0.0).sqrt();
            analytic = analytic.max((h.eval_dual(&y).value() - exact).abs());
            // the maximizer |x| = |y|/sqrt(1-|y|^2) must lie inside the primal box
            if y.norm() <= 0.99 {
                grid_ratio = grid_ratio.max((conj.eval(&y).value() - exact).abs() / tol);
            }
        }
        radius_ok &= h.eval_dual(&Vector::direction(dim, 0, 4).scale(1.0 + 1e-9)).is_pos_infinite();
    }
    Outcome {
        pass: analytic <= 1e-6 && grid_ratio <= 1.0 && radius_ok,
        detail: format!(
            "2000 dual points, analytic max err {analytic:.1e}, grid err/(2hL) {grid_ratio:.3}, r(psi) = 1 exact: {radius_ok}"
        ),
    }
}

fn criterion_3() -> Outcome {
    let psi = make_function("support box=[-1,1]^2").unwrap();
    let cube = SlopeSet::cube_vertices(2).unwrap();
    let verdict = check_admissible(&psi, &cube);
    let rot = rotational_symmetrization(&psi, DEFAULT_ORDER).unwrap();
    let q_rot = outer_linearization(&rot, &cube);
    let q = outer_linearization(&psi, &cube);
    let pass = verdict.in_conv_c.is_yes() && q.is_coercive() && q_rot.is_degenerate();
    Outcome {
        pass,
        detail: format!(
            "in_conv_c = {:?}, q coercive = {}, q for psi_rot degenerate = {}",
            verdict.in_conv_c,
            q.is_coercive(),
            q_rot.is_degenerate()
        ),
    }
}

fn criterion_4() -> Outcome {
    let psi = make_function("quadratic diag=1,4").unwrap();
    let rot = rotational_symmetrization(&psi, 256).unwrap();
    let mut err: f64 = 0.0;
    for k in 0..32 {
        let y = Vector::polar(0.3 + 0.1 * (k % 8) as f64, 0.7 + 2.0 * PI * k as f64 / 32.0);
        err = err.max((rot.eval_dual(&y).value() - 5.0 / 16.0 * y.norm_sq()).abs());
    }
    let u = urysohn_check(&LogConcaveHandle::new(psi)).unwrap();
    let rel_j = (u.mass - PI).abs() / PI;
    let rel_rot = (u.mass_rot - 1.25 * PI).abs() / (1.25 * PI);
    let slack_ok = (u.certificate.slack - 0.25 * PI).abs() <= 1e-3 * 1.25 * PI;
    Outcome {
        pass: err <= 1e-6 && rel_j <= 1e-3 && rel_rot <= 1e-3 && u.certificate.pass && slack_ok,
        detail: format!(
            "probe err {err:.1e}; J(f) = {:.6} (rel {rel_j:.1e}), J(f_rot) = {:.6} (rel {rel_rot:.1e}), slack {:.4}",
            u.mass, u.mass_rot, u.certificate.slack
        ),
    }
}

fn criterion_5() -> Outcome {
    let sq = Polytope::cube(2, -1.0, 1.0).unwrap();
    let w = sq.mean_width().unwrap();
    let body = PI * (0.5 * w).powi(2);
    let f = LogConcaveHandle::new(schneider_embed(&sq).unwrap());
    let j = f.mass().unwrap().value;
    let j_rot = hypo_symmetrize(&f).unwrap().mass().unwrap().value;
    let agree = (j - sq.area()).abs() <= 0.01 * sq.area() && (j_rot - body).abs() <= 0.01 * body;
    Outcome {
        pass: sq.area() <= body && j <= j_rot && agree && (body - 16.0 / PI).abs() < 1e-12,
        detail: format!("body: 4 <= {body:.4}; embedding: {j:.4} <= {j_rot:.4}; paths agree within 1%: {agree}"),
    }
}

fn criterion_6() -> Outcome {
    let ms = [4usize, 8, 16, 32, 256];
    let ladder = |psi: &FunctionHandle, rho: f64| -> Vec<f64> {
        let rot = rotational_symmetrization(psi, DEFAULT_ORDER).unwrap();
        ms.iter()
            .map(|&m| {
                let t = rotation_epi_mean(psi, &RotationGrid::equally_spaced(2, m).unwrap()).unwrap();
                epi_distance(&t, &rot, &EpiDistanceParams::new(rho)).unwrap()
            })
            .collect()
    };
    // r(psi) is infinite for the quadratic, so the comparison ball has radius 1
    let quad = ladder(&make_function("quadratic diag=1,4").unwrap(), 1.0);
    let floor = 1e-12;
    let decreasing = |d: &[f64]| d[..4].windows(2).all(|w| w[1] < w[0] || (w[0] < floor && w[1] < floor));
    let aniso = ladder(&make_function("norm-power p=3 diag=1,2").unwrap(), 1.0);
    let strict = aniso[..4].windows(2).all(|w| w[1] < w[0]);
    Outcome {
        pass: decreasing(&quad) && quad[4] < 1e-3 && strict && aniso[4] < 1e-3,
        detail: format!(
            "quadratic distances {:?} (exact from m = 3 on, below the {floor:.0e} floor); norm-power p=3 {:?}",
            quad.iter().map(|d| format!("{d:.1e}")).collect::<Vec<_>>(),
            aniso.iter().map(|d| format!("{d:.1e}")).collect::<Vec<_>>()
        ),
    }
}

fn criterion_7() -> Outcome {
    let rs = [0.4, 0.2, 0.1, 0.05];
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, h) in builtins(2) {
        let rho = 0.5
            * rs.iter()
                .map(|&r| dual_domain_radius(&ball_function(&h, r).unwrap()).unwrap().radius)
                .fold(f64::INFINITY, f64::min)
                .min(dual_domain_radius(&h).unwrap().radius);
        let d: Vec<f64> = rs
            .iter()
            .map(|&r| epi_distance(&outer_parallel(&h, r).unwrap(), &h, &EpiDistanceParams::new(rho)).unwrap())
            .collect();
        let dec = d.windows(2).all(|w| w[1] < w[0]);
        ok &= dec;
        if !dec {
            notes.push(format!("{name}: {d:?}"));
        }
    }
    let psi = make_function("quadratic diag=1,4").unwrap();
    let fam = SlopeFamily::random(2, 4, 4, 2.0, 7).unwrap();
    let rot = RotationGrid::equally_spaced(2, 36).unwrap();
    let base_neg = phi_star(&psi, &fam, &rot, &NegLogMass).unwrap().value;
    let probe_neg = usc_probe(&psi, &fam, &rot, &NegLogMass, &[20]).unwrap();
    let gap_neg = probe_neg[0].1 - base_neg;
    let base_log = phi_star(&psi, &fam, &rot, &LogMass).unwrap().value;
    let probe_log = usc_probe(&psi, &fam, &rot, &LogMass, &[10, 20]).unwrap();
    let (g10, g20) = (probe_log[0].1 - base_log, probe_log[1].1 - base_log);
    let extrapolated = 2.0 * g20 - g10;
    let usc = gap_neg <= 1e-3 && extrapolated <= 1e-3;
    Outcome {
        pass: ok && usc,
        detail: format!(
            "epi-distance ladder strictly decreasing for 6 builtins: {ok}{}; Phi* gap at j=20: {gap_neg:.4} (neg-log-mass), \
             {g20:.4} (log-mass, limsup extrapolated {extrapolated:.1e})",
            if notes.is_empty() { String::new() } else { format!(" [{}]", notes.join("; ")) }
        ),
    }
}

fn random_test_functions(rng: &mut ChaCha8Rng) -> Vec<FunctionHandle> {
    let mut out = Vec::new();
    for _ in 0..5 {
        let (a, c): (f64, f64) = (rng.gen_range(0.3..3.0), rng.gen_range(0.3..3.0));
        let b = rng.gen_range(-0.8..0.8) * (a * c).sqrt();
        out.push(FunctionHandle::new(Quadratic::new(2, &[a, b, c], None).unwrap()));
    }
    while out.len() < 10 {
        let m = rng.gen_range(3..8);
        let pts: Vec<Vector> = (0..m)
            .map(|k| Vector::polar(rng.gen_range(0.6..1.6), 2.0 * PI * (k as f64 + rng.gen_range(0.0..0.7)) / m as f64))
            .collect();
        if let Ok(p) = Polytope::from_vertices(&pts) {
            if let Ok(s) = Support::new(p) {
                out.push(FunctionHandle::new(s));
            }
        }
    }
    out
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let rot = RotationGrid::equally_spaced(2, 180).unwrap();
    let phis: [(&str, &dyn Functional); 2] = [("log J", &LogMass), ("-log J", &NegLogMass)];
    let mut worst = [[f64::NEG_INFINITY; 2]; 2];
    // polygon supports with slopes inside 0.9 r give equal sides; quadratics show the strict gap
    let mut worst_quadratic = [f64::NEG_INFINITY; 2];
    let mut failed = [0usize; 2];
    for (i, h) in random_test_functions(&mut rng).iter().enumerate() {
        let r = dual_domain_radius(h).unwrap().radius;
        let rho = if r.is_finite() { 0.9 * r } else { 2.0 };
        let fam = SlopeFamily::random(2, 8, 4 + i % 3, rho, 100 + i as u64).unwrap();
        // four random rotations from the grid, so the grid stays closed under composition
        let theta = RotationGrid::new(
            (0..4).map(|_| epiconv::Rotation::angle(2.0 * PI * rng.gen_range(0..180) as f64 / 180.0)).collect(),
        )
        .unwrap();
        let t = rotation_epi_mean(h, &theta).unwrap();
        for (k, (_, phi)) in phis.iter().enumerate() {
            let (a, b, c) = symmetrization_check(h, &fam, &rot, *phi, 1e-4).unwrap();
            worst[k][0] = worst[k][0].max(a.value - b.value);
            if i < 5 {
                worst_quadratic[k] = worst_quadratic[k].max(a.value - b.value);
            }
            if !c.pass {
                failed[k] += 1;
            }
            let rhs = phi_star_unfiltered(&t, &fam, &rot, *phi).unwrap().value;
            worst[k][1] = worst[k][1].max(a.value - rhs);
        }
    }
    let pass = worst.iter().flatten().all(|w| *w <= 1e-4);
    let detail = phis
        .iter()
        .enumerate()
        .map(|(k, (name, _))| {
            format!(
                "Phi = {name}: max Phi*(psi) - Phi*(psi_rot) = {:.2e} (quadratics {:.3}, {} of 10 fail), \
                 vs random Theta_4 mean {:.2e}",
                worst[k][0], worst_quadratic[k], failed[k], worst[k][1]
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { pass, detail }
}

fn criterion_9() -> Outcome {
    let budget = Budget { restarts: 16, iters: 200, seed: 9 };
    let gauss = LogConcaveHandle::new(make_function("quadratic diag=1,1").unwrap());
    let ladder = outer_mass_ladder(&gauss, 3, 8, &budget, 8.0).unwrap();
    let values: Vec<f64> = ladder.iter().map(|r| r.value).collect();
    let lower = values[1] >= 2.0 * PI;
    let mono = values.windows(2).all(|w| w[1] <= w[0]);
    let f = LogConcaveHandle::new(make_function("quadratic diag=1,4").unwrap());
    let mut ineq = Vec::new();
    let mut ok = true;
    for n in [4usize, 6] {
        let (a, b, c) = fn_inequality_check(&f, n, &budget, 8.0).unwrap();
        ok &= c.pass && c.tol <= 0.01 * PI + 1e-12;
        ineq.push(format!("F_{n}: {:.4} vs {:.4} (band {:.4})", a.value, b.value, c.tol));
    }
    Outcome {
        pass: lower && mono && ok,
        detail: format!(
            "Gaussian F_3..F_8 = {:?}, F_4 >= 2 pi: {lower}, nonincreasing: {mono}; diag=1,4: {}",
            values.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>(),
            ineq.join(", ")
        ),
    }
}

fn criterion_10() -> Outcome {
    let sq = schneider_embed(&Polytope::cube(2, -1.0, 1.0).unwrap()).unwrap();
    let rot = RotationGrid::equally_spaced(2, 720).unwrap();
    let rep = covering_minimize(&sq, &DiscreteMeasure::tri3(), &rot).unwrap();
    let mut spread: f64 = 0.0;
    for spec in ["quadratic diag=1,1", "norm-power p=3 diag=1,1"] {
        let r = covering_minimize(&make_function(spec).unwrap(), &DiscreteMeasure::tri3(), &rot).unwrap();
        let v: Vec<f64> = r.candidates.iter().map(|c| c.value).collect();
        let s = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - v.iter().cloned().fold(f64::INFINITY, f64::min);
        spread = spread.max(s);
    }
    Outcome {
        pass: rep.value <= 4.0 / PI && rep.certificate.as_ref().is_some_and(|c| c.pass) && spread < 1e-9,
        detail: format!("square min {:.6} <= 4/pi = {:.6}; radial spread {spread:.1e}", rep.value, 4.0 / PI),
    }
}

fn random_handle(rng: &mut ChaCha8Rng) -> FunctionHandle {
    match rng.gen_range(0..4) {
        0 => {
            let (a, c): (f64, f64) = (rng.gen_range(0.2..4.0), rng.gen_range(0.2..4.0));
            let b = rng.gen_range(-0.9..0.9) * (a * c).sqrt();
            let center = Vector::new2(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            FunctionHandle::new(Quadratic::new(2, &[a, b, c], Some(center)).unwrap())
        }
        1 => make_function(&format!("norm-power p={} diag={},{}", rng.gen_range(1.3..4.0), rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)))
            .unwrap(),
        2 => make_function("sqrt1p dim=2").unwrap(),
        _ => loop {
            let m = rng.gen_range(3..9);
            let pts: Vec<Vector> = (0..m).map(|_| Vector::polar(rng.gen_range(0.3..2.0), rng.gen_range(0.0..2.0 * PI))).collect();
            if let Ok(p) = Polytope::from_vertices(&pts) {
                if let Ok(s) = Support::new(p) {
                    break FunctionHandle::new(s);
                }
            }
        },
    }
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tol = 1e-9;
    let mut viol = [0usize; 4];
    let point = |rng: &mut ChaCha8Rng, r: f64| Vector::new2(rng.gen_range(-r..r), rng.gen_range(-r..r));
    for _ in 0..1000 {
        let h = random_handle(&mut rng);
        let r = dual_domain_radius(&h).unwrap().radius.min(3.0);
        let size = rng.gen_range(3..7);
        let y1 = SlopeSet::random_spanning(&mut rng, 2, size, 0.9 * r).unwrap();
        let extra = SlopeSet::random_spanning(&mut rng, 2, 3, 0.9 * r).unwrap();
        let y2 = y1.union(&extra).unwrap();
        let (q1, q2) = (outer_linearization(&h, &y1), outer_linearization(&h, &y2));
        let x = point(&mut rng, 3.0);
        let psi = h.eval_primal(&x);
        let (a, b) = (q1.eval(&x), q2.eval(&x));
        if a.value() > psi.value() + tol * (1.0 + psi.value().abs()) {
            viol[0] += 1;
        }
        if a.value() > b.value() + tol * (1.0 + b.value().abs()) {
            viol[1] += 1;
        }
        // q <= psi reverses to L q >= L psi
        let y = Vector::polar(rng.gen_range(0.0..0.9 * r), rng.gen_range(0.0..2.0 * PI));
        let (lq, lp) = (q1.conjugate(&y), h.eval_dual(&y));
        if lp.is_finite() && lq.value() < lp.value() - tol * (1.0 + lp.value().abs()) {
            viol[2] += 1;
        }
        let yy = point(&mut rng, 1.5 * r);
        let fy = psi + h.eval_dual(&yy);
        if fy.is_finite() && fy.value() < x.dot(&yy) - tol * (1.0 + x.dot(&yy).abs()) {
            viol[3] += 1;
        }
    }
    Outcome {
        pass: viol.iter().all(|v| *v == 0),
        detail: format!(
            "1000 instances each: q <= psi {}, Y1 in Y2 monotone {}, conjugation order reversal {}, Fenchel-Young {} violations",
            viol[0], viol[1], viol[2], viol[3]
        ),
    }
}

#[test]
fn acceptance() {
    let results = [
        run(1, "conjugation suite", Some(10.0), criterion_1),
        run(2, "sqrt1p closed form", None, criterion_2),
        run(3, "admissibility counterexample", Some(5.0), criterion_3),
        run(4, "symmetrization closed form", None, criterion_4),
        run(5, "geometric Urysohn", None, criterion_5),
        run(6, "epi-mean convergence", None, criterion_6),
        run(7, "stability ladder", None, criterion_7),
        run(8, "Phi* symmetrization inequality", Some(120.0), criterion_8),
        run(9, "F_N suite", Some(180.0), criterion_9),
        run(10, "covering", None, criterion_10),
        run(11, "monotonicity properties", None, criterion_11),
    ];
    let passed = results.iter().filter(|p| **p).count();
    let _ = writeln!(std::io::stdout().lock(), "acceptance: {passed}/{} criteria pass", results.len());
    assert_eq!(passed, results.len());
}
