//! Worked examples for each public operation, checked against closed forms
//! or brute-force references computed here.

use std::f64::consts::PI;

use epiconv::calculus::{
    ball_function, epi_distance, epi_scale, inf_convolve, minkowski_shrink, outer_parallel, EpiDistanceParams,
};
use epiconv::dsl::make_function;
use epiconv::extremal::{covering_minimize, outer_mass_approx, phi_star, urysohn_check, Budget, NegLogMass, SlopeFamily};
use epiconv::geometry::{halfspace_intersection, ray_slopes, schneider_embed, Halfspace, Polytope};
use epiconv::linearization::{
    check_admissible, origin_in_interior_hull, outer_linearization, scale_slopes, spanning_subset, support_affine,
    Verdict,
};
use epiconv::logconcave::{asplund_sum, hypo_symmetrize, total_mass, LogConcaveHandle};
use epiconv::symmetrize::{rotation_epi_mean, rotational_symmetrization};
use epiconv::transform::{
    biconjugate, conjugate_2d, discrete_conjugate, discrete_conjugate_reference, dual_domain_radius,
    fast_conjugate_1d,
};
use epiconv::{
    DiscreteMeasure, DomainDescriptor, Error, ExtReal, FunctionHandle, GridFunction, GridSpec, Rotation,
    RotationGrid, SlopeSet, Vector,
};

fn f(spec: &str) -> FunctionHandle {
    make_function(spec).unwrap()
}

fn v1(x: f64) -> Vector {
    Vector::new1(x)
}

fn v2(x: f64, y: f64) -> Vector {
    Vector::new2(x, y)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn primal(h: &FunctionHandle, x: Vector) -> f64 {
    h.eval_primal(&x).value()
}

fn dual(h: &FunctionHandle, y: Vector) -> f64 {
    h.eval_dual(&y).value()
}

fn sample_1d(lo: f64, hi: f64, k: usize, g: impl Fn(f64) -> f64 + Sync) -> GridFunction {
    GridFunction::sample(&GridSpec::cube(1, lo, hi, k).unwrap(), |x| ExtReal::new(g(x.x()))).unwrap()
}

// core

#[test]
fn primal_values_of_builtins() {
    assert_eq!(primal(&f("quadratic a=1"), v1(2.0)), 2.0);
    assert!(f("indicator box=[-1,1]").eval_primal(&v1(3.0)).is_pos_infinite());
    assert_eq!(primal(&f("sqrt1p"), v1(0.0)), 1.0);
}

#[test]
fn dual_values_of_builtins() {
    assert_eq!(dual(&f("quadratic a=1"), v1(1.0)), 0.5);
    assert_eq!(dual(&f("sqrt1p"), v1(0.0)), -1.0);
    assert_eq!(dual(&f("indicator box=[-1,1]"), v1(2.0)), 2.0);
}

#[test]
fn dsl_descriptors() {
    let q = f("quadratic diag=1,4");
    let y = v2(0.7, -1.3);
    assert!(close(dual(&q, y), (0.49 + 1.69 / 4.0) / 2.0, 1e-12));
    assert_eq!(q.dual_domain(), DomainDescriptor::FullSpace);
    assert_eq!(f("sqrt1p").dual_domain(), DomainDescriptor::Ball(1.0));
    let s = f("support box=[-1,1]^2");
    assert!(matches!(s.dual_domain(), DomainDescriptor::Polytope(_)));
    assert_eq!(dual(&s, v2(0.5, -1.0)), 0.0);
    assert!(s.eval_dual(&v2(1.01, 0.0)).is_pos_infinite());
}

#[test]
fn dsl_rejects_bad_specs() {
    assert!(matches!(make_function("quadratic matrix=1,2,1"), Err(Error::NotPositiveDefinite)));
    assert!(matches!(make_function("support box=[0.5,1]^2"), Err(Error::OriginNotInterior)));
    assert!(matches!(make_function("cubic a=1"), Err(Error::Parse(_))));
}

// transform

#[test]
fn discrete_conjugate_examples() {
    let dual = GridSpec::cube(1, -4.0, 4.0, 1025).unwrap();
    let h = 8.0 / 1024.0;
    let sq = sample_1d(-4.0, 4.0, 1025, |x| x * x);
    let c = discrete_conjugate(&sq, &dual).unwrap().grid;
    let at2 = c.interpolate(&v1(2.0)).value();
    assert!(close(at2, 1.0, 2.0 * h), "{at2}");
    let ind = sample_1d(-1.0, 1.0, 1025, |_| 0.0);
    let c = discrete_conjugate(&ind, &dual).unwrap().grid;
    for k in 0..dual.len() {
        let y = dual.point(k).x();
        assert!(close(c.get(k).value(), y.abs(), 2.0 * h));
    }
    let s = f("sqrt1p");
    let grid = s.sample_primal(&GridSpec::cube(1, -50.0, 50.0, 20001).unwrap()).unwrap();
    let c = discrete_conjugate(&grid, &GridSpec::cube(1, -0.6, 0.6, 3).unwrap()).unwrap().grid;
    assert!(close(c.get(2).value(), -0.8, 1e-3), "{}", c.get(2).value());
}

#[test]
fn improper_source_is_rejected() {
    let spec = GridSpec::cube(1, -1.0, 1.0, 5).unwrap();
    assert!(GridFunction::new(spec, vec![ExtReal::INFINITY; 5]).is_err());
}

#[test]
fn fast_conjugate_examples() {
    let xs: Vec<f64> = (0..201).map(|i| -2.0 + 0.02 * i as f64).collect();
    let samples: Vec<(f64, ExtReal)> = xs.iter().map(|&x| (x, ExtReal::new(x * x / 2.0))).collect();
    let llt = fast_conjugate_1d(&samples).unwrap();
    for i in 0..81 {
        let y = -2.0 + 0.05 * i as f64;
        let brute = samples.iter().map(|(x, v)| x * y - v.value()).fold(f64::NEG_INFINITY, f64::max);
        assert!(close(llt.eval(y).value(), brute, 1e-12));
    }
    // |x| on [-2,2]: zero on [-1,1], then slope 2 from the box edge
    let abs: Vec<(f64, ExtReal)> = xs.iter().map(|&x| (x, ExtReal::new(x.abs()))).collect();
    let llt = fast_conjugate_1d(&abs).unwrap();
    assert!(close(llt.eval(0.5).value(), 0.0, 1e-12));
    assert!(close(llt.eval(1.5).value(), 1.0, 1e-12));
    let two = [(0.0, ExtReal::new(0.0)), (1.0, ExtReal::new(1.0))];
    let llt = fast_conjugate_1d(&two).unwrap();
    for y in [-3.0, 0.0, 1.0, 2.5, 7.0] {
        assert_eq!(llt.eval(y).value(), f64::max(0.0, y - 1.0));
    }
    let bad = [(1.0, ExtReal::new(0.0)), (0.0, ExtReal::new(0.0))];
    assert!(matches!(fast_conjugate_1d(&bad), Err(Error::Unsorted)));
}

#[test]
fn conjugate_2d_examples() {
    let spec = GridSpec::cube(2, -2.0, 2.0, 129).unwrap();
    let dual = GridSpec::cube(2, -1.5, 1.5, 41).unwrap();
    let half = GridFunction::sample(&spec, |x| ExtReal::new(x.norm_sq() / 2.0)).unwrap();
    let fast = conjugate_2d(&half, &dual).unwrap().grid;
    let brute = discrete_conjugate_reference(&half, &dual).unwrap().grid;
    for k in 0..dual.len() {
        assert!(close(fast.get(k).value(), brute.get(k).value(), 1e-12));
    }
    let box_ = GridFunction::sample(&GridSpec::cube(2, -1.0, 1.0, 129).unwrap(), |_| ExtReal::new(0.0)).unwrap();
    let c = conjugate_2d(&box_, &dual).unwrap().grid;
    for k in 0..dual.len() {
        let y = dual.point(k);
        assert!(close(c.get(k).value(), y.x().abs() + y.y().abs(), 1e-12));
    }
    let q = f("quadratic diag=1,4");
    let g = q.sample_primal(&GridSpec::cube(2, -3.0, 3.0, 257).unwrap()).unwrap();
    let c = conjugate_2d(&g, &dual).unwrap().grid;
    for k in 0..dual.len() {
        let y = dual.point(k);
        let exact = (y.x() * y.x() + y.y() * y.y() / 4.0) / 2.0;
        assert!(close(c.get(k).value(), exact, 2e-3), "{y:?}");
    }
}

#[test]
fn biconjugate_examples() {
    let k = 1025;
    let h = 4.0 / (k - 1) as f64;
    let quartic = sample_1d(-2.0, 2.0, k, |x| x.powi(4));
    let b = biconjugate(&quartic).unwrap();
    let lip = 32.0;
    for i in 2..k - 2 {
        assert!(close(b.get(i).value(), quartic.get(i).value(), 2.0 * h * lip));
    }
    let well = sample_1d(-2.0, 2.0, k, |x| (x * x - 1.0).powi(2));
    let b = biconjugate(&well).unwrap();
    for i in 2..k - 2 {
        let x = well.spec().coord(0, i);
        let want = if x.abs() <= 1.0 { 0.0 } else { (x * x - 1.0).powi(2) };
        assert!(close(b.get(i).value(), want, 2.0 * h * 24.0), "{x}");
    }
    let spec = GridSpec::cube(1, -1.0, 1.0, 9).unwrap();
    let mut vals = vec![ExtReal::INFINITY; 9];
    vals[0] = ExtReal::new(0.0);
    vals[8] = ExtReal::new(0.0);
    let b = biconjugate(&GridFunction::new(spec, vals).unwrap()).unwrap();
    assert!(b.values().iter().all(|v| close(v.value(), 0.0, 1e-12)));
}

#[test]
fn dual_domain_radius_examples() {
    let r = dual_domain_radius(&f("sqrt1p")).unwrap();
    assert!(r.exact && r.radius == 1.0);
    assert!(dual_domain_radius(&f("quadratic a=1")).unwrap().radius.is_infinite());
    assert!(close(dual_domain_radius(&f("support box=[-1,1]^2")).unwrap().radius, 1.0, 1e-12));
}

// calculus

#[test]
fn inf_convolve_examples() {
    let ind = f("indicator box=[-1,1]");
    let s = inf_convolve(&ind, &ind).unwrap();
    assert!(close(dual(&s, v1(0.7)), 1.4, 1e-12));
    assert!(close(primal(&s, v1(1.9)), 0.0, 1e-3));
    assert!(s.eval_primal(&v1(2.2)).is_pos_infinite() || primal(&s, v1(2.2)) > 1.0);
    let q = f("quadratic a=1");
    let s = inf_convolve(&q, &q).unwrap();
    for x in [-2.0, -0.5, 0.0, 1.0, 3.0] {
        assert!(close(primal(&s, v1(x)), x * x / 4.0, 1e-3), "{x}");
    }
    let r = f("sqrt1p");
    let s = inf_convolve(&r, &r).unwrap();
    assert_eq!(dual(&s, v1(0.0)), -2.0);
    assert!(close(dual(&s, v1(0.6)), -1.6, 1e-12));
}

#[test]
fn epi_scale_examples() {
    let q = f("quadratic a=1");
    let s = epi_scale(2.0, &q).unwrap();
    assert!(close(primal(&s, v1(1.5)), 1.5 * 1.5 / 4.0, 1e-9));
    let id = epi_scale(1.0, &q).unwrap();
    assert_eq!(dual(&id, v1(0.3)), dual(&q, v1(0.3)));
    let half = epi_scale(0.5, &f("indicator box=[-1,1]")).unwrap();
    assert!(close(dual(&half, v1(2.0)), 1.0, 1e-12));
    assert!(epi_scale(0.0, &q).is_err());
}

#[test]
fn ball_function_examples() {
    let b = ball_function(&f("quadratic diag=1,1"), 0.5).unwrap();
    for x in [v2(0.0, 0.0), v2(1.0, 0.0), v2(-0.3, 0.4)] {
        assert!(close(primal(&b, x), 2.0 * x.norm() - 0.5, 1e-6), "{x:?}");
    }
    let s = f("sqrt1p dim=2");
    let b = ball_function(&s, 0.1).unwrap();
    assert!(close(primal(&b, v2(1.0, 1.0)), 0.9 * 2f64.sqrt() - 0.1, 1e-6));
    let b = ball_function(&s, 2.0).unwrap();
    assert!(close(dual(&b, v2(0.49, 0.0)), 2.0, 1e-12));
    assert!(b.eval_dual(&v2(0.51, 0.0)).is_pos_infinite());
}

#[test]
fn minkowski_shrink_examples() {
    assert_eq!(minkowski_shrink(&DomainDescriptor::Ball(1.0), 0.25).unwrap(), DomainDescriptor::Ball(0.75));
    let sq = DomainDescriptor::polytope(&Polytope::cube(2, -1.0, 1.0).unwrap()).unwrap();
    let shrunk = minkowski_shrink(&sq, 0.5).unwrap();
    assert!(close(shrunk.inradius(), 0.5, 1e-12));
    assert!(shrunk.region_contains(&v2(0.49, -0.49)));
    assert!(!shrunk.region_contains(&v2(0.51, 0.0)));
    assert!(minkowski_shrink(&DomainDescriptor::Ball(1.0), 1.0).is_err());
}

#[test]
fn epi_distance_examples() {
    let q = f("quadratic a=1");
    let p = EpiDistanceParams::new(1.0);
    assert_eq!(epi_distance(&q, &q, &p).unwrap(), 0.0);
    let q2 = f("quadratic a=2");
    assert!(close(epi_distance(&q, &q2, &p).unwrap(), 0.25, 1e-12));
    let d: Vec<f64> = [0.4, 0.2, 0.1].iter().map(|&r| epi_distance(&outer_parallel(&q, r).unwrap(), &q, &p).unwrap()).collect();
    for (r, di) in [0.4, 0.2, 0.1].iter().zip(&d) {
        assert!(close(*di, *r, 1e-12), "{d:?}");
    }
    assert!(epi_distance(&f("sqrt1p"), &q, &EpiDistanceParams::new(1.5)).is_err());
}

// linearization

#[test]
fn support_affine_examples() {
    let p = support_affine(&f("quadratic a=1"), &v1(1.0));
    assert_eq!(p.intercept.value(), -0.5);
    let s = f("sqrt1p");
    let p = support_affine(&s, &v1(1.0));
    assert!(p.is_proper() && p.intercept.value() == 0.0);
    assert!(!support_affine(&s, &v1(1.5)).is_proper());
}

#[test]
fn outer_linearization_examples() {
    let q = outer_linearization(&f("quadratic a=1"), &SlopeSet::new(vec![v1(-1.0), v1(1.0)]).unwrap());
    for x in [-3.0, -0.2, 0.0, 1.7] {
        assert_eq!(q.eval(&v1(x)).value(), x.abs() - 0.5);
    }
    let sq = f("support box=[-1,1]^2");
    let cube = SlopeSet::cube_vertices(2).unwrap();
    let q = outer_linearization(&sq, &cube);
    assert!(q.is_coercive() && !q.is_degenerate());
    let rot = rotational_symmetrization(&sq, 128).unwrap();
    assert!(outer_linearization(&rot, &cube).is_degenerate());
}

#[test]
fn positive_hull_examples() {
    let axes = SlopeSet::new(vec![v2(1.0, 0.0), v2(-1.0, 0.0), v2(0.0, 1.0), v2(0.0, -1.0)]).unwrap();
    assert!(origin_in_interior_hull(&axes));
    assert!(!origin_in_interior_hull(&SlopeSet::new(vec![v2(1.0, 0.0), v2(0.0, 1.0)]).unwrap()));
    let tri = SlopeSet::regular(3, 1.0, PI / 2.0).unwrap();
    assert!(origin_in_interior_hull(&tri));
}

#[test]
fn admissibility_examples() {
    let cube = SlopeSet::cube_vertices(2).unwrap();
    let v = check_admissible(&f("support box=[-1,1]^2"), &cube);
    assert_eq!((v.in_conv_c, v.inside_interior_ball), (Verdict::Yes, Verdict::No));
    let v = check_admissible(&f("quadratic diag=2,3"), &SlopeSet::regular(5, 3.0, 0.1).unwrap());
    assert_eq!((v.in_conv_c, v.inside_interior_ball), (Verdict::Yes, Verdict::Yes));
    let v = check_admissible(&f("sqrt1p dim=2"), &SlopeSet::axes(2, 0.5).unwrap());
    assert_eq!((v.in_conv_c, v.inside_interior_ball), (Verdict::Yes, Verdict::Yes));
}

#[test]
fn spanning_subset_examples() {
    let y = SlopeSet::new(vec![v2(1.0, 0.0), v2(-1.0, 0.0), v2(0.0, 1.0), v2(0.0, -1.0), v2(1.0, 1.0)]).unwrap();
    let idx = spanning_subset(&y).unwrap();
    assert!(idx.len() <= 4);
    assert!(origin_in_interior_hull(&y.subset(&idx).unwrap()));
    let y = SlopeSet::new(vec![v1(-1.0), v1(2.0), v1(5.0)]).unwrap();
    assert_eq!(spanning_subset(&y).unwrap(), vec![0, 1]);
    let tri = SlopeSet::regular(3, 1.0, 0.0).unwrap();
    let mut idx = spanning_subset(&tri).unwrap();
    idx.sort_unstable();
    assert_eq!(idx, vec![0, 1, 2]);
    assert!(spanning_subset(&SlopeSet::new(vec![v2(1.0, 0.0), v2(0.0, 1.0)]).unwrap()).is_err());
}

#[test]
fn scale_slopes_examples() {
    let cube = SlopeSet::cube_vertices(2).unwrap();
    let half = scale_slopes(&cube, 0.5).unwrap();
    assert!(half.points().iter().all(|p| p.x().abs() == 0.5 && p.y().abs() == 0.5));
    let sq = f("support box=[-1,1]^2");
    let t = scale_slopes(&cube, 0.99).unwrap();
    assert!(t.points().iter().all(|p| sq.eval_dual(p).is_finite()));
    assert!(check_admissible(&sq, &t).in_conv_c.is_yes());
    assert!(scale_slopes(&cube, 1.0).is_err());
    // q_{ψ,tY} → q_{ψ,Y}: the dual gap on a ball shrinks as t → 1
    let q = f("quadratic diag=1,2");
    let y = SlopeSet::regular(6, 1.0, 0.2).unwrap();
    let base = outer_linearization(&q, &y).into_handle().unwrap();
    let p = EpiDistanceParams::new(0.3);
    let d: Vec<f64> = [0.9, 0.99, 0.999]
        .iter()
        .map(|&t| {
            let qt = outer_linearization(&q, &scale_slopes(&y, t).unwrap()).into_handle().unwrap();
            epi_distance(&qt, &base, &p).unwrap()
        })
        .collect();
    assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
}

// symmetrize

#[test]
fn rotation_epi_mean_examples() {
    let q = f("quadratic diag=1,4");
    let id = rotation_epi_mean(&q, &RotationGrid::identity(2)).unwrap();
    assert_eq!(dual(&id, v2(0.3, 0.8)), dual(&q, v2(0.3, 0.8)));
    let shifted = f("quadratic a=2 center=1");
    let t = rotation_epi_mean(&shifted, &RotationGrid::reflections()).unwrap();
    for y in [-2.0, 0.5, 3.0] {
        assert!(close(dual(&t, v1(y)), y * y / 4.0, 1e-12));
    }
    let octa = RotationGrid::new(vec![Rotation::Angle(0.0), Rotation::Angle(PI / 4.0)]).unwrap();
    let t = rotation_epi_mean(&f("support box=[-1,1]^2"), &octa).unwrap();
    assert_eq!(dual(&t, v2(0.9, 0.0)), 0.0);
    assert!(t.eval_dual(&v2(0.75, 0.75)).is_pos_infinite());
    assert!(RotationGrid::new(vec![]).is_err());
}

#[test]
fn rotational_symmetrization_examples() {
    let radial = f("quadratic diag=1,1");
    let r = rotational_symmetrization(&radial, 128).unwrap();
    assert!(close(dual(&r, v2(0.6, -1.1)), dual(&radial, v2(0.6, -1.1)), 1e-12));
    let q = rotational_symmetrization(&f("quadratic diag=1,4"), 256).unwrap();
    let y = v2(1.2, -0.5);
    assert!(close(dual(&q, y), 5.0 / 16.0 * y.norm_sq(), 1e-9));
    assert!(close(primal(&q, v2(0.5, 0.5)), 0.8 * 0.5, 1e-3));
    let sq = rotational_symmetrization(&f("support box=[-1,1]^2"), 128).unwrap();
    assert!(close(dual(&sq, v2(0.6, 0.6)), 0.0, 1e-12));
    assert!(sq.eval_dual(&v2(0.75, 0.75)).is_pos_infinite());
    assert!(rotational_symmetrization(&radial, 4).is_err());
}

// logconcave

#[test]
fn asplund_sum_examples() {
    let g = LogConcaveHandle::new(f("quadratic a=1"));
    let s = asplund_sum(&g, &g, 1.0, 1.0).unwrap();
    assert!(close(s.eval(&v1(1.2)), (-1.44f64 / 4.0).exp(), 1e-3));
    let chi = LogConcaveHandle::new(f("indicator box=[-1,1]"));
    let s = asplund_sum(&chi, &chi, 1.0, 1.0).unwrap();
    assert!(close(s.eval(&v1(1.9)), 1.0, 1e-3));
    assert!(s.eval(&v1(2.2)) < 1e-3);
}

#[test]
fn total_mass_examples() {
    let quad = GridSpec::cube(2, -10.0, 10.0, 801).unwrap();
    let g = LogConcaveHandle::new(f("quadratic diag=1,1"));
    assert!(close(total_mass(&g, &quad).unwrap().value, 2.0 * PI, 1e-4));
    let e = LogConcaveHandle::new(f("quadratic diag=1,4"));
    assert!(close(total_mass(&e, &quad).unwrap().value, PI, 1e-4));
    let chi = LogConcaveHandle::new(f("indicator box=[-1,1]^2"));
    // cell edges on the square's boundary make the midpoint rule exact
    let aligned = GridSpec::cube(2, -2.0, 2.0, 401).unwrap();
    assert!(close(total_mass(&chi, &aligned).unwrap().value, 4.0, 1e-6));
    assert!(close(chi.mass().unwrap().value, 4.0, 0.01));
    let small = GridSpec::cube(2, -1.0, 1.0, 101).unwrap();
    assert!(matches!(total_mass(&g, &small), Err(Error::BoxTooSmall { .. })));
}

#[test]
fn hypo_symmetrize_examples() {
    let g = LogConcaveHandle::new(f("quadratic diag=1,1"));
    let r = hypo_symmetrize(&g).unwrap();
    assert!(close(r.eval(&v2(0.7, 0.2)), g.eval(&v2(0.7, 0.2)), 1e-6));
    let e = hypo_symmetrize(&LogConcaveHandle::new(f("quadratic diag=1,4"))).unwrap();
    assert!(close(e.mass().unwrap().value, 1.25 * PI, 1e-3 * 1.25 * PI));
    let sq = hypo_symmetrize(&LogConcaveHandle::new(f("indicator box=[-1,1]^2"))).unwrap();
    let rad = 4.0 / PI;
    assert!(close(sq.eval(&v2(0.0, 0.99 * rad)), 1.0, 1e-3));
    assert!(sq.eval(&v2(1.01 * rad, 0.0)) < 1e-3);
}

// extremal

#[test]
fn phi_star_radial_dense_family() {
    let h = f("quadratic diag=1,1");
    let dense = SlopeSet::ball_grid(2, 6.0, 41).unwrap();
    let fam = SlopeFamily::new(vec![dense], "ball grid").unwrap();
    let rep = phi_star(&h, &fam, &RotationGrid::identity(2), &NegLogMass).unwrap();
    let want = -(2.0 * PI).ln();
    assert!(rep.value < want && rep.value > want - 0.05, "{}", rep.value);
}

#[test]
fn outer_mass_gaussian_three_slopes() {
    let g = LogConcaveHandle::new(f("quadratic diag=1,1"));
    let rep = outer_mass_approx(&g, 3, &Budget { restarts: 4, iters: 100, seed: 1 }, 8.0).unwrap();
    assert!(rep.value > 2.0 * PI);
    // slopes of the optimum are near equilateral
    let mut ang: Vec<f64> = rep.argmin_set.as_ref().unwrap().iter().map(|p| p.angle()).collect();
    ang.sort_by(f64::total_cmp);
    let gaps = [ang[1] - ang[0], ang[2] - ang[1], 2.0 * PI - ang[2] + ang[0]];
    assert!(gaps.iter().all(|g| close(*g, 2.0 * PI / 3.0, 0.05)), "{gaps:?}");
    assert!(outer_mass_approx(&g, 2, &Budget::default(), 8.0).is_err());
}

#[test]
fn urysohn_examples() {
    let r = urysohn_check(&LogConcaveHandle::new(f("quadratic diag=1,4"))).unwrap();
    assert!(close(r.mass, PI, 1e-3 * PI) && close(r.mass_rot, 1.25 * PI, 1e-3 * 1.25 * PI));
    assert!(r.certificate.pass);
    let r = urysohn_check(&LogConcaveHandle::new(f("quadratic diag=2,2"))).unwrap();
    assert!(r.certificate.pass && close(r.mass, r.mass_rot, r.certificate.tol), "{} {}", r.mass, r.mass_rot);
    let r = urysohn_check(&LogConcaveHandle::new(f("indicator box=[-1,1]^2"))).unwrap();
    assert!(r.certificate.pass && r.mass_rot > 5.0);
}

#[test]
fn covering_examples() {
    let h = f("indicator box=[-1,1]^2");
    let rot = RotationGrid::equally_spaced(2, 720).unwrap();
    let rep = covering_minimize(&h, &DiscreteMeasure::tri3(), &rot).unwrap();
    assert!(rep.value <= 4.0 / PI && rep.certificate.as_ref().unwrap().pass);
    let disk = f("indicator regular=64");
    let rep = covering_minimize(&disk, &DiscreteMeasure::tri3(), &RotationGrid::equally_spaced(2, 90).unwrap()).unwrap();
    let vals: Vec<f64> = rep.candidates.iter().map(|c| c.value).collect();
    let spread = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - vals.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread < 0.01, "{spread}");
    let origin = DiscreteMeasure::new(vec![(v2(0.0, 0.0), 1.0)]).unwrap();
    let q = f("quadratic diag=1,4");
    let rep = covering_minimize(&q, &origin, &RotationGrid::equally_spaced(2, 16).unwrap()).unwrap();
    assert!(rep.candidates.iter().all(|c| c.value == dual(&q, v2(0.0, 0.0))));
    assert!(covering_minimize(&f("sqrt1p dim=2"), &DiscreteMeasure::tri3(), &rot).is_err());
}

// geometry

#[test]
fn support_value_examples() {
    let sq = Polytope::cube(2, -1.0, 1.0).unwrap();
    assert_eq!(sq.support_value(&v2(1.0, 0.0)), 1.0);
    assert!(close(sq.support_value(&v2(1.0, 1.0).normalized()), 2f64.sqrt(), 1e-15));
    assert_eq!(Polytope::segment(-1.0, 1.0).unwrap().support_value(&v1(-1.0)), 1.0);
}

#[test]
fn mean_width_examples() {
    let disk = Polytope::regular(64, 1.0).unwrap();
    assert!(close(disk.mean_width().unwrap(), 2.0, 0.004));
    let sq = Polytope::cube(2, -1.0, 1.0).unwrap();
    assert!(close(sq.mean_width().unwrap(), 8.0 / PI, 1e-12));
    let wq = sq.mean_width_quadrature(2048).unwrap();
    assert!(close(wq, 8.0 / PI, 1e-5), "{wq}");
    assert!(Polytope::segment(-1.0, 1.0).unwrap().mean_width().is_err());
    assert!(Polytope::from_vertices(&[v2(-1.0, 0.0), v2(1.0, 0.0)]).is_err());
}

#[test]
fn halfspace_intersection_examples() {
    let disk = Polytope::regular(64, 1.0).unwrap();
    let axes = [v2(1.0, 0.0), v2(-1.0, 0.0), v2(0.0, 1.0), v2(0.0, -1.0)];
    let p = halfspace_intersection(&disk, &axes).unwrap();
    assert!(close(p.area(), 4.0, 1e-9));
    assert!(disk.vertices().iter().all(|v| p.contains(v, 1e-9)));
    let sq = Polytope::cube(2, -1.0, 1.0).unwrap();
    let normals: Vec<Vector> = sq.facets().iter().map(|h: &Halfspace| h.normal).collect();
    assert!(close(halfspace_intersection(&sq, &normals).unwrap().area(), 4.0, 1e-12));
    assert!(halfspace_intersection(&sq, &[v2(1.0, 0.0), v2(0.0, 1.0)]).is_err());
}

#[test]
fn schneider_embed_examples() {
    let sq = Polytope::cube(2, -1.0, 1.0).unwrap();
    let h = schneider_embed(&sq).unwrap();
    for y in [v2(0.3, -2.0), v2(-1.5, 0.25)] {
        assert_eq!(dual(&h, y), y.x().abs() + y.y().abs());
    }
    assert!(close(sq.rot_radius().unwrap(), 4.0 / PI, 1e-12));
    assert!(matches!(schneider_embed(&Polytope::cube(2, 1.0, 2.0).unwrap()), Err(Error::OriginNotInterior)));
    // rays over U = {±e1, ±e2} give 𝟙 of the circumscribed square, up to the λ cap
    let disk = Polytope::regular(64, 1.0).unwrap();
    let h = schneider_embed(&disk).unwrap();
    let axes = [v2(1.0, 0.0), v2(-1.0, 0.0), v2(0.0, 1.0), v2(0.0, -1.0)];
    let y = SlopeSet::dedup(ray_slopes(&axes, 200.0, 400)).unwrap();
    let q = outer_linearization(&h, &y);
    assert_eq!(q.eval(&v2(0.9, -0.95)).value(), 0.0);
    assert!(q.eval(&v2(1.05, 0.0)).value() >= 9.0);
}
