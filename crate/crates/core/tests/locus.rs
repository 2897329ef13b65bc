use henon_core::locus::*;
use henon_core::{Dynamics, HenonMap, Point, Polynomial};
use henon_series::{locus_series, MultiPoly, SymbolicPoly, Var};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn dynamics(cst: f64, a: f64) -> Dynamics {
    Dynamics::new(HenonMap::real(Polynomial::quadratic(cst), a)).unwrap()
}

const ORIGIN: Complex64 = Complex64::new(0.0, 0.0);

/// Real-slice roots of the tangency in `[lo, hi]` on the vertical line over real `x`:
/// dense scan for sign changes of the real part, then bisection.
fn scan_roots(dy: &Dynamics, x: f64, lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let f = |y: f64| dy.tangency_value(Point::real(x, y)).ok().map(|t| t.value);
    let n = ((hi - lo) / step).round() as usize;
    let ys: Vec<f64> = (0..=n).map(|k| lo + k as f64 * step).collect();
    let vals: Vec<Option<Complex64>> = ys.iter().map(|y| f(*y)).collect();
    let mut roots = Vec::new();
    for k in 0..n {
        let (Some(va), Some(vb)) = (vals[k], vals[k + 1]) else { continue };
        if va.re.signum() == vb.re.signum() {
            continue;
        }
        let (mut a, mut b, mut fa) = (ys[k], ys[k + 1], va.re);
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            let Some(fm) = f(m) else { break };
            if fm.re.signum() == fa.signum() {
                a = m;
                fa = fm.re;
            } else {
                b = m;
            }
        }
        let m = 0.5 * (a + b);
        if f(m).is_some_and(|v| v.norm() < 1e-8) {
            roots.push(m);
        }
    }
    roots
}

#[test]
fn degenerate_locus_is_horizontal_axis() {
    let dy = dynamics(0.0, 0.0);
    assert!(dy.tangency_value(Point::real(5.0, 0.0)).unwrap().value.norm() < 1e-15);
    assert!(dy.tangency_value(Point::new(c(0.0, 10.0), ORIGIN)).unwrap().value.norm() < 1e-15);
    assert!(dy.tangency_value(Point::real(5.0, 1.0)).unwrap().value.norm() > 0.1);
    let cfg = TraceConfig { x_min: 5.0, ..Default::default() };
    let tr = trace_primary_component(&dy, ORIGIN, &cfg).unwrap();
    assert!(tr.samples.iter().all(|s| s.point.y.norm() == 0.0));
    let t = tangent_at_infinity(&dy, ORIGIN).unwrap();
    assert!(t.slope.norm() < 1e-12);
}

#[test]
fn unique_zero_at_twenty_agrees_with_scan() {
    let dy = dynamics(-1.0, 0.01);
    let lp = solve_on_vertical(&dy, c(20.0, 0.0), ORIGIN, &NewtonOptions::default()).unwrap();
    assert!(lp.point.y.norm() < 0.1);
    let roots = scan_roots(&dy, 20.0, -0.5, 0.5, 1e-4);
    let near: Vec<f64> = roots.iter().copied().filter(|y| y.abs() < 0.1).collect();
    assert_eq!(near.len(), 1);
    assert!((near[0] - lp.point.y.re).abs() < 1e-6);
}

#[test]
fn trace_agrees_with_scan_at_twenty_stations() {
    let dy = dynamics(-1.0, 0.01);
    let tr = trace_primary_component(&dy, ORIGIN, &TraceConfig::default()).unwrap();
    assert!(tr.asymptote_ok);
    assert!(tr.max_offset() <= 0.05);
    let stride = tr.samples.len() / 20;
    for s in tr.samples.iter().step_by(stride).take(20) {
        let x = s.point.x.re;
        let roots = scan_roots(&dy, x, -0.5, 0.5, 1e-3);
        let nearest = roots.iter().map(|y| (y - s.point.y.re).abs()).fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-6, "x = {x}: trace {} scan {roots:?}", s.point.y.re);
    }
}

#[test]
fn trace_invariants() {
    let dy = dynamics(-1.0, 0.01);
    let cfg = TraceConfig::default();
    let tr = trace_primary_component(&dy, ORIGIN, &cfg).unwrap();
    assert!(tr.samples.windows(2).all(|w| (w[1].point.x.norm() / w[0].point.x.norm()).ln() < 2.0 * cfg.step));
    assert!(tr.samples.iter().all(|s| s.residual < cfg.newton.tol));
    assert!(tr.samples.iter().all(|s| (s.point.y - tr.label.c).norm() < tr.tube_radius));
    let min_slope = tr.samples.iter().map(|s| s.slope_in_y).fold(f64::INFINITY, f64::min);
    assert!(min_slope > 0.1, "{min_slope}");
    let decade: Vec<f64> = tr
        .samples
        .iter()
        .filter(|s| s.point.x.norm() >= cfg.x_max / 10.0)
        .map(|s| s.point.y.norm())
        .collect();
    assert!(decade.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn trace_is_invariant_under_the_map() {
    let dy = dynamics(-1.0, 0.01);
    let tol = NewtonOptions::default().tol;
    let tr = trace_primary_component(&dy, ORIGIN, &TraceConfig::default()).unwrap();
    let mut checked = 0;
    for s in tr.samples.iter().filter(|s| s.point.x.norm() < 90.0) {
        let back = dy.map.apply_inverse(s.point).unwrap();
        assert!(dy.tangency_value(back).unwrap().value.norm() < 10.0 * tol, "{back:?}");
        // The image sits where the value is steep in x; measure its distance to the zero set.
        let w = dy.map.apply(s.point);
        let v = dy.tangency_value(w).unwrap().value;
        let h = 1e-9 * w.x.norm();
        let vx = dy.tangency_value(Point::new(w.x + h, w.y)).unwrap().value;
        let offset = v.norm() / ((vx - v).norm() / h);
        assert!(offset < 10.0 * tol * w.x.norm(), "{w:?}: offset {offset:e}");
        checked += 1;
    }
    assert!(checked > 10);
}

#[test]
fn deepening_keeps_normalized_value() {
    let dy = dynamics(-1.0, 0.01);
    for (x, y) in [(20.0, 0.3), (50.0, -0.2), (12.0, 0.0001), (-30.0, 1.0)] {
        let z = Point::real(x, y);
        let base = dy.tangency_value(z).unwrap();
        let deep = dy.tangency_at(z, base.n + 1, base.m + 1).unwrap();
        assert!((deep.value - base.value).norm() < 1e-6);
    }
}

#[test]
fn tangent_slope_matches_series() {
    let dy = dynamics(-1.0, 0.01);
    let t = tangent_at_infinity(&dy, ORIGIN).unwrap();
    let y = locus_series(&SymbolicPoly::quadratic(), &MultiPoly::zero(), 3).unwrap();
    let expect = y.coeff(1).evaluate_f64(&[(Var::A, 0.01), (Var::C, -1.0)]);
    assert!((t.slope - c(expect, 0.0)).norm() < 1e-5, "{} vs {expect}", t.slope);
    assert!((dy.map.p.eval_derivative(t.c)).norm() < 1e-12);
}

#[test]
fn contact_orders() {
    let sq = dynamics(0.0, 0.0);
    assert_eq!(contact_order(&sq, Point::real(5.0, 0.0), 1e-10).unwrap(), 2);
    let dy = dynamics(-1.0, 0.01);
    assert_eq!(contact_order(&dy, Point::real(20.0, 0.3), 1e-10).unwrap(), 1);
    let tr = trace_primary_component(&dy, ORIGIN, &TraceConfig::default()).unwrap();
    for s in tr.samples.iter().take(100) {
        assert_eq!(contact_order(&dy, s.point, 1e-10).unwrap(), 2, "{:?}", s.point);
    }
}

#[test]
fn psi_plus_is_injective_on_circles() {
    let dy = dynamics(-1.0, 0.01);
    let report = verify_biholomorphism(&dy, ORIGIN, &[2.0, 8.0, 32.0], 256).unwrap();
    for circle in &report.circles {
        assert_eq!(circle.winding, 1);
        assert!(circle.closure < 1e-8);
        assert!(circle.min_separation > 0.0);
    }
    assert!(report.passed(2, 1e-8));
    let sq = verify_biholomorphism(&dynamics(0.0, 0.0), ORIGIN, &[4.0], 64).unwrap();
    assert_eq!(sq.circles[0].winding, 1);
}

#[test]
fn classification_examples() {
    let dy = dynamics(-1.0, 0.01);
    let opts = ClassifyOptions::default();
    let w = solve_on_vertical(&dy, c(30.0, 0.0), ORIGIN, &NewtonOptions::default()).unwrap().point;
    assert_eq!(classify_component(&dy, w, 8, &opts).unwrap().k, 0);
    let z = dy.map.apply_inverse(w).unwrap();
    let label = classify_component(&dy, z, 8, &opts).unwrap();
    assert_eq!(label.k, 1);
    assert!(label.c.norm() < 1e-12);
}

#[test]
fn scanned_locus_points_are_classified() {
    let dy = dynamics(-1.0, 0.01);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut found = 0;
    let mut tries = 0;
    while found < 50 {
        tries += 1;
        assert!(tries < 500, "scan found only {found} points");
        let x: f64 = rng.gen_range(-40.0..40.0);
        let roots = scan_roots(&dy, x, -40.0, 40.0, 0.1);
        if roots.is_empty() {
            continue;
        }
        let y = roots[rng.gen_range(0..roots.len())];
        let label = classify_component(&dy, Point::real(x, y), 8, &ClassifyOptions::default());
        let label = label.unwrap_or_else(|e| panic!("({x}, {y}): {e}"));
        assert!(label.k.abs() <= 8);
        found += 1;
    }
}
