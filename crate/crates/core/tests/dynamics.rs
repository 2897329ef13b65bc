use std::f64::consts::TAU;

use henon_core::{domain_params, in_v_minus, in_v_plus, HenonError, HenonMap, Point, Polynomial};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_point(rng: &mut ChaCha8Rng, scale: f64) -> Point {
    Point::new(
        c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)),
        c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)),
    )
}

/// Threshold by direct scan of `|y|` in `[1, 50]` at step `1e-3`, checking both
/// inequalities on a circle of sample points at every radius above the answer.
fn alpha_by_scan(p: &Polynomial, r: f64, big_r: f64) -> f64 {
    let d = p.degree() as i32;
    let ok = |t: f64| {
        (0..64).all(|k| {
            let y = Complex64::from_polar(t, k as f64 * TAU / 64.0);
            let lhs = (p.eval(y) - y.powi(d)).norm() / t.powi(d) + (big_r + 1.0) / t.powi(d - 1);
            lhs < r && p.eval(y).norm() > (2.0 * big_r + 1.0) * t
        })
    };
    let grid: Vec<f64> = (1000..=50_000).map(|k| k as f64 * 1e-3).collect();
    let mut answer = f64::NAN;
    for t in grid.iter().rev() {
        if ok(*t) {
            answer = *t;
        } else {
            break;
        }
    }
    answer
}

#[test]
fn iterate_examples() {
    let sq = HenonMap::real(Polynomial::quadratic(0.0), 0.0);
    assert_eq!(sq.iterate(Point::real(2.0, 1.0), 0).unwrap(), Point::real(2.0, 1.0));
    assert_eq!(sq.iterate(Point::real(2.0, 1.0), 3).unwrap(), Point::real(256.0, 16.0));
    assert!(matches!(sq.iterate(Point::real(2.0, 1.0), -1), Err(HenonError::DegenerateJacobian)));
    let f = HenonMap::real(Polynomial::quadratic(-1.0), 0.5);
    assert_eq!(f.apply(Point::real(2.0, 1.0)), Point::real(2.5, 2.0));
    assert_eq!(f.apply_inverse(Point::real(2.5, 2.0)).unwrap(), Point::real(2.0, 1.0));
}

#[test]
fn composition_law_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = HenonMap::new(Polynomial::quadratic(-1.0), c(0.3, 0.1));
    let mut checked = 0;
    for _ in 0..100 {
        let z = random_point(&mut rng, 1.5);
        let m = rng.gen_range(-3i64..=3);
        let n = rng.gen_range(-3i64..=3);
        let (Ok(lhs), Ok(mid)) = (f.iterate(z, m + n), f.iterate(z, m)) else { continue };
        let Ok(rhs) = f.iterate(mid, n) else { continue };
        let scale = 1.0 + lhs.norm();
        assert!(lhs.dist(&rhs) / scale < 1e-9, "{z:?} m={m} n={n}");
        checked += 1;
    }
    assert!(checked > 80);
}

#[test]
fn alpha_matches_scan() {
    let sq = Polynomial::quadratic(0.0);
    let dp = domain_params(&sq, 0.5, 0.125).unwrap();
    let scan = alpha_by_scan(&sq, 0.5, 0.125);
    assert!((scan - 2.251).abs() < 1e-9);
    assert!((dp.alpha - 1.05 * scan).abs() < 1.05e-3);
    assert!((dp.alpha - 2.3625).abs() < 3e-3);

    let shifted = Polynomial::quadratic(0.3);
    let loose = domain_params(&shifted, 0.9, 0.01).unwrap();
    let scan_loose = alpha_by_scan(&shifted, 0.9, 0.01);
    assert!((loose.alpha - 1.05 * scan_loose).abs() < 1.05e-3);
    assert!(loose.alpha < domain_params(&shifted, 0.5, 0.125).unwrap().alpha);
}

#[test]
fn alpha_satisfies_growth_on_its_circle() {
    for p in [Polynomial::quadratic(0.0), Polynomial::quadratic(-1.0), "x3-3x".parse().unwrap()] {
        let dp = domain_params(&p, 0.5, 0.125).unwrap();
        for k in 0..256 {
            let y = Complex64::from_polar(dp.alpha, k as f64 * TAU / 256.0);
            assert!(p.eval(y).norm() > (2.0 * dp.big_r + 1.0) * dp.alpha, "{p}");
        }
    }
}

#[test]
fn membership_examples() {
    let dp = domain_params(&Polynomial::quadratic(0.0), 0.5, 0.125).unwrap();
    assert!(in_v_plus(&Point::real(10.0, 1.0), &dp) && !in_v_minus(&Point::real(10.0, 1.0), &dp));
    assert!(in_v_minus(&Point::real(1.0, 10.0), &dp));
    assert!(!in_v_plus(&Point::real(1.0, 1.0), &dp) && !in_v_minus(&Point::real(1.0, 1.0), &dp));
}

#[test]
fn v_plus_forward_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for p in [Polynomial::quadratic(0.0), Polynomial::quadratic(-1.0)] {
        let dp = domain_params(&p, 0.5, 0.125).unwrap();
        let mut seen = 0;
        while seen < 1000 {
            let z = random_point(&mut rng, 40.0);
            if !in_v_plus(&z, &dp) {
                continue;
            }
            let a = Complex64::from_polar(rng.gen_range(0.0..0.124), rng.gen_range(0.0..TAU));
            let w = HenonMap::new(p.clone(), a).apply(z);
            assert!(in_v_plus(&w, &dp));
            assert!(w.x.norm() > (dp.big_r + 1.0) * z.x.norm());
            seen += 1;
        }
    }
}

#[test]
fn v_minus_backward_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for p in [Polynomial::quadratic(0.0), Polynomial::quadratic(-1.0)] {
        let dp = domain_params(&p, 0.5, 0.125).unwrap();
        let mut seen = 0;
        while seen < 1000 {
            let z = random_point(&mut rng, 40.0);
            if !in_v_minus(&z, &dp) {
                continue;
            }
            let a = Complex64::from_polar(rng.gen_range(0.001..0.124), rng.gen_range(0.0..TAU));
            let w = HenonMap::new(p.clone(), a).apply_inverse(z).unwrap();
            assert!(in_v_minus(&w, &dp));
            assert!(w.y.norm() > 2.0 * z.y.norm());
            seen += 1;
        }
    }
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #[test]
    fn jacobian_determinant_is_a(x in complex(), y in complex(), a in complex(), cst in -2.0..2.0f64) {
        let f = HenonMap::new(Polynomial::quadratic(cst), a * 0.1);
        let h = 1e-6;
        let diff = |dz: Point| {
            let p = f.apply(Point::new(x + dz.x, y + dz.y));
            let m = f.apply(Point::new(x - dz.x, y - dz.y));
            ((p.x - m.x) / (2.0 * h), (p.y - m.y) / (2.0 * h))
        };
        let (fxx, fyx) = diff(Point::real(h, 0.0));
        let (fxy, fyy) = diff(Point::real(0.0, h));
        let det = fxx * fyy - fxy * fyx;
        prop_assert!((det - f.a).norm() <= 1e-6 * (1.0 + f.a.norm()));
    }

    #[test]
    fn inverse_roundtrip(x in complex(), y in complex()) {
        let f = HenonMap::real(Polynomial::quadratic(-1.0), 0.5);
        let z = Point::new(x, y);
        let back = f.apply_inverse(f.apply(z)).unwrap();
        prop_assert!(back.dist(&z) < 1e-12 * (1.0 + z.norm()));
    }

    #[test]
    fn polynomial_text_roundtrip(c0 in -5i32..5, c1 in -5i32..5, deg in 2usize..5) {
        let mut lower = vec![0.0; deg];
        lower[0] = c0 as f64;
        lower[1] = c1 as f64;
        let p = Polynomial::from_real(&lower).unwrap();
        let back: Polynomial = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }
}
