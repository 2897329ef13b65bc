use std::f64::consts::TAU;

use henon_core::manifolds::*;
use henon_core::{Dynamics, Execution, HenonMap, Point, Polynomial};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn dynamics(a: f64) -> Dynamics {
    Dynamics::new(HenonMap::real(Polynomial::quadratic(-1.0), a)).unwrap()
}

fn beta() -> Complex64 {
    c((1.0 + 5f64.sqrt()) / 2.0, 0.0)
}

/// Four points of the Julia set of `x^2 - 1`: the fixed point, its other preimage,
/// and the two preimages of that.
fn julia_points() -> Vec<Complex64> {
    let b = beta();
    let s = (1.0 - b).sqrt();
    vec![b, -b, s, -s]
}

fn v_mesh(cfg: &ManifoldConfig) -> Vec<Complex64> {
    disk_mesh(ZERO, cfg.shrink * cfg.delta, 4, 16)
}

fn u_mesh(z: Complex64, cfg: &ManifoldConfig) -> Vec<Complex64> {
    disk_mesh(z, 0.9 * cfg.u_radius, 4, 16)
}

fn iterate(dy: &Dynamics, z: Point, n: usize) -> Point {
    (0..n).fold(z, |w, _| dy.map.apply(w))
}

/// Point with `p(y) - x = v` whose `k`-th image lies on the line `x = p(p^k(z))`,
/// by 2-D Newton with a difference Jacobian, deepening `k` up to `n`.
fn pullback_oracle(dy: &Dynamics, z: Complex64, v: Complex64, n: usize) -> Point {
    let p = &dy.map.p;
    let mut q = uv_inverse(p, UVPoint { u: z, v }).unwrap();
    let mut w = z;
    for k in 1..=n {
        w = p.eval(w);
        let x_target = p.eval(w);
        let eqs = |q: Point| [p.eval(q.y) - q.x - v, iterate(dy, q, k).x - x_target];
        for _ in 0..50 {
            let e = eqs(q);
            let h = 1e-7;
            let ex = eqs(Point::new(q.x + h, q.y));
            let ey = eqs(Point::new(q.x, q.y + h));
            let j = [[(ex[0] - e[0]) / h, (ey[0] - e[0]) / h], [(ex[1] - e[1]) / h, (ey[1] - e[1]) / h]];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            let dx = (e[0] * j[1][1] - j[0][1] * e[1]) / det;
            let dyy = (j[0][0] * e[1] - j[1][0] * e[0]) / det;
            q = Point::new(q.x - dx, q.y - dyy);
            if dx.norm() + dyy.norm() < 1e-15 {
                break;
            }
        }
        let e = eqs(q);
        assert!(e[0].norm() < 1e-12 && e[1].norm() < 1e-8, "depth {k}: oracle residual {e:?}");
    }
    q
}

/// Point on the curve `x = p(y)` near the fixed point whose `k`-th image has chart
/// coordinate `u`, deepening `k` up to `n` with geometric extrapolation of the seed;
/// returns the `n`-th image.
fn pushforward_oracle(dy: &Dynamics, u: Complex64, n: usize) -> Point {
    let p = &dy.map.p;
    let wide = ManifoldConfig { delta: 1.0, ..Default::default() };
    let lambda = p.eval_derivative(beta());
    let (mut before, mut y0) = (beta(), u);
    for k in 1..=n {
        let image = |y0: Complex64| iterate(dy, Point::new(p.eval(y0), y0), k);
        let resid = |y0: Complex64| uv_coords(p, image(y0), &wide).unwrap().u - u;
        let seed = if k == 1 { beta() + (u - beta()) / lambda } else { y0 + (y0 - before) / lambda };
        before = y0;
        y0 = seed;
        let h = 1e-6 / lambda.powu(k as u32).norm();
        for _ in 0..50 {
            let r = resid(y0);
            let step = r * h / (resid(y0 + h) - r);
            y0 -= step;
            if step.norm() < 1e-17 {
                break;
            }
        }
        assert!(resid(y0).norm() < 1e-8, "depth {k}");
    }
    iterate(dy, Point::new(p.eval(y0), y0), n)
}

#[test]
fn chart_roundtrip_on_random_points() {
    let p = Polynomial::quadratic(-1.0);
    let cfg = ManifoldConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..200 {
        let y = Complex64::from_polar(rng.gen_range(0.4..1.8), rng.gen_range(0.0..TAU));
        let v = Complex64::from_polar(rng.gen_range(0.0..0.049), rng.gen_range(0.0..TAU));
        let z = Point::new(p.eval(y) - v, y);
        let uv = uv_coords(&p, z, &cfg).unwrap();
        assert!((p.eval(uv.u) - z.x).norm() < 1e-10);
        let back = uv_inverse(&p, uv).unwrap();
        assert!(back.dist(&z) < 1e-10, "{z:?} -> {back:?}");
    }
}

#[test]
fn degenerate_graphs() {
    let dy = dynamics(0.0);
    let cfg = ManifoldConfig::default();
    for z in julia_points() {
        let s = local_stable_graph(&dy, z, DEFAULT_ITERATIONS, &v_mesh(&cfg), &cfg, Execution::Parallel).unwrap();
        assert!(s.values.iter().all(|g| (g - z).norm() < 1e-10), "{z}");
        let hist = backward_history(&dy.map.p, z, 12).unwrap();
        let u = local_unstable_graph(&dy, &hist, &u_mesh(z, &cfg), &cfg, Execution::Parallel).unwrap();
        assert!(u.values.iter().all(|v| v.norm() < 1e-10), "{z}");
    }
}

#[test]
fn stable_graph_is_invariant() {
    let dy = dynamics(0.01);
    let cfg = ManifoldConfig::default();
    let p = &dy.map.p;
    let b = beta();
    let disk = local_stable_graph(&dy, b, DEFAULT_ITERATIONS, &v_mesh(&cfg), &cfg, Execution::Parallel).unwrap();
    for v in &disk.params {
        let img = dy.map.apply(disk.point_at(&dy, *v).unwrap());
        let uv = uv_coords(p, img, &cfg).unwrap();
        assert!(uv.v.norm() < cfg.shrink * cfg.delta);
        assert!((uv.u - disk.eval(uv.v)).norm() < 1e-7, "v = {v}");
    }
}

#[test]
fn unstable_graph_is_invariant() {
    let dy = dynamics(0.01);
    let cfg = ManifoldConfig::default();
    let p = &dy.map.p;
    let b = beta();
    let hist = backward_history(p, b, DEFAULT_ITERATIONS).unwrap();
    let disk = local_unstable_graph(&dy, &hist, &u_mesh(b, &cfg), &cfg, Execution::Parallel).unwrap();
    for u in &disk.params {
        let pre = dy.map.apply_inverse(disk.point_at(&dy, *u).unwrap()).unwrap();
        let uv = uv_coords(p, pre, &cfg).unwrap();
        assert!((uv.u - b).norm() < cfg.u_radius);
        assert!((uv.v - disk.eval(uv.u)).norm() < 1e-7, "u = {u}");
    }
}

#[test]
fn stable_displacement_is_order_a() {
    let cfg = ManifoldConfig::default();
    let b = beta();
    let mut ratios = Vec::new();
    for a in [1e-2, 1e-3] {
        let dy = dynamics(a);
        let p = &dy.map.p;
        let graph = stable_graph_series(&dy, b, 12, &cfg, Execution::Parallel).unwrap();
        let mut worst: f64 = 0.0;
        for v in v_mesh(&cfg) {
            let q = pullback_oracle(&dy, b, v, 12);
            let u = uv_coords(p, q, &cfg).unwrap().u;
            assert!((u - graph.eval(v)).norm() < 1e-9, "a = {a}, v = {v}");
            worst = worst.max((u - b).norm());
        }
        ratios.push(worst / a);
    }
    assert!(ratios.iter().all(|r| *r > 0.0 && *r < 10.0), "{ratios:?}");
    assert!(ratios[1] / ratios[0] < 2.0 && ratios[0] / ratios[1] < 2.0, "{ratios:?}");
}

#[test]
fn unstable_displacement_is_order_a() {
    let cfg = ManifoldConfig::default();
    let b = beta();
    let mut ratios = Vec::new();
    for a in [1e-2, 1e-3] {
        let dy = dynamics(a);
        let p = &dy.map.p;
        let hist = backward_history(p, b, 12).unwrap();
        let graph = unstable_graph_series(&dy, &hist, &cfg, Execution::Parallel).unwrap();
        let mut worst: f64 = 0.0;
        for u in u_mesh(b, &cfg) {
            let q = uv_coords(p, pushforward_oracle(&dy, u, 12), &cfg).unwrap();
            assert!((q.v - graph.eval(q.u)).norm() < 1e-9, "a = {a}, u = {u}");
            worst = worst.max(q.v.norm());
        }
        ratios.push(worst / a);
    }
    assert!(ratios.iter().all(|r| *r > 0.0 && *r < 10.0), "{ratios:?}");
    assert!(ratios[1] / ratios[0] < 2.0 && ratios[0] / ratios[1] < 2.0, "{ratios:?}");
}

#[test]
fn stable_disks_are_disjoint() {
    let dy = dynamics(0.01);
    let cfg = ManifoldConfig::default();
    let mesh = v_mesh(&cfg);
    let zs = julia_points();
    let disks: Vec<LocalManifold> = zs
        .iter()
        .map(|z| local_stable_graph(&dy, *z, DEFAULT_ITERATIONS, &mesh, &cfg, Execution::Parallel).unwrap())
        .collect();
    for i in 0..disks.len() {
        for j in 0..i {
            assert!((zs[i] - zs[j]).norm() > 2.0 * cfg.u_radius);
            let gap = disks[i]
                .values
                .iter()
                .zip(&disks[j].values)
                .map(|(a, b)| (a - b).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(gap > 0.0);
        }
    }
}

#[test]
fn graph_transform_contracts() {
    let dy = dynamics(0.01);
    let cfg = ManifoldConfig::default();
    let graphs: Vec<DiskSeries> =
        (4..=12).map(|n| stable_graph_series(&dy, beta(), n, &cfg, Execution::Parallel).unwrap()).collect();
    let gaps: Vec<f64> = graphs.windows(2).map(|w| w[1].sup_distance(&w[0])).collect();
    let mut checked = 0;
    for w in gaps.windows(2).filter(|w| w[0] > 1e-12) {
        assert!(w[1] < 0.9 * w[0], "{gaps:?}");
        checked += 1;
    }
    assert!(checked >= 3, "{gaps:?}");
}

#[test]
fn index_one_on_degenerate_disk() {
    let dy = dynamics(0.0);
    let cfg = ManifoldConfig::default();
    let disk = local_stable_graph(&dy, beta(), 4, &[ZERO], &cfg, Execution::Parallel).unwrap();
    assert_eq!(gradient_index(&dy, &disk, 0.5, Execution::Parallel).unwrap(), 1);
}

#[test]
fn index_one_around_stable_loops() {
    let dy = dynamics(0.005);
    let cfg = ManifoldConfig::default();
    for z in julia_points() {
        let disk = local_stable_graph(&dy, z, DEFAULT_ITERATIONS, &[ZERO], &cfg, Execution::Parallel).unwrap();
        for r in [0.2, 0.5] {
            assert_eq!(gradient_index(&dy, &disk, r, Execution::Parallel).unwrap(), 1, "z = {z}, r = {r}");
        }
    }
}

#[test]
fn index_with_holes_is_one_minus_degree() {
    let dy = dynamics(0.005);
    let cfg = ManifoldConfig::default();
    let report = gradient_index_with_holes(&dy, beta(), DEFAULT_ITERATIONS, 0.5, &cfg, Execution::Parallel).unwrap();
    assert_eq!(report.outer, 1);
    assert_eq!(report.holes, vec![1, 1]);
    assert_eq!(report.region, -1);
    assert_eq!(report.outer, report.holes.iter().sum::<i64>() + report.region);
}
