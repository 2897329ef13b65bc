use henon_core::{in_v_plus, Dynamics, Point, Polynomial, Side};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::commands::{critlocus, holonomy, manifold, report, rigidity};
use crate::config::{ManifoldOptions, RunConfig, Suite};
use crate::report::{Check, Report};
use crate::CliError;

fn random_point(rng: &mut ChaCha8Rng, scale: f64) -> Point {
    let mut c = || Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
    Point::new(c(), c())
}

/// Largest residual of `lhs(z) ~ rhs(z)` over sampled points where both sides evaluate.
struct Residual {
    worst: f64,
    count: usize,
}

impl Residual {
    fn new() -> Self {
        Self { worst: 0.0, count: 0 }
    }

    fn add(&mut self, r: f64) {
        self.worst = self.worst.max(r);
        self.count += 1;
    }
}

fn core(cfg: &RunConfig, dy: &Dynamics, rep: &mut Report) -> Value {
    let d = dy.degree() as u32;
    let tol = cfg.tolerances.recursion;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut plus, mut green_plus, mut minus, mut green_minus) = (Residual::new(), Residual::new(), Residual::new(), Residual::new());
    let mut tries = 0;
    while plus.count < cfg.verify.samples && tries < 100 * cfg.verify.samples.max(1) {
        tries += 1;
        let z = random_point(&mut rng, 6.0);
        let w = dy.map.apply(z);
        if let (Ok(a), Ok(b)) = (dy.phi_plus(z), dy.phi_plus(w)) {
            let rhs = a.value.powu(d);
            plus.add((b.value - rhs).norm() / rhs.norm());
            let g = dy.green(z, Side::Plus).value;
            let g1 = dy.green(w, Side::Plus).value;
            green_plus.add((g1 - d as f64 * g).abs() / (1.0 + g1.abs()));
        }
    }
    if !dy.is_degenerate() {
        let log_a = dy.map.a.norm().ln();
        let mut tries = 0;
        while minus.count < cfg.verify.samples && tries < 100 * cfg.verify.samples.max(1) {
            tries += 1;
            let z = random_point(&mut rng, 6.0);
            let Ok(w) = dy.map.apply_inverse(z) else { continue };
            if let (Ok(a), Ok(b)) = (dy.phi_minus(z), dy.phi_minus(w)) {
                let rhs = dy.map.a * b.value;
                minus.add((a.value.powu(d) - rhs).norm() / rhs.norm());
                let g = dy.green(z, Side::Minus).value;
                let gb = dy.green(w, Side::Minus).value;
                green_minus.add((gb - (d as f64 * g - log_a)).abs() / (1.0 + gb.abs()));
            }
        }
    }
    let b = dy.domain.bound_b(dy.degree());
    let mut inside = 0;
    let mut worst_ratio: f64 = 1.0;
    let mut tries = 0;
    while inside < cfg.verify.samples && tries < 1000 * cfg.verify.samples.max(1) {
        tries += 1;
        let z = random_point(&mut rng, 60.0);
        if !in_v_plus(&z, &dy.domain) {
            continue;
        }
        if let Ok(v) = dy.phi_plus(z) {
            let q = (v.value / z.x).norm();
            worst_ratio = worst_ratio.max(q).max(1.0 / q);
            inside += 1;
        }
    }
    rep.check(Check::at_most("core: phi+ recursion", plus.worst, tol));
    rep.check(Check::at_most("core: g+ recursion", green_plus.worst, tol));
    rep.check(Check::at_most("core: |phi+/x| within the bound on V+", worst_ratio, b));
    if !dy.is_degenerate() {
        rep.check(Check::at_most("core: phi- extension", minus.worst, tol));
        rep.check(Check::at_most("core: g- recursion", green_minus.worst, tol));
    }
    let entry = |r: &Residual| json!({ "max_residual": r.worst, "samples": r.count });
    json!({
        "phi_plus_recursion": entry(&plus),
        "green_plus_recursion": entry(&green_plus),
        "phi_minus_extension": if dy.is_degenerate() { Value::Null } else { entry(&minus) },
        "green_minus_recursion": if dy.is_degenerate() { Value::Null } else { entry(&green_minus) },
        "bound": { "b": b, "worst_ratio": worst_ratio, "samples": inside },
    })
}

fn absorb(rep: &mut Report, suite: &str, sub: Report) -> Value {
    for mut c in sub.checks {
        c.name = format!("{suite}: {}", c.name);
        rep.check(c);
    }
    json!({ "status": sub.status })
}

fn hyperbolic_whitelist(p: &Polynomial) -> bool {
    *p == Polynomial::quadratic(0.0) || *p == Polynomial::quadratic(-1.0)
}

pub fn run(cfg: &RunConfig, dy: &Dynamics) -> Result<Report, CliError> {
    let suite = cfg.verify.suite;
    let wants = |s: Suite| suite == s || suite == Suite::All;
    let mut rep = report("verify", cfg, dy);
    let mut data = Map::new();
    if wants(Suite::Core) {
        data.insert("core".into(), core(cfg, dy, &mut rep));
    }
    if wants(Suite::Locus) {
        let mut sub = cfg.clone();
        sub.critlocus.contact_samples = 100;
        if sub.critlocus.circle_radii.is_empty() {
            sub.critlocus.circle_radii = vec![2.0, 8.0, 32.0];
        }
        let r = critlocus::run(&sub, dy)?;
        data.insert("locus".into(), absorb(&mut rep, "locus", r));
    }
    if wants(Suite::Holonomy) {
        let entry = if dy.is_degenerate() {
            json!({ "skipped": "needs a nonzero Jacobian" })
        } else {
            absorb(&mut rep, "holonomy", holonomy::run(cfg, dy)?)
        };
        data.insert("holonomy".into(), entry);
    }
    if wants(Suite::Manifolds) {
        let entry = if !hyperbolic_whitelist(&dy.map.p) {
            json!({ "skipped": "disks are built only for x2 and x2-1" })
        } else {
            let mut stable = cfg.clone();
            stable.manifold = ManifoldOptions::default();
            let s = absorb(&mut rep, "stable disk", manifold::run(&stable, dy)?);
            let mut unstable = stable.clone();
            unstable.manifold.side = henon_core::manifolds::ManifoldSide::Unstable;
            let u = absorb(&mut rep, "unstable disk", manifold::run(&unstable, dy)?);
            json!({ "stable": s, "unstable": u })
        };
        data.insert("manifolds".into(), entry);
    }
    if wants(Suite::Series) {
        let sigma = henon_series::sigma_series(3)?;
        let linear_at_zero = sigma.coeff(1).evaluate_f64(&[(henon_series::Var::A, 0.0), (henon_series::Var::C, 0.5)]);
        rep.check(Check::at_most("series: linear sigma coefficient vanishes at a = 0", linear_at_zero.abs(), 0.0));
        rep.check(Check::holds("series: sigma has no constant term", sigma.coeff(0).is_zero()));
        data.insert("series".into(), absorb(&mut rep, "series", rigidity::run(cfg)?));
    }
    rep.data = Value::Object(data);
    Ok(rep.finish())
}
