use std::f64::consts::TAU;

use henon_core::holonomy::{monodromy_orbit, psi_pair, same_leaf_plus};
use henon_core::locus::{distinct_critical_points, locate_on_component, PsiSolveOptions};
use henon_core::{Dynamics, Point};
use num_complex::Complex64;
use serde_json::json;

use crate::commands::{complex, output_dir, report};
use crate::config::RunConfig;
use crate::report::{Check, Report};
use crate::{execution, CliError};

pub fn run(cfg: &RunConfig, dy: &Dynamics) -> Result<Report, CliError> {
    if dy.is_degenerate() {
        return Err(CliError::Config("holonomy needs a nonzero Jacobian".into()));
    }
    let o = &cfg.holonomy;
    let tol = &cfg.tolerances;
    let c = match o.c {
        Some(c) => complex(c),
        None => distinct_critical_points(&dy.map.p)[0],
    };
    let opts = PsiSolveOptions { tol: tol.newton, ..Default::default() };
    let base = locate_on_component(dy, c, complex(o.psi), &opts)?;
    let orbit = monodromy_orbit(dy, base.point, o.depth, execution(cfg))?;
    let count = (dy.degree() as u64).pow(o.depth) as usize;
    let points: Vec<Point> = orbit.points.iter().map(|lp| lp.point).collect();

    let mut rep = report("holonomy", cfg, dy);
    rep.check(Check::equals("orbit size", points.len() as i64, count as i64));
    let mut separation = f64::INFINITY;
    for i in 0..points.len() {
        for j in 0..i {
            separation = separation.min(points[i].dist(&points[j]));
        }
    }
    if points.len() > 1 {
        rep.check(Check::at_least("smallest separation", separation, 1e-8));
    }
    let residual = orbit.points.iter().map(|lp| lp.residual).fold(0.0, f64::max);
    rep.check(Check::at_most("largest tangency residual", residual, tol.newton));

    let mut drift: f64 = 0.0;
    let mut witnesses = Vec::new();
    let mut forward = points.clone();
    for _ in 0..o.depth {
        forward = forward.iter().map(|q| dy.map.apply(*q)).collect();
    }
    let mut after_ok = true;
    for (j, q) in points.iter().enumerate() {
        let omega = Complex64::from_polar(1.0, TAU * j as f64 / count as f64);
        let plus = dy.phi_plus(*q)?.value;
        drift = drift.max((plus - omega * orbit.psi).norm() / orbit.psi.norm());
        let psi = psi_pair(dy, *q).ok();
        let here = same_leaf_plus(dy, points[0], *q, tol.root_of_unity, tol.order_cap);
        let after = same_leaf_plus(dy, forward[0], forward[j], tol.root_of_unity, tol.order_cap);
        after_ok &= after.is_some_and(|w| w.order_exponent == 0);
        if j > 0 {
            let ok = here.is_some_and(|w| (w.omega - omega).norm() < 1e-9);
            rep.check(Check::holds(format!("point {j} witness is exp(2 pi i {j}/{count})"), ok));
        }
        witnesses.push(json!({ "index": j, "omega": omega, "psi": psi, "witness": here, "after_iterates": after }));
    }
    rep.check(Check::at_most("relative psi+ drift from the rotated base value", drift, 1e-9));
    rep.check(Check::holds(format!("one leaf after {} forward iterates", o.depth), after_ok));
    rep.data = json!({ "c": c, "psi": orbit.psi, "depth": o.depth, "points": orbit.points, "witnesses": witnesses });
    if let Some(dir) = output_dir(cfg)? {
        std::fs::write(dir.join("holonomy.json"), serde_json::to_string_pretty(&rep.data)? + "\n")?;
    }
    Ok(rep.finish())
}
