use henon_core::locus::{
    contact_order, distinct_critical_points, trace_primary_component, verify_biholomorphism, NewtonOptions, TraceConfig,
};
use henon_core::Dynamics;
use serde_json::json;

use crate::commands::{complex, output_dir, report};
use crate::config::RunConfig;
use crate::report::{Check, Report};
use crate::CliError;

pub fn run(cfg: &RunConfig, dy: &Dynamics) -> Result<Report, CliError> {
    let o = &cfg.critlocus;
    let cps = match o.c {
        Some(c) => vec![complex(c)],
        None => distinct_critical_points(&dy.map.p),
    };
    let trace_cfg = TraceConfig {
        x_min: o.x_min,
        x_max: o.x_max,
        step: o.step,
        angle: o.angle,
        tube_radius: None,
        newton: NewtonOptions { tol: cfg.tolerances.newton, ..Default::default() },
    };
    let mut rep = report("critlocus", cfg, dy);
    let mut components = Vec::new();
    let dir = output_dir(cfg)?;
    for (i, c) in cps.iter().enumerate() {
        let tr = trace_primary_component(dy, *c, &trace_cfg)?;
        let tag = format!("H[{i}]");
        rep.check(Check::at_most(format!("{tag} stays in its tube"), tr.max_offset(), tr.tube_radius));
        rep.check(Check::holds(format!("{tag} offset nonincreasing over the outer decade"), tr.asymptote_ok));
        let worst = tr.samples.iter().map(|s| s.residual).fold(0.0, f64::max);
        rep.check(Check::at_most(format!("{tag} largest residual"), worst, cfg.tolerances.newton));
        if o.contact_samples > 0 {
            let mut order = 2;
            for s in tr.samples.iter().take(o.contact_samples) {
                let k = contact_order(dy, s.point, 1e-10)?;
                if k != 2 {
                    order = k;
                    break;
                }
            }
            rep.check(Check::equals(format!("{tag} contact order"), order as i64, 2));
        }
        let circles = if o.circle_radii.is_empty() {
            None
        } else {
            let b = verify_biholomorphism(dy, *c, &o.circle_radii, o.circle_samples)?;
            for circle in &b.circles {
                let name = format!("{tag} psi+ circle rho={}", circle.rho);
                rep.check(Check::equals(format!("{name} winding"), circle.winding, 1));
                rep.check(Check::at_most(format!("{name} closure"), circle.closure, cfg.tolerances.loop_closure));
            }
            Some(b)
        };
        if let Some(dir) = &dir {
            std::fs::write(dir.join(format!("critlocus_{i}.csv")), tr.to_csv())?;
        }
        components.push(json!({ "c": c, "trace": tr, "biholomorphism": circles }));
    }
    rep.data = json!({ "components": components });
    if let Some(dir) = &dir {
        std::fs::write(dir.join("critlocus.json"), serde_json::to_string_pretty(&rep.data)? + "\n")?;
    }
    Ok(rep.finish())
}
