use henon_core::manifolds::{
    backward_history, disk_mesh, gradient_index, gradient_index_with_holes, local_stable_graph, local_unstable_graph,
    uv_coords, LocalManifold, ManifoldConfig, ManifoldSide,
};
use henon_core::Dynamics;
use num_complex::Complex64;
use serde_json::json;

use crate::commands::{complex, most_repelling_fixed_point, output_dir, report};
use crate::config::RunConfig;
use crate::report::{Check, Report};
use crate::{execution, CliError};

pub fn run(cfg: &RunConfig, dy: &Dynamics) -> Result<Report, CliError> {
    let o = &cfg.manifold;
    let exec = execution(cfg);
    let p = &dy.map.p;
    let mcfg = ManifoldConfig { delta: o.delta, shrink: o.shrink, u_radius: o.u_radius, tol: cfg.tolerances.graph_settle };
    let z = o.z.map(complex).unwrap_or_else(|| most_repelling_fixed_point(p));
    if o.iterations < 2 {
        return Err(CliError::Config("manifold needs at least two iterations".into()));
    }
    let mut rep = report("manifold", cfg, dy);
    let mut index = json!(null);
    let disk = match o.side {
        ManifoldSide::Stable => {
            let mesh = disk_mesh(Complex64::new(0.0, 0.0), o.shrink * o.delta, o.rings, o.spokes);
            let disk = local_stable_graph(dy, z, o.iterations, &mesh, &mcfg, exec)?;
            let pz = p.eval(z);
            let target = if (pz - z).norm() < 1e-12 {
                disk.clone()
            } else {
                local_stable_graph(dy, pz, o.iterations, &[Complex64::new(0.0, 0.0)], &mcfg, exec)?
            };
            let mut worst: f64 = 0.0;
            for v in &disk.params {
                let img = dy.map.apply(disk.point_at(dy, *v)?);
                let uv = uv_coords(p, img, &mcfg)?;
                worst = worst.max((uv.u - target.eval(uv.v)).norm());
            }
            rep.check(Check::at_most("image lies in the disk over p(z)", worst, cfg.tolerances.invariance));
            if dy.is_degenerate() {
                let tilt = disk.values.iter().map(|g| (g - z).norm()).fold(0.0, f64::max);
                rep.check(Check::at_most("degenerate disk is vertical", tilt, 1e-10));
            }
            if o.index {
                let r = o.index_radius;
                let outer = gradient_index(dy, &disk, r, exec)?;
                rep.check(Check::equals("gradient index around the loop", outer, 1));
                let holes = if dy.is_degenerate() {
                    None
                } else {
                    let h = gradient_index_with_holes(dy, z, o.iterations, r, &mcfg, exec)?;
                    rep.check(Check::equals("index with holes removed", h.region, 1 - dy.degree() as i64));
                    Some(h)
                };
                index = json!({ "loop_radius": r, "outer": outer, "with_holes": holes });
            }
            disk
        }
        ManifoldSide::Unstable => {
            let hist = backward_history(p, z, o.iterations)?;
            let mesh = disk_mesh(z, 0.9 * o.u_radius, o.rings, o.spokes);
            let disk = local_unstable_graph(dy, &hist, &mesh, &mcfg, exec)?;
            if dy.is_degenerate() {
                let lift = disk.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
                rep.check(Check::at_most("degenerate disk is the curve x = p(y)", lift, 1e-10));
            } else {
                let target: LocalManifold = if (hist[1] - z).norm() < 1e-12 {
                    disk.clone()
                } else {
                    local_unstable_graph(dy, &hist[1..], &[hist[1]], &mcfg, exec)?
                };
                let mut worst: f64 = 0.0;
                for u in &disk.params {
                    let pre = dy.map.apply_inverse(disk.point_at(dy, *u)?)?;
                    let uv = uv_coords(p, pre, &mcfg)?;
                    worst = worst.max((uv.v - target.eval(uv.u)).norm());
                }
                rep.check(Check::at_most("preimage lies in the disk over the previous point", worst, cfg.tolerances.invariance));
            }
            disk
        }
    };
    rep.check(Check::at_most("change from one fewer sweep", disk.settle, cfg.tolerances.graph_settle));
    rep.data = json!({ "base": z, "manifold": disk, "index": index });
    if let Some(dir) = output_dir(cfg)? {
        std::fs::write(dir.join("manifold.json"), serde_json::to_string_pretty(&rep.data)? + "\n")?;
    }
    Ok(rep.finish())
}
