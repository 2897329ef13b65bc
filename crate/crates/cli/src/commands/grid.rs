use std::fs::File;
use std::io::BufWriter;

use henon_core::grid::{evaluate_grid, GridQuantity, GridSpec};
use henon_core::Dynamics;
use serde_json::json;

use crate::commands::{output_dir, report};
use crate::config::{GridFormat, RunConfig};
use crate::report::{Check, Report};
use crate::{execution, CliError};

pub fn run(cfg: &RunConfig, dy: &Dynamics) -> Result<Report, CliError> {
    let o = &cfg.green_grid;
    if o.width == 0 || o.height == 0 {
        return Err(CliError::Config("grid needs positive width and height".into()));
    }
    let spec = GridSpec {
        x_min: o.x_range[0],
        x_max: o.x_range[1],
        y_min: o.y_range[0],
        y_max: o.y_range[1],
        width: o.width,
        height: o.height,
    };
    if o.quantity == GridQuantity::GreenMinus && dy.is_degenerate() {
        return Err(CliError::Config("g- needs a nonzero Jacobian".into()));
    }
    let field = evaluate_grid(dy, spec, o.quantity, execution(cfg));
    let sidecar = field.sidecar(dy);
    let mut rep = report("green-grid", cfg, dy);
    match o.quantity {
        GridQuantity::GreenPlus => rep.check(Check::at_least("g+ nonnegative", sidecar.min, 0.0)),
        GridQuantity::GreenMinus => {
            let floor = dy.map.a.norm().ln() / (dy.degree() as f64 - 1.0);
            rep.check(Check::at_least("g- above its floor", sidecar.min, floor - 1e-12));
        }
        GridQuantity::Tangency => rep.check(Check::at_least("tangency modulus nonnegative", sidecar.min, 0.0)),
    }
    let stem = serde_json::to_value(o.quantity)?.as_str().unwrap_or("grid").to_string();
    let mut files = Vec::new();
    if let Some(dir) = output_dir(cfg)? {
        match o.format {
            GridFormat::Pgm => {
                let path = dir.join(format!("{stem}.pgm"));
                field.write_pgm(BufWriter::new(File::create(&path)?))?;
                files.push(path);
                let side = dir.join(format!("{stem}.json"));
                std::fs::write(&side, serde_json::to_string_pretty(&sidecar)? + "\n")?;
                files.push(side);
            }
            GridFormat::Csv => {
                let path = dir.join(format!("{stem}.csv"));
                field.write_csv(BufWriter::new(File::create(&path)?))?;
                files.push(path);
            }
        }
    }
    rep.data = json!({ "sidecar": sidecar, "files": files });
    Ok(rep.finish())
}
