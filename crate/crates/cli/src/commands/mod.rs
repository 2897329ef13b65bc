pub mod critlocus;
pub mod grid;
pub mod holonomy;
pub mod manifold;
pub mod rigidity;
pub mod verify;

use std::path::PathBuf;

use henon_core::{Dynamics, Polynomial};
use num_complex::Complex64;

use crate::config::RunConfig;
use crate::report::Report;
use crate::CliError;

pub(crate) fn complex(pair: [f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

pub(crate) fn report(name: &str, cfg: &RunConfig, dy: &Dynamics) -> Report {
    Report::new(name, Some(dy.map.p.to_string()), Some([dy.map.a.re, dy.map.a.im]), cfg.seed)
}

/// Creates the output directory if one is configured.
pub(crate) fn output_dir(cfg: &RunConfig) -> Result<Option<PathBuf>, CliError> {
    match &cfg.output {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            Ok(Some(dir.clone()))
        }
        None => Ok(None),
    }
}

/// Fixed point of `p` with the largest multiplier.
pub(crate) fn most_repelling_fixed_point(p: &Polynomial) -> Complex64 {
    p.fixed_points()
        .into_iter()
        .max_by(|a, b| p.eval_derivative(*a).norm().total_cmp(&p.eval_derivative(*b).norm()))
        .expect("a polynomial of degree at least two has fixed points")
}
