//! Front end for the `henon` binary: argument parsing, configuration merge,
//! dispatch to subcommands and report output.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use henon_core::{Dynamics, Execution, HenonMap, Polynomial};
use num_complex::Complex64;

pub use config::RunConfig;
pub use error::CliError;
use report::{ErrorBody, ErrorReport, Report, Status};

#[derive(Debug, Parser)]
#[command(name = "henon", version, about = "Escape functions, critical locus, holonomy and local manifolds of complex Henon maps")]
pub struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Polynomial, e.g. `x2-1`.
    #[arg(long, global = true)]
    pub p: Option<String>,
    /// Jacobian `re` or `re,im`.
    #[arg(long, global = true, value_parser = parse_pair, allow_hyphen_values = true)]
    pub a: Option<[f64; 2]>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for data files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Print the merged configuration as TOML and exit.
    #[arg(long, global = true)]
    pub print_config: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample g+, g- or the tangency modulus on a real grid.
    GreenGrid(GridArgs),
    /// Trace primary components of the critical locus.
    Critlocus(CritlocusArgs),
    /// Monodromy orbit on a primary component.
    Holonomy(HolonomyArgs),
    /// Local stable or unstable disk and its gradient index.
    Manifold(ManifoldArgs),
    /// Exact defect series and the case table.
    Rigidity(RigidityArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::GreenGrid(_) => "green-grid",
            Command::Critlocus(_) => "critlocus",
            Command::Holonomy(_) => "holonomy",
            Command::Manifold(_) => "manifold",
            Command::Rigidity(_) => "rigidity",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// green-plus, green-minus or tangency.
    #[arg(long)]
    pub quantity: Option<String>,
    /// pgm or csv.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub x_range: Option<[f64; 2]>,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub y_range: Option<[f64; 2]>,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub height: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CritlocusArgs {
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub c: Option<[f64; 2]>,
    #[arg(long)]
    pub x_min: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub contact_samples: Option<usize>,
    /// Comma-separated `psi+` radii for the injectivity certificate.
    #[arg(long, value_delimiter = ',')]
    pub circles: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct HolonomyArgs {
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub c: Option<[f64; 2]>,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub psi: Option<[f64; 2]>,
    #[arg(long)]
    pub depth: Option<u32>,
}

#[derive(Debug, Args)]
pub struct ManifoldArgs {
    /// stable or unstable.
    #[arg(long)]
    pub side: Option<String>,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub z: Option<[f64; 2]>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub index_radius: Option<f64>,
    #[arg(long)]
    pub no_index: bool,
}

#[derive(Debug, Args)]
pub struct RigidityArgs {
    #[arg(long)]
    pub case: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Option<config::Suite>,
    #[arg(long)]
    pub samples: Option<usize>,
}

/// `re` or `re,im`.
pub fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    match parts.as_slice() {
        [re] => Ok([num(re)?, 0.0]),
        [re, im] => Ok([num(re)?, num(im)?]),
        _ => Err(format!("expected `re` or `re,im`, got '{s}'")),
    }
}

fn enum_from_str<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> Result<T, CliError> {
    serde_json::from_value(serde_json::Value::String(s.into()))
        .map_err(|_| CliError::Config(format!("unknown {what} '{s}'")))
}

/// Layers command-line values over the file (or default) configuration.
pub fn merge(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(p) = &cli.p {
        cfg.map.p = p.clone();
    }
    if let Some(a) = cli.a {
        cfg.map.a = a;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output = Some(o.clone());
    }
    cfg.sequential |= cli.sequential;
    match &cli.command {
        Command::GreenGrid(g) => {
            let o = &mut cfg.green_grid;
            if let Some(q) = &g.quantity {
                o.quantity = enum_from_str("quantity", q)?;
            }
            if let Some(f) = &g.format {
                o.format = enum_from_str("format", f)?;
            }
            o.x_range = g.x_range.unwrap_or(o.x_range);
            o.y_range = g.y_range.unwrap_or(o.y_range);
            o.width = g.width.unwrap_or(o.width);
            o.height = g.height.unwrap_or(o.height);
        }
        Command::Critlocus(c) => {
            let o = &mut cfg.critlocus;
            o.c = c.c.or(o.c);
            o.x_min = c.x_min.unwrap_or(o.x_min);
            o.x_max = c.x_max.unwrap_or(o.x_max);
            o.step = c.step.unwrap_or(o.step);
            o.contact_samples = c.contact_samples.unwrap_or(o.contact_samples);
            if let Some(r) = &c.circles {
                o.circle_radii = r.clone();
            }
        }
        Command::Holonomy(h) => {
            let o = &mut cfg.holonomy;
            o.c = h.c.or(o.c);
            o.psi = h.psi.unwrap_or(o.psi);
            o.depth = h.depth.unwrap_or(o.depth);
        }
        Command::Manifold(m) => {
            let o = &mut cfg.manifold;
            if let Some(s) = &m.side {
                o.side = enum_from_str("side", s)?;
            }
            o.z = m.z.or(o.z);
            o.iterations = m.iterations.unwrap_or(o.iterations);
            o.index_radius = m.index_radius.unwrap_or(o.index_radius);
            if m.no_index {
                o.index = false;
            }
        }
        Command::Rigidity(r) => {
            if r.case.is_some() {
                cfg.rigidity.case = r.case.clone();
            }
        }
        Command::Verify(v) => {
            cfg.verify.suite = v.suite.unwrap_or(cfg.verify.suite);
            cfg.verify.samples = v.samples.unwrap_or(cfg.verify.samples);
        }
    }
    Ok(cfg)
}

pub fn build_dynamics(cfg: &RunConfig) -> Result<Dynamics, CliError> {
    let p: Polynomial = cfg.map.p.parse().map_err(|e| CliError::Config(format!("{e}")))?;
    let a = Complex64::new(cfg.map.a[0], cfg.map.a[1]);
    Dynamics::with_radii(HenonMap::new(p, a), cfg.domain.r, cfg.domain.big_r).map_err(|e| CliError::Config(e.to_string()))
}

pub fn execution(cfg: &RunConfig) -> Execution {
    if cfg.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn apply_thread_cap() -> Result<(), CliError> {
    match std::env::var("HENON_THREADS") {
        Ok(v) => {
            let n: usize = v.trim().parse().map_err(|_| CliError::Config(format!("HENON_THREADS='{v}' is not a count")))?;
            if n == 0 {
                return Err(CliError::Config("HENON_THREADS must be positive".into()));
            }
            henon_core::exec::limit_threads(n);
            Ok(())
        }
        Err(_) => Ok(()),
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<Option<Report>, CliError> {
    apply_thread_cap()?;
    let cfg = merge(cli)?;
    if cli.print_config {
        out.write_all(cfg.to_toml().as_bytes())?;
        return Ok(None);
    }
    let report = match &cli.command {
        Command::Rigidity(_) => commands::rigidity::run(&cfg)?,
        command => {
            let dy = build_dynamics(&cfg)?;
            match command {
                Command::GreenGrid(_) => commands::grid::run(&cfg, &dy)?,
                Command::Critlocus(_) => commands::critlocus::run(&cfg, &dy)?,
                Command::Holonomy(_) => commands::holonomy::run(&cfg, &dy)?,
                Command::Manifold(_) => commands::manifold::run(&cfg, &dy)?,
                Command::Verify(_) => commands::verify::run(&cfg, &dy)?,
                Command::Rigidity(_) => unreachable!(),
            }
        }
    };
    Ok(Some(report))
}

fn write_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    out.write_all(b"\n")
}

/// Runs one invocation and returns the process exit code. The report (or an
/// error report) is written to `out` as JSON.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let err = CliError::Config(e.to_string().trim_end().to_string());
            let _ = write_json(out, &error_report("henon", &err));
            return err.exit_code();
        }
    };
    let name = cli.command.name();
    match dispatch(&cli, out) {
        Ok(None) => 0,
        Ok(Some(report)) => {
            if write_json(out, &report).is_err() {
                return 2;
            }
            report.exit_code()
        }
        Err(err) => {
            let _ = write_json(out, &error_report(name, &err));
            err.exit_code()
        }
    }
}

fn error_report(command: &str, err: &CliError) -> ErrorReport {
    ErrorReport {
        command: command.into(),
        status: Status::Error,
        error: ErrorBody { kind: err.kind().into(), message: err.to_string(), exit_code: err.exit_code() },
    }
}
