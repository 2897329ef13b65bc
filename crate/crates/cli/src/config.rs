//! Run configuration: a TOML file merged with command-line overrides.

use std::path::{Path, PathBuf};

use henon_core::grid::GridQuantity;
use henon_core::manifolds::ManifoldSide;
use henon_core::map::{DEFAULT_R_LARGE, DEFAULT_R_SMALL};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    /// Directory for data files; reports always go to stdout.
    pub output: Option<PathBuf>,
    pub sequential: bool,
    pub map: MapSpec,
    pub domain: DomainSpec,
    pub tolerances: Tolerances,
    pub green_grid: GridOptions,
    pub critlocus: CritlocusOptions,
    pub holonomy: HolonomyOptions,
    pub manifold: ManifoldOptions,
    pub rigidity: RigidityOptions,
    pub verify: VerifyOptions,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            output: None,
            sequential: false,
            map: MapSpec::default(),
            domain: DomainSpec::default(),
            tolerances: Tolerances::default(),
            green_grid: GridOptions::default(),
            critlocus: CritlocusOptions::default(),
            holonomy: HolonomyOptions::default(),
            manifold: ManifoldOptions::default(),
            rigidity: RigidityOptions::default(),
            verify: VerifyOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MapSpec {
    /// Monic polynomial text, e.g. `x2-1`.
    pub p: String,
    /// Jacobian as `[re, im]`.
    pub a: [f64; 2],
}

impl Default for MapSpec {
    fn default() -> Self {
        Self { p: "x2".into(), a: [0.0, 0.0] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DomainSpec {
    pub r: f64,
    pub big_r: f64,
}

impl Default for DomainSpec {
    fn default() -> Self {
        Self { r: DEFAULT_R_SMALL, big_r: DEFAULT_R_LARGE }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub recursion: f64,
    pub newton: f64,
    pub root_of_unity: f64,
    pub order_cap: u32,
    pub graph_settle: f64,
    pub invariance: f64,
    pub loop_closure: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            recursion: 1e-9,
            newton: 1e-10,
            root_of_unity: 1e-6,
            order_cap: 8,
            graph_settle: 1e-10,
            invariance: 1e-7,
            loop_closure: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridFormat {
    Pgm,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridOptions {
    pub quantity: GridQuantity,
    pub format: GridFormat,
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
    pub width: usize,
    pub height: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            quantity: GridQuantity::GreenPlus,
            format: GridFormat::Pgm,
            x_range: [-3.0, 3.0],
            y_range: [-3.0, 3.0],
            width: 256,
            height: 256,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CritlocusOptions {
    /// Critical point to follow; all distinct critical points when absent.
    pub c: Option<[f64; 2]>,
    pub x_min: f64,
    pub x_max: f64,
    pub step: f64,
    pub angle: f64,
    /// Leading samples checked for contact order 2.
    pub contact_samples: usize,
    /// Radii of the `psi+` circles for the injectivity certificate; empty to skip.
    pub circle_radii: Vec<f64>,
    pub circle_samples: usize,
}

impl Default for CritlocusOptions {
    fn default() -> Self {
        Self {
            c: None,
            x_min: 10.0,
            x_max: 1e4,
            step: 0.05,
            angle: 0.0,
            contact_samples: 20,
            circle_radii: Vec::new(),
            circle_samples: 256,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HolonomyOptions {
    pub c: Option<[f64; 2]>,
    /// `psi+` value of the base point.
    pub psi: [f64; 2],
    pub depth: u32,
}

impl Default for HolonomyOptions {
    fn default() -> Self {
        Self { c: None, psi: [4.0, 0.0], depth: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ManifoldOptions {
    pub side: ManifoldSide,
    /// Base point on the Julia set; the most repelling fixed point of `p` when absent.
    pub z: Option<[f64; 2]>,
    pub iterations: usize,
    pub rings: usize,
    pub spokes: usize,
    /// Compute the gradient index around the loop.
    pub index: bool,
    /// Loop radius as a fraction of the chart width.
    pub index_radius: f64,
    pub delta: f64,
    pub shrink: f64,
    pub u_radius: f64,
}

impl Default for ManifoldOptions {
    fn default() -> Self {
        let cfg = henon_core::manifolds::ManifoldConfig::default();
        Self {
            side: ManifoldSide::Stable,
            z: None,
            iterations: henon_core::manifolds::DEFAULT_ITERATIONS,
            rings: 4,
            spokes: 16,
            index: true,
            index_radius: 0.5,
            delta: cfg.delta,
            shrink: cfg.shrink,
            u_radius: cfg.u_radius,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RigidityOptions {
    /// Table case id; every case when absent.
    pub case: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Locus,
    Holonomy,
    Manifolds,
    Series,
    All,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { suite: Suite::Core, samples: 200 }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}
