//! Local stable and unstable disks in the `(u, v)` chart near `x = p(y)`,
//! and the index of `grad g-` along loops in stable disks.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dual::{Dual2, Scalar};
use crate::error::{HenonError, Result};
use crate::escape::{Dynamics, Side};
use crate::exec::Execution;
use crate::map::Point;
use crate::poly::Polynomial;
use crate::winding::winding_number;

/// `v = p(y) - x`, `u` the preimage of `x` under `p` near `y`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UVPoint {
    pub u: Complex64,
    pub v: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifoldConfig {
    /// Chart half-width in `v`.
    pub delta: f64,
    /// Disk shrink factor; graphs live on `|v| < shrink * delta`.
    pub shrink: f64,
    /// Radius of the Euclidean neighborhood of a base point.
    pub u_radius: f64,
    /// Allowed change between graphs built with `n` and `n + 1` pullbacks.
    pub tol: f64,
}

impl Default for ManifoldConfig {
    fn default() -> Self {
        Self { delta: 0.05, shrink: 0.5, u_radius: 0.05, tol: 1e-10 }
    }
}

fn nearest_preimage(p: &Polynomial, x: Complex64, y: Complex64) -> Result<Complex64> {
    let guess = p
        .preimages(x)
        .into_iter()
        .min_by(|a, b| (a - y).norm().total_cmp(&(b - y).norm()))
        .ok_or_else(|| HenonError::NewtonDivergence("no preimage".into()))?;
    p.local_inverse(x, guess).ok_or_else(|| HenonError::NewtonDivergence(format!("preimage of {x}")))
}

pub fn uv_coords(p: &Polynomial, z: Point, cfg: &ManifoldConfig) -> Result<UVPoint> {
    let v = p.eval(z.y) - z.x;
    if !(v.norm() < cfg.delta) {
        return Err(HenonError::OutsideVPrime(format!("|v| = {} at {z:?}", v.norm())));
    }
    Ok(UVPoint { u: nearest_preimage(p, z.x, z.y)?, v })
}

pub fn uv_inverse(p: &Polynomial, uv: UVPoint) -> Result<Point> {
    let x = p.eval(uv.u);
    let y = p
        .local_inverse(x + uv.v, uv.u)
        .ok_or_else(|| HenonError::NewtonDivergence(format!("chart inverse at {uv:?}")))?;
    Ok(Point::new(x, y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ManifoldSide {
    Stable,
    Unstable,
}

pub const DEFAULT_ITERATIONS: usize = 24;
const REP_NODES: usize = 48;

/// Holomorphic function on a disk, stored as Taylor coefficients about `center`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskSeries {
    pub center: Complex64,
    pub radius: f64,
    pub coeffs: Vec<Complex64>,
}

impl DiskSeries {
    fn constant(center: Complex64, radius: f64, value: Complex64) -> Self {
        Self { center, radius, coeffs: vec![value] }
    }

    fn nodes(center: Complex64, radius: f64) -> Vec<Complex64> {
        (0..REP_NODES).map(|m| center + Complex64::from_polar(radius, TAU * m as f64 / REP_NODES as f64)).collect()
    }

    fn from_node_values(center: Complex64, radius: f64, values: &[Complex64]) -> Self {
        let n = values.len();
        let coeffs = (0..n / 2)
            .map(|k| {
                let sum: Complex64 = values
                    .iter()
                    .enumerate()
                    .map(|(m, v)| v * Complex64::from_polar(1.0, -TAU * (k * m) as f64 / n as f64))
                    .sum();
                sum / (n as f64 * radius.powi(k as i32))
            })
            .collect();
        Self { center, radius, coeffs }
    }

    pub fn eval<T: Scalar>(&self, t: T) -> T {
        let s = t + (-self.center);
        let mut acc = T::constant(*self.coeffs.last().unwrap());
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc * s + *c;
        }
        acc
    }

    fn node_values(&self) -> Vec<Complex64> {
        Self::nodes(self.center, self.radius).into_iter().map(|t| self.eval(t)).collect()
    }

    pub fn sup_distance(&self, other: &DiskSeries) -> f64 {
        self.node_values()
            .iter()
            .zip(other.node_values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalManifold {
    pub side: ManifoldSide,
    /// `z` for a stable disk; `z_0, z_{-1}, ...` (each mapped by `p` to the previous) for an unstable one.
    pub history: Vec<Complex64>,
    pub iterations: usize,
    /// `v` values (stable) or `u` values (unstable).
    pub params: Vec<Complex64>,
    /// `u = g(v)` (stable) or `v = g(u)` (unstable).
    pub values: Vec<Complex64>,
    /// Largest change against the graph built with one fewer sweep.
    pub settle: f64,
    pub config: ManifoldConfig,
    pub graph: DiskSeries,
}

impl LocalManifold {
    pub fn base(&self) -> Complex64 {
        self.history[0]
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.graph.eval(t)
    }

    /// Chart point of the graph over parameter `t`.
    pub fn point_at(&self, dy: &Dynamics, t: Complex64) -> Result<Point> {
        let uv = match self.side {
            ManifoldSide::Stable => UVPoint { u: self.eval(t), v: t },
            ManifoldSide::Unstable => UVPoint { u: t, v: self.eval(t) },
        };
        uv_inverse(&dy.map.p, uv)
    }
}

/// `u` of a chart point, with its derivative carried along in `dx`.
fn u_coord(p: &Polynomial, x: Dual2, near: Complex64) -> Result<Dual2> {
    let u = p
        .local_inverse(x.v, near)
        .ok_or_else(|| HenonError::GraphTransformDiverged(format!("no preimage of {} near {near}", x.v)))?;
    Ok(Dual2::new(u, x.dx / p.eval_derivative(u), Complex64::new(0.0, 0.0)))
}

fn newton_1d(mut u: Complex64, f: impl Fn(Complex64) -> Result<(Complex64, Complex64)>) -> Result<Complex64> {
    for _ in 0..60 {
        let (val, der) = f(u)?;
        if der.norm() == 0.0 || !der.re.is_finite() {
            return Err(HenonError::GraphTransformDiverged("flat pullback".into()));
        }
        let step = val / der;
        u -= step;
        if !u.re.is_finite() {
            return Err(HenonError::GraphTransformDiverged("non-finite iterate".into()));
        }
        if step.norm() <= 1e-15 * (1.0 + u.norm()) {
            return Ok(u);
        }
    }
    let (val, der) = f(u)?;
    if (val / der).norm() <= 1e-13 * (1.0 + u.norm()) {
        Ok(u)
    } else {
        Err(HenonError::GraphTransformDiverged(format!("sweep Newton stalled at {u}")))
    }
}

/// Chart point over `(u, v(u))` as duals in `u`.
fn chart_dual(p: &Polynomial, u: Complex64, v: Dual2) -> Result<(Dual2, Dual2)> {
    let pt = uv_inverse(p, UVPoint { u, v: v.v })?;
    let dxdu = p.eval_derivative(u);
    let dydu = (dxdu + v.dx) / p.eval_derivative(pt.y);
    let zero = Complex64::new(0.0, 0.0);
    Ok((Dual2::new(pt.x, dxdu, zero), Dual2::new(pt.y, dydu, zero)))
}

/// `(u, v)` of `f` applied to a chart point, as duals.
fn image_uv(dy: &Dynamics, x: Dual2, y: Dual2) -> Result<(Dual2, Dual2)> {
    let p = &dy.map.p;
    let (fx, fy) = dy.map.step(x, y);
    let u = u_coord(p, fx, fy.v)?;
    let v = p.eval(fy) - fx;
    Ok((u, v))
}

/// One pullback of the stable graph over `p(z)` to the disk over `z`.
fn stable_sweep(dy: &Dynamics, z: Complex64, next: &DiskSeries, cfg: &ManifoldConfig, exec: Execution) -> Result<DiskSeries> {
    let p = &dy.map.p;
    let radius = cfg.shrink * cfg.delta;
    let nodes = DiskSeries::nodes(Complex64::new(0.0, 0.0), radius);
    let zero = Complex64::new(0.0, 0.0);
    let vals = exec.map(nodes.len(), |m| {
        let v = Dual2::new(nodes[m], zero, zero);
        let u = newton_1d(z, |u| {
            let (x, y) = chart_dual(p, u, v)?;
            let (fu, fv) = image_uv(dy, x, y)?;
            if !(fv.v.norm() < next.radius) {
                return Err(HenonError::GraphTransformDiverged(format!("image v = {} leaves the disk", fv.v)));
            }
            let r = fu - next.eval(fv);
            Ok((r.v, r.dx))
        })?;
        if !((u - z).norm() < cfg.u_radius) {
            return Err(HenonError::GraphTransformDiverged(format!("graph value {u} left the disk around {z}")));
        }
        Ok(u)
    });
    let vals = vals.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(DiskSeries::from_node_values(zero, radius, &vals))
}

/// Stable graph over `z` from `n` sweeps starting at the vertical slice through `p^n(z)`.
pub fn stable_graph_series(dy: &Dynamics, z: Complex64, n: usize, cfg: &ManifoldConfig, exec: Execution) -> Result<DiskSeries> {
    let p = &dy.map.p;
    let orbit: Vec<Complex64> = std::iter::successors(Some(z), |w| Some(p.eval(*w))).take(n + 1).collect();
    let mut g = DiskSeries::constant(Complex64::new(0.0, 0.0), cfg.shrink * cfg.delta, orbit[n]);
    for j in (0..n).rev() {
        g = stable_sweep(dy, orbit[j], &g, cfg, exec)?;
    }
    Ok(g)
}

/// One push-forward of the unstable graph over `w` to the disk over `p(w) = z`.
fn unstable_sweep(dy: &Dynamics, z: Complex64, w: Complex64, prev: &DiskSeries, cfg: &ManifoldConfig, exec: Execution) -> Result<DiskSeries> {
    let p = &dy.map.p;
    let nodes = DiskSeries::nodes(z, cfg.u_radius);
    let zero = Complex64::new(0.0, 0.0);
    let vals = exec.map(nodes.len(), |m| {
        let target = nodes[m];
        let seed = p
            .local_inverse(target, w)
            .ok_or_else(|| HenonError::GraphTransformDiverged(format!("no preimage of {target}")))?;
        let eval = |u: Complex64| -> Result<(Dual2, Dual2)> {
            if !((u - w).norm() < 2.0 * prev.radius) {
                return Err(HenonError::GraphTransformDiverged(format!("preimage {u} far from {w}")));
            }
            let v = prev.eval(Dual2::new(u, Complex64::new(1.0, 0.0), zero));
            let (x, y) = chart_dual(p, u, v)?;
            image_uv(dy, x, y)
        };
        let u = newton_1d(seed, |u| {
            let (fu, _) = eval(u)?;
            Ok((fu.v - target, fu.dx))
        })?;
        Ok(eval(u)?.1.v)
    });
    let vals = vals.into_iter().collect::<Result<Vec<_>>>()?;
    if let Some(v) = vals.iter().find(|v| !(v.norm() < cfg.delta)) {
        return Err(HenonError::GraphTransformDiverged(format!("graph value {v} left the chart")));
    }
    Ok(DiskSeries::from_node_values(z, cfg.u_radius, &vals))
}

/// Unstable graph over `history[0]` from pushing the curve `x = p(y)` near the last entry forward.
pub fn unstable_graph_series(dy: &Dynamics, history: &[Complex64], cfg: &ManifoldConfig, exec: Execution) -> Result<DiskSeries> {
    let n = history.len() - 1;
    let mut g = DiskSeries::constant(history[n], cfg.u_radius, Complex64::new(0.0, 0.0));
    for j in (0..n).rev() {
        g = unstable_sweep(dy, history[j], history[j + 1], &g, cfg, exec)?;
    }
    Ok(g)
}

fn check_mesh(mesh: &[Complex64], center: Complex64, radius: f64, what: &str) -> Result<()> {
    if mesh.is_empty() {
        return Err(HenonError::InvalidInput("empty mesh".into()));
    }
    if let Some(m) = mesh.iter().find(|m| !((*m - center).norm() <= radius * (1.0 + 1e-12))) {
        return Err(HenonError::InvalidInput(format!("{what} mesh node {m} outside radius {radius}")));
    }
    Ok(())
}

/// Disk mesh: center plus `rings` circles of `spokes` nodes.
pub fn disk_mesh(center: Complex64, radius: f64, rings: usize, spokes: usize) -> Vec<Complex64> {
    let mut out = vec![center];
    for r in 1..=rings {
        let rad = radius * r as f64 / rings as f64;
        for s in 0..spokes {
            out.push(center + Complex64::from_polar(rad, TAU * s as f64 / spokes as f64));
        }
    }
    out
}

/// Stable disk through `(p(z), z)` as a graph `u = g(v)`, sampled at `mesh` (values of `v`).
pub fn local_stable_graph(
    dy: &Dynamics,
    z: Complex64,
    iterations: usize,
    mesh: &[Complex64],
    cfg: &ManifoldConfig,
    exec: Execution,
) -> Result<LocalManifold> {
    if iterations == 0 {
        return Err(HenonError::InvalidInput("need at least one sweep".into()));
    }
    check_mesh(mesh, Complex64::new(0.0, 0.0), cfg.shrink * cfg.delta, "v")?;
    let graph = stable_graph_series(dy, z, iterations, cfg, exec)?;
    let coarse = stable_graph_series(dy, z, iterations - 1, cfg, exec)?;
    let settle = graph.sup_distance(&coarse);
    if settle > cfg.tol {
        return Err(HenonError::GraphTransformDiverged(format!("successive graphs differ by {settle:e}")));
    }
    let values: Vec<Complex64> = mesh.iter().map(|v| graph.eval(*v)).collect();
    if let Some(g) = values.iter().find(|g| !((*g - z).norm() < cfg.u_radius)) {
        return Err(HenonError::GraphTransformDiverged(format!("graph value {g} left the disk around {z}")));
    }
    Ok(LocalManifold {
        side: ManifoldSide::Stable,
        history: vec![z],
        iterations,
        params: mesh.to_vec(),
        values,
        settle,
        config: *cfg,
        graph,
    })
}

/// Backward orbit `z, w_1, w_2, ...` choosing each preimage nearest the previous point.
pub fn backward_history(p: &Polynomial, z: Complex64, n: usize) -> Result<Vec<Complex64>> {
    let mut out = vec![z];
    for _ in 0..n {
        let last = *out.last().unwrap();
        out.push(nearest_preimage(p, last, last)?);
    }
    Ok(out)
}

/// Unstable disk through `history[0]` as a graph `v = g(u)`, sampled at `mesh` (values of `u`).
pub fn local_unstable_graph(
    dy: &Dynamics,
    history: &[Complex64],
    mesh: &[Complex64],
    cfg: &ManifoldConfig,
    exec: Execution,
) -> Result<LocalManifold> {
    if history.len() < 2 {
        return Err(HenonError::InvalidInput("history needs at least one preimage".into()));
    }
    let p = &dy.map.p;
    for w in history.windows(2) {
        if (p.eval(w[1]) - w[0]).norm() > 1e-9 * (1.0 + w[0].norm()) {
            return Err(HenonError::InvalidInput("history is not a backward orbit".into()));
        }
    }
    let z0 = history[0];
    check_mesh(mesh, z0, cfg.u_radius, "u")?;
    let n = history.len() - 1;
    let graph = unstable_graph_series(dy, history, cfg, exec)?;
    let coarse = unstable_graph_series(dy, &history[..n], cfg, exec)?;
    let settle = graph.sup_distance(&coarse);
    if settle > cfg.tol {
        return Err(HenonError::GraphTransformDiverged(format!("successive graphs differ by {settle:e}")));
    }
    Ok(LocalManifold {
        side: ManifoldSide::Unstable,
        history: history.to_vec(),
        iterations: n,
        params: mesh.to_vec(),
        values: mesh.iter().map(|u| graph.eval(*u)).collect(),
        settle,
        config: *cfg,
        graph,
    })
}

/// `d/dv log phi-` along a stable disk.
fn minus_log_derivative(dy: &Dynamics, m: &LocalManifold, v: Complex64) -> Result<Complex64> {
    let floor = dy.map.a.norm().ln() / (dy.degree() as f64 - 1.0);
    let p0 = m.point_at(dy, v)?;
    let g = dy.green(p0, Side::Minus);
    if g.interior_flag || !(g.value > floor) {
        return Err(HenonError::GradientVanishesOnLoop(v));
    }
    let p = &dy.map.p;
    let zero = Complex64::new(0.0, 0.0);
    let u = m.graph.eval(Dual2::new(v, Complex64::new(1.0, 0.0), zero));
    let dxdv = p.eval_derivative(u.v) * u.dx;
    let dydv = (dxdv + 1.0) / p.eval_derivative(p0.y);
    let (_, grad) = dy.phi_with_gradient(p0, Side::Minus)?;
    Ok(grad[0] * dxdv + grad[1] * dydv)
}

const INDEX_MESH: usize = 64;

/// Winding of `grad (g- restricted to the disk)` around `|v| = loop_radius * delta`.
pub fn gradient_index(dy: &Dynamics, m: &LocalManifold, loop_radius: f64, exec: Execution) -> Result<i64> {
    if m.side != ManifoldSide::Stable {
        return Err(HenonError::InvalidInput("index loops live on stable disks".into()));
    }
    if !(loop_radius > 0.0 && loop_radius <= m.config.shrink) {
        return Err(HenonError::InvalidInput(format!("loop radius {loop_radius} outside the graph disk")));
    }
    let r = loop_radius * m.config.delta;
    let field = |t: f64| -> Result<Complex64> {
        let v = Complex64::from_polar(r, TAU * t);
        Ok(minus_log_derivative(dy, m, v)?.conj())
    };
    Ok(winding_number(field, INDEX_MESH, 0.0, exec)?.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoleIndexReport {
    pub outer: i64,
    pub holes: Vec<i64>,
    /// `outer - sum(holes)`.
    pub region: i64,
}

/// Index over the disk of `z` with the images of the disks of the preimages of `z` removed.
pub fn gradient_index_with_holes(
    dy: &Dynamics,
    z: Complex64,
    iterations: usize,
    loop_radius: f64,
    cfg: &ManifoldConfig,
    exec: Execution,
) -> Result<HoleIndexReport> {
    let p = &dy.map.p;
    let center = [Complex64::new(0.0, 0.0)];
    let outer_disk = local_stable_graph(dy, z, iterations, &center, cfg, exec)?;
    let outer = gradient_index(dy, &outer_disk, loop_radius, exec)?;
    let r = loop_radius * cfg.delta;
    let mut holes = Vec::new();
    for w in p.preimages(z) {
        let w = p.local_inverse(z, w).unwrap_or(w);
        let inner = local_stable_graph(dy, w, iterations, &center, cfg, exec)?;
        let field = |t: f64| -> Result<Complex64> {
            let q = inner.point_at(dy, Complex64::from_polar(r, TAU * t))?;
            let img = dy.map.apply(q);
            let v = p.eval(img.y) - img.x;
            Ok(minus_log_derivative(dy, &outer_disk, v)?.conj())
        };
        holes.push(winding_number(field, INDEX_MESH, 0.0, exec)?.0);
    }
    let region = outer - holes.iter().sum::<i64>();
    Ok(HoleIndexReport { outer, holes, region })
}
