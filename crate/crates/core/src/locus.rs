//! Tangencies between the level foliations of `phi+` and `phi-`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HenonError, Result};
use crate::escape::{principal, Dynamics, Side};
use crate::map::Point;
use crate::poly::Polynomial;

/// Depth margin: base points sit at `|x|` (or `|y|`) beyond this multiple of alpha.
pub const DEEP_MARGIN: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangencyValue {
    /// `raw / scale`.
    pub value: Complex64,
    /// Determinant of the gradients of `log phi+` and `log phi-`.
    pub raw: Complex64,
    pub n: usize,
    pub m: usize,
    /// `|grad log phi+| * |grad log phi-|`.
    pub scale: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusPoint {
    pub point: Point,
    pub tangency: TangencyValue,
    /// `|value|` at the returned point.
    pub residual: f64,
}

impl Dynamics {
    pub fn tangency_depths(&self, z: Point) -> Result<(usize, usize)> {
        let n = self.plus_depth(z, DEEP_MARGIN)?;
        let m = if self.is_degenerate() { 0 } else { self.minus_depth(z, DEEP_MARGIN)? };
        Ok((n, m))
    }

    pub fn tangency_value(&self, z: Point) -> Result<TangencyValue> {
        let (n, m) = self.tangency_depths(z)?;
        self.tangency_at(z, n, m)
    }

    pub fn tangency_at(&self, z: Point, n: usize, m: usize) -> Result<TangencyValue> {
        let (_, gp) = self.gradient_at(z, Side::Plus, n)?;
        let (_, gm) = self.gradient_at(z, Side::Minus, m)?;
        let raw = gp[0] * gm[1] - gp[1] * gm[0];
        let norm = |g: [Complex64; 2]| (g[0].norm_sqr() + g[1].norm_sqr()).sqrt();
        let scale = norm(gp) * norm(gm);
        Ok(TangencyValue { value: raw / scale, raw, n, m, scale })
    }

    fn raw_at(&self, z: Point, n: usize, m: usize) -> Result<Complex64> {
        Ok(self.tangency_at(z, n, m)?.raw)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Relative step for the central differences of the raw determinant.
    pub fd_rel: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 40, fd_rel: 1e-5 }
    }
}

/// Newton in `y` on the tangency at fixed `x`.
pub fn solve_on_vertical(dy: &Dynamics, x: Complex64, y0: Complex64, opts: &NewtonOptions) -> Result<LocusPoint> {
    let mut y = y0;
    let fail = |why: String| HenonError::NewtonDivergence(why);
    for _ in 0..opts.max_iter {
        let z = Point::new(x, y);
        let (n, m) = dy.tangency_depths(z)?;
        let t = dy.tangency_at(z, n, m)?;
        let h = opts.fd_rel * (1.0 + y.norm());
        let up = dy.raw_at(Point::new(x, y + h), n, m)?;
        let dn = dy.raw_at(Point::new(x, y - h), n, m)?;
        let deriv = (up - dn) / (2.0 * h);
        if deriv.norm() == 0.0 || !deriv.re.is_finite() {
            return Err(fail(format!("flat tangency at x={x}, y={y}")));
        }
        let step = t.raw / deriv;
        y -= step;
        if !y.re.is_finite() || !y.im.is_finite() {
            return Err(fail(format!("non-finite iterate at x={x}")));
        }
        if step.norm() <= 1e-13 * (1.0 + y.norm()) {
            break;
        }
    }
    let point = Point::new(x, y);
    let tangency = dy.tangency_value(point)?;
    let residual = tangency.value.norm();
    if residual < opts.tol {
        Ok(LocusPoint { point, tangency, residual })
    } else {
        Err(fail(format!("residual {residual:e} at x={x}, y={y}")))
    }
}

/// Half the smallest distance between distinct critical points, at least 0.25.
pub fn default_tube_radius(p: &Polynomial) -> f64 {
    let cps = distinct_critical_points(p);
    let mut best = f64::INFINITY;
    for (i, a) in cps.iter().enumerate() {
        for b in &cps[i + 1..] {
            best = best.min((a - b).norm());
        }
    }
    if best.is_finite() {
        (best / 2.0).max(0.25)
    } else {
        0.25
    }
}

pub fn distinct_critical_points(p: &Polynomial) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for c in p.critical_points() {
        if out.iter().all(|o| (o - c).norm() > 1e-8) {
            out.push(c);
        }
    }
    out
}

fn check_simple_critical(p: &Polynomial, c: Complex64) -> Result<()> {
    let scale = 1.0 + p.coeffs().iter().map(|k| k.norm()).fold(0.0, f64::max);
    if p.eval_derivative(c).norm() > 1e-10 * scale * (1.0 + c.norm()).powi(p.degree() as i32) {
        return Err(HenonError::InvalidInput(format!("{c} is not a critical point")));
    }
    if p.eval_second_derivative(c).norm() < 1e-8 {
        return Err(HenonError::NotSimpleCritical(c));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chart {
    Standard,
    UChart,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentLabel {
    pub c: Complex64,
    pub k: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub point: Point,
    pub tangency: TangencyValue,
    pub residual: f64,
    /// `|d value / d y|`, away from zero where the locus is smooth and transverse.
    pub slope_in_y: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveTrace {
    pub label: ComponentLabel,
    /// Ordered by increasing `|x|`.
    pub samples: Vec<TraceSample>,
    pub chart: Chart,
    pub step: f64,
    pub tube_radius: f64,
    /// `|y - c|` nonincreasing in `|x|` over the outer decade.
    pub asymptote_ok: bool,
}

impl CurveTrace {
    pub fn max_offset(&self) -> f64 {
        self.samples.iter().map(|s| (s.point.y - self.label.c).norm()).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x_re,x_im,y_re,y_im,residual,n,m\n");
        for s in &self.samples {
            let p = s.point;
            out.push_str(&format!(
                "{:e},{:e},{:e},{:e},{:e},{},{}\n",
                p.x.re, p.x.im, p.y.re, p.y.im, s.residual, s.tangency.n, s.tangency.m
            ));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    pub x_min: f64,
    pub x_max: f64,
    /// Step in `log |x|`.
    pub step: f64,
    /// Argument of the ray in the `x` plane.
    pub angle: f64,
    pub tube_radius: Option<f64>,
    pub newton: NewtonOptions,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self { x_min: 10.0, x_max: 1e4, step: 0.05, angle: 0.0, tube_radius: None, newton: NewtonOptions::default() }
    }
}

fn slope_in_y(dy: &Dynamics, lp: &LocusPoint, fd_rel: f64) -> Result<f64> {
    let z = lp.point;
    let t = lp.tangency;
    let h = fd_rel * (1.0 + z.y.norm());
    let up = dy.raw_at(Point::new(z.x, z.y + h), t.n, t.m)?;
    let dn = dy.raw_at(Point::new(z.x, z.y - h), t.n, t.m)?;
    Ok(((up - dn) / (2.0 * h)).norm() / t.scale)
}

/// Follows the component asymptotic to `y = c` inward along a ray in `x`.
pub fn trace_primary_component(dy: &Dynamics, c: Complex64, cfg: &TraceConfig) -> Result<CurveTrace> {
    check_simple_critical(&dy.map.p, c)?;
    if !(cfg.x_min > 0.0 && cfg.x_max > cfg.x_min && cfg.step > 0.0) {
        return Err(HenonError::InvalidInput("need 0 < x_min < x_max and step > 0".into()));
    }
    let tube = cfg.tube_radius.unwrap_or_else(|| default_tube_radius(&dy.map.p));
    let dir = Complex64::from_polar(1.0, cfg.angle);
    let (t_hi, t_lo) = (cfg.x_max.ln(), cfg.x_min.ln());
    let at = |t: f64| dir * t.exp();

    let first = solve_on_vertical(dy, at(t_hi), c, &cfg.newton)?;
    if (first.point.y - c).norm() >= tube {
        return Err(HenonError::LeftTube { at: first.point, radius: tube });
    }
    let mut pts = vec![(t_hi, first)];
    let mut t = t_hi;
    let mut h = cfg.step;
    while t > t_lo {
        let next_t = (t - h).max(t_lo);
        let last = pts.last().unwrap().1.point.y;
        let guess = if pts.len() >= 2 {
            let (tp, prev) = pts[pts.len() - 2];
            last + (last - prev.point.y) * ((next_t - t) / (t - tp))
        } else {
            last
        };
        match solve_on_vertical(dy, at(next_t), guess, &cfg.newton) {
            Ok(lp) if (lp.point.y - guess).norm() < 0.1 * tube => {
                if (lp.point.y - c).norm() >= tube {
                    return Err(HenonError::LeftTube { at: lp.point, radius: tube });
                }
                pts.push((next_t, lp));
                t = next_t;
                h = (1.5 * h).min(cfg.step);
            }
            outcome => {
                h /= 2.0;
                if h < cfg.step * 1e-4 {
                    return Err(match outcome {
                        Ok(lp) => HenonError::LeftTube { at: lp.point, radius: tube },
                        Err(e) => e,
                    });
                }
            }
        }
    }
    pts.reverse();
    let mut samples = Vec::with_capacity(pts.len());
    for (_, lp) in &pts {
        samples.push(TraceSample {
            point: lp.point,
            tangency: lp.tangency,
            residual: lp.residual,
            slope_in_y: slope_in_y(dy, lp, cfg.newton.fd_rel)?,
        });
    }
    let decade = cfg.x_max / 10.0;
    let outer: Vec<f64> = samples
        .iter()
        .filter(|s| s.point.x.norm() >= decade * (1.0 - 1e-12))
        .map(|s| (s.point.y - c).norm())
        .collect();
    let asymptote_ok = outer.windows(2).all(|w| w[1] <= w[0]);
    Ok(CurveTrace {
        label: ComponentLabel { c, k: 0 },
        samples,
        chart: Chart::Standard,
        step: cfg.step,
        tube_radius: tube,
        asymptote_ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentAtInfinity {
    pub c: Complex64,
    /// `dy/du` at `u = 1/x = 0`.
    pub slope: Complex64,
    /// The constant in `p''(c) dy + C du = 0`.
    pub constant: Complex64,
}

/// Slope of the component at `(infinity, c)` by Richardson extrapolation in `u = 1/x`.
pub fn tangent_at_infinity(dy: &Dynamics, c: Complex64) -> Result<TangentAtInfinity> {
    check_simple_critical(&dy.map.p, c)?;
    let opts = NewtonOptions::default();
    let base = 1e3;
    let mut nodes: Vec<(f64, Complex64)> = Vec::new();
    for k in 0..4 {
        let x = base * f64::powi(2.0, k);
        let lp = solve_on_vertical(dy, Complex64::new(x, 0.0), c, &opts)?;
        let u = 1.0 / x;
        nodes.push((u, (lp.point.y - c) / u));
    }
    let slope = neville_at_zero(&nodes);
    let constant = -slope * dy.map.p.eval_second_derivative(c);
    Ok(TangentAtInfinity { c, slope, constant })
}

fn neville_at_zero(nodes: &[(f64, Complex64)]) -> Complex64 {
    let n = nodes.len();
    let mut p: Vec<Complex64> = nodes.iter().map(|n| n.1).collect();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (nodes[i].0, nodes[i + level].0);
            p[i] = (p[i] * (-xj) - p[i + 1] * (-xi)) / (xi - xj);
        }
    }
    p[0]
}

const LEAF_SAMPLES: usize = 32;
const CONTACT_MAX: usize = 6;

/// Order of contact between the two foliations at `z`.
pub fn contact_order(dy: &Dynamics, z: Point, tol: f64) -> Result<u32> {
    let (n, m) = dy.tangency_depths(z)?;
    let base_p = dy.phi_plus_at(z, n)?;
    let base_m = dy.phi_minus_at(z, m)?;
    let radius = 0.05 * (1.0 + z.y.norm()).min(4.0);
    let fail = || HenonError::LeafParameterizationFailed(z);
    let mut vals = Vec::with_capacity(LEAF_SAMPLES);
    let mut x = z.x;
    for j in 0..LEAF_SAMPLES {
        let theta = TAU * j as f64 / LEAF_SAMPLES as f64;
        let y = z.y + Complex64::from_polar(radius, theta);
        let mut ok = false;
        for _ in 0..50 {
            let (ev, g) = dy.gradient_at(Point::new(x, y), Side::Plus, n).map_err(|_| fail())?;
            let e = principal(ev.log_base - base_p.log_base) / ev.sheets();
            let step = e / g[0];
            x -= step;
            if !x.re.is_finite() {
                return Err(fail());
            }
            if step.norm() <= 1e-14 * (1.0 + x.norm()) {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(fail());
        }
        let em = dy.phi_minus_at(Point::new(x, y), m).map_err(|_| fail())?;
        vals.push(principal(em.log_base - base_m.log_base) / em.sheets());
    }
    let coeffs: Vec<f64> = (1..=CONTACT_MAX)
        .map(|k| {
            let s: Complex64 = vals
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -TAU * (k * j) as f64 / LEAF_SAMPLES as f64))
                .sum();
            s.norm() / LEAF_SAMPLES as f64
        })
        .collect();
    let top = coeffs.iter().cloned().fold(0.0, f64::max);
    if !(top > 0.0) {
        return Err(fail());
    }
    let threshold = tol.max(1e-12) * 1e4 * top;
    let k = coeffs.iter().position(|&c| c > threshold).unwrap();
    Ok(k as u32 + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiSolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub fd_rel: f64,
}

impl Default for PsiSolveOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 40, fd_rel: 1e-5 }
    }
}

/// Point on the critical locus near `guess` where `log psi+` equals `target`
/// (on the sheet nearest `target`).
pub fn solve_locus_at_psi(dy: &Dynamics, target: Complex64, guess: Point, opts: &PsiSolveOptions) -> Result<LocusPoint> {
    let fail = |why: String| HenonError::ContinuationFailure(why);
    let mut z = guess;
    let mut scale0 = None;
    for _ in 0..opts.max_iter {
        let np = dy.plus_depth(z, 1.0)?;
        let (n, m) = dy.tangency_depths(z)?;
        let (ev, g) = dy.gradient_at(z, Side::Plus, np)?;
        let e1 = ev.log_near(target) - target;
        let t = dy.tangency_at(z, n, m)?;
        let s0 = *scale0.get_or_insert(t.scale);
        let e2 = t.raw / s0;
        let hx = opts.fd_rel * (1.0 + z.x.norm());
        let hy = opts.fd_rel * (1.0 + z.y.norm());
        let dhx = (dy.raw_at(Point::new(z.x + hx, z.y), n, m)? - dy.raw_at(Point::new(z.x - hx, z.y), n, m)?)
            / (2.0 * hx * s0);
        let dhy = (dy.raw_at(Point::new(z.x, z.y + hy), n, m)? - dy.raw_at(Point::new(z.x, z.y - hy), n, m)?)
            / (2.0 * hy * s0);
        let det = g[0] * dhy - g[1] * dhx;
        if det.norm() == 0.0 || !det.re.is_finite() {
            return Err(fail(format!("singular Jacobian at {z:?}")));
        }
        let dx = (e1 * dhy - g[1] * e2) / det;
        let dyy = (g[0] * e2 - dhx * e1) / det;
        z = Point::new(z.x - dx, z.y - dyy);
        if !z.is_finite() {
            return Err(fail("non-finite iterate".into()));
        }
        if (dx.norm_sqr() + dyy.norm_sqr()).sqrt() <= 1e-13 * (1.0 + z.norm()) {
            break;
        }
    }
    let ev = dy.phi_plus(z)?;
    let e1 = (ev.log_near(target) - target).norm();
    let tangency = dy.tangency_value(z)?;
    let residual = tangency.value.norm();
    if e1 < 1e-11 && residual < opts.tol {
        Ok(LocusPoint { point: z, tangency, residual })
    } else {
        Err(fail(format!("no convergence near target {target}: log error {e1:e}, tangency {residual:e}")))
    }
}

/// Walks in from `|psi+| = 1000` along the ray through `psi`.
pub fn locate_on_component(dy: &Dynamics, c: Complex64, psi: Complex64, opts: &PsiSolveOptions) -> Result<LocusPoint> {
    let (r_target, theta) = (psi.norm(), psi.arg());
    let r0 = r_target.max(1000.0);
    let mut lp = solve_locus_at_psi(dy, Complex64::new(r0.ln(), theta), Point::new(Complex64::from_polar(r0, theta), c), opts)?;
    let (mut lr, lr_end) = (r0.ln(), r_target.ln());
    let mut h = 1.25f64.ln();
    while lr > lr_end {
        let next = (lr - h).max(lr_end);
        let ratio = (next - lr).exp();
        let guess = Point::new(lp.point.x * ratio, lp.point.y);
        match solve_locus_at_psi(dy, Complex64::new(next, theta), guess, opts) {
            Ok(n) => {
                lp = n;
                lr = next;
                h = (h * 1.5).min(1.25f64.ln());
            }
            Err(e) => {
                h /= 2.0;
                if h < 1e-6 {
                    return Err(e);
                }
            }
        }
    }
    Ok(lp)
}

/// Continues a locus point along a path of `log psi+` targets.
pub fn continue_along(
    dy: &Dynamics,
    start: LocusPoint,
    path: impl Fn(f64) -> Complex64,
    steps: usize,
    opts: &PsiSolveOptions,
) -> Result<Vec<LocusPoint>> {
    let mut out = vec![start];
    let mut s = 0.0;
    let base_h = 1.0 / steps as f64;
    let mut h = base_h;
    let mut prev_s = 0.0;
    while s < 1.0 - 1e-15 {
        let next = (s + h).min(1.0);
        let n = out.len();
        let last = out[n - 1].point;
        let guess = if n >= 2 {
            let prev = out[n - 2].point;
            let w = (next - s) / (s - prev_s);
            Point::new(last.x + (last.x - prev.x) * w, last.y + (last.y - prev.y) * w)
        } else {
            let turn = (path(next) - path(s)).exp();
            Point::new(last.x * turn, last.y)
        };
        match solve_locus_at_psi(dy, path(next), guess, opts) {
            Ok(lp) => {
                out.push(lp);
                prev_s = s;
                s = next;
                h = (h * 1.5).min(base_h);
            }
            Err(e) => {
                h /= 2.0;
                if h < base_h * 1e-4 {
                    return Err(e);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleReport {
    pub rho: f64,
    pub samples: usize,
    /// Winding of `psi+` along the loop, from continuity of the chosen root.
    pub winding: i64,
    pub winding_exact: f64,
    /// Winding of the principal value at the common depth.
    pub raw_winding: i64,
    pub depth: usize,
    pub closure: f64,
    pub min_separation: f64,
    pub max_residual: f64,
}

impl CircleReport {
    pub fn passed(&self, degree: usize, closure_tol: f64) -> bool {
        self.winding == 1
            && (self.winding_exact - 1.0).abs() < 1e-6
            && self.raw_winding == (degree as i64).pow(self.depth as u32) * self.winding
            && self.closure < closure_tol
            && self.min_separation > 0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiholomorphismReport {
    pub c: Complex64,
    pub circles: Vec<CircleReport>,
}

impl BiholomorphismReport {
    pub fn passed(&self, degree: usize, closure_tol: f64) -> bool {
        self.circles.iter().all(|c| c.passed(degree, closure_tol))
    }
}

/// Points of the component over the circle `|psi+| = rho`; the last repeats the first angle.
pub fn psi_circle(dy: &Dynamics, c: Complex64, rho: f64, samples: usize, opts: &PsiSolveOptions) -> Result<Vec<LocusPoint>> {
    let start = locate_on_component(dy, c, Complex64::new(rho, 0.0), opts)?;
    let lr = rho.ln();
    continue_along(dy, start, |s| Complex64::new(lr, TAU * s), samples, opts)
}

fn winding_of(values: &[Complex64]) -> f64 {
    values.windows(2).map(|w| (w[1] / w[0]).arg()).sum::<f64>() / TAU
}

pub fn verify_biholomorphism(dy: &Dynamics, c: Complex64, radii: &[f64], samples: usize) -> Result<BiholomorphismReport> {
    let opts = PsiSolveOptions::default();
    let mut circles = Vec::new();
    for &rho in radii {
        if !(rho > 1.0) {
            return Err(HenonError::InvalidInput(format!("radius {rho} must exceed 1")));
        }
        let pts = psi_circle(dy, c, rho, samples, &opts)?;
        let first = pts[0].point;
        let last = pts[pts.len() - 1].point;
        let closure = first.dist(&last);
        let mut psi = Vec::with_capacity(pts.len());
        let mut prev = Complex64::new(rho, 0.0);
        for lp in &pts {
            let v = dy.phi_plus(lp.point)?.root_near(prev);
            psi.push(v);
            prev = v;
        }
        let winding_exact = winding_of(&psi);
        let depth = pts.iter().map(|lp| dy.plus_depth(lp.point, 1.0)).collect::<Result<Vec<_>>>()?.into_iter().max().unwrap_or(0);
        let raw: Vec<Complex64> = pts
            .iter()
            .map(|lp| dy.phi_plus_at(lp.point, depth).map(|e| e.log_base.exp()))
            .collect::<Result<_>>()?;
        let raw_winding = winding_of(&raw).round() as i64;
        let interior = &pts[..pts.len() - 1];
        let mut min_separation = f64::INFINITY;
        for (i, a) in interior.iter().enumerate() {
            for b in &interior[i + 1..] {
                min_separation = min_separation.min(a.point.dist(&b.point));
            }
        }
        let max_residual = pts.iter().map(|lp| lp.residual).fold(0.0, f64::max);
        circles.push(CircleReport {
            rho,
            samples: pts.len(),
            winding: winding_exact.round() as i64,
            winding_exact,
            raw_winding,
            depth,
            closure,
            min_separation,
            max_residual,
        });
    }
    Ok(BiholomorphismReport { c, circles })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub tube_radius: Option<f64>,
    /// Radius of the excluded disk around `p(c)`.
    pub omega_radius: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { tube_radius: None, omega_radius: 0.25 }
    }
}

/// Finds `k` with `f^k(z)` inside a primary tube.
pub fn classify_component(dy: &Dynamics, z: Point, max_k: i32, opts: &ClassifyOptions) -> Result<ComponentLabel> {
    let p = &dy.map.p;
    let tube = opts.tube_radius.unwrap_or_else(|| default_tube_radius(p));
    let cps = distinct_critical_points(p);
    let inside = |w: &Point| -> Option<Complex64> {
        if !w.is_finite() {
            return None;
        }
        cps.iter().copied().find(|c| (w.y - c).norm() < tube && (w.x - p.eval(*c)).norm() > opts.omega_radius)
    };
    let mut fwd = Some(z);
    let mut back = Some(z);
    if let Some(c) = inside(&z) {
        return Ok(ComponentLabel { c, k: 0 });
    }
    for k in 1..=max_k {
        fwd = fwd.map(|w| dy.map.apply(w)).filter(|w| w.is_finite() && w.norm() < dy.limits.overflow_cap);
        if let Some(c) = fwd.as_ref().and_then(inside) {
            return Ok(ComponentLabel { c, k });
        }
        back = back.and_then(|w| dy.map.apply_inverse(w).ok()).filter(|w| w.is_finite() && w.norm() < dy.limits.overflow_cap);
        if let Some(c) = back.as_ref().and_then(inside) {
            return Ok(ComponentLabel { c, k: -k });
        }
    }
    Err(HenonError::NotClassified(max_k))
}
