use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dual::Scalar;
use crate::error::{HenonError, Result};
use crate::poly::Polynomial;

pub const DEFAULT_OVERFLOW_CAP: f64 = 1e150;
pub const DEFAULT_R_SMALL: f64 = 0.5;
pub const DEFAULT_R_LARGE: f64 = 0.125;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: Complex64,
    pub y: Complex64,
}

impl Point {
    pub fn new(x: Complex64, y: Complex64) -> Self {
        Self { x, y }
    }

    pub fn real(x: f64, y: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), Complex64::new(y, 0.0))
    }

    pub fn dist(&self, o: &Point) -> f64 {
        ((self.x - o.x).norm_sqr() + (self.y - o.y).norm_sqr()).sqrt()
    }

    pub fn norm(&self) -> f64 {
        (self.x.norm_sqr() + self.y.norm_sqr()).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        [self.x.re, self.x.im, self.y.re, self.y.im].iter().all(|v| v.is_finite())
    }
}

/// `f(x, y) = (p(x) - a y, x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HenonMap {
    pub p: Polynomial,
    pub a: Complex64,
}

impl HenonMap {
    pub fn new(p: Polynomial, a: Complex64) -> Self {
        Self { p, a }
    }

    pub fn real(p: Polynomial, a: f64) -> Self {
        Self::new(p, Complex64::new(a, 0.0))
    }

    pub fn degree(&self) -> usize {
        self.p.degree()
    }

    pub fn apply(&self, z: Point) -> Point {
        let (x, y) = self.step(z.x, z.y);
        Point::new(x, y)
    }

    pub fn apply_inverse(&self, z: Point) -> Result<Point> {
        if self.a == Complex64::new(0.0, 0.0) {
            return Err(HenonError::DegenerateJacobian);
        }
        let (x, y) = self.step_back(z.x, z.y);
        Ok(Point::new(x, y))
    }

    pub fn step<T: Scalar>(&self, x: T, y: T) -> (T, T) {
        (self.p.eval(x) - y * self.a, x)
    }

    /// Caller guarantees `a != 0`.
    pub fn step_back<T: Scalar>(&self, x: T, y: T) -> (T, T) {
        (y, (self.p.eval(y) - x) * (1.0 / self.a))
    }

    pub fn iterate(&self, z: Point, n: i64) -> Result<Point> {
        self.iterate_capped(z, n, DEFAULT_OVERFLOW_CAP)
    }

    pub fn iterate_capped(&self, z: Point, n: i64, cap: f64) -> Result<Point> {
        if n < 0 && self.a == Complex64::new(0.0, 0.0) {
            return Err(HenonError::DegenerateJacobian);
        }
        let mut w = z;
        for k in 0..n.unsigned_abs() as usize {
            w = if n > 0 { self.apply(w) } else { self.apply_inverse(w)? };
            if !(w.x.norm() <= cap && w.y.norm() <= cap) {
                return Err(HenonError::Overflow { steps: k + 1, cap });
            }
        }
        Ok(w)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainParams {
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub alpha: f64,
}

impl DomainParams {
    /// `(1 - r)^{-1/(d-1)}`.
    pub fn bound_b(&self, d: usize) -> f64 {
        (1.0 - self.r).powf(-1.0 / (d as f64 - 1.0))
    }
}

const ALPHA_GRID: f64 = 1e-3;
const ALPHA_CAP: f64 = 1e8;

/// Left sides of the two escape inequalities after dividing by `|y|^d`.
/// Both are strictly decreasing in `rho`, so a single crossing is the threshold.
fn escape_margins(lower: &[f64], big_r: f64, rho: f64) -> (f64, f64) {
    let d = lower.len() as i32;
    let q: f64 = lower.iter().enumerate().map(|(j, c)| c * rho.powi(j as i32 - d)).sum();
    let tail = rho.powi(1 - d);
    (q + (big_r + 1.0) * tail, q + (2.0 * big_r + 1.0) * tail)
}

pub fn domain_params(p: &Polynomial, r: f64, big_r: f64) -> Result<DomainParams> {
    if !(r > 0.0 && r < 1.0) || !(big_r > 0.0) || !big_r.is_finite() {
        return Err(HenonError::InvalidInput(format!("need 0 < r < 1 and R > 0, got r={r}, R={big_r}")));
    }
    let lower = p.lower_abs();
    let holds = |rho: f64| {
        let (m1, m2) = escape_margins(&lower, big_r, rho);
        m1 < r && m2 < 1.0
    };
    let mut hi = 1.0;
    while !holds(hi) {
        hi *= 2.0;
        if hi > ALPHA_CAP {
            return Err(HenonError::NoAlphaFound(ALPHA_CAP));
        }
    }
    let (mut lo_k, mut hi_k) = (0u64, (hi / ALPHA_GRID).ceil() as u64);
    while hi_k - lo_k > 1 {
        let mid = (lo_k + hi_k) / 2;
        if holds(mid as f64 * ALPHA_GRID) {
            hi_k = mid;
        } else {
            lo_k = mid;
        }
    }
    let alpha = 1.05 * hi_k as f64 * ALPHA_GRID;
    let dp = DomainParams { r, big_r, alpha };
    if !circle_check(p, &dp) {
        return Err(HenonError::NoAlphaFound(alpha));
    }
    Ok(dp)
}

fn circle_check(p: &Polynomial, dp: &DomainParams) -> bool {
    let d = p.degree() as i32;
    (0..720).all(|k| {
        let y = Complex64::from_polar(dp.alpha, k as f64 * std::f64::consts::TAU / 720.0);
        let n = y.norm();
        let lhs = (p.eval_lower(y) / y.powi(d)).norm() + (dp.big_r + 1.0) / n.powi(d - 1);
        lhs < dp.r && p.eval(y).norm() > (2.0 * dp.big_r + 1.0) * n
    })
}

pub fn in_v_plus(z: &Point, dp: &DomainParams) -> bool {
    let ax = z.x.norm();
    ax > z.y.norm() && ax > dp.alpha
}

pub fn in_v_minus(z: &Point, dp: &DomainParams) -> bool {
    let ay = z.y.norm();
    ay > z.x.norm() && ay > dp.alpha
}
