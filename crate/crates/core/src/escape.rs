//! Escape functions at infinity and the Green's functions built from them.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dual::{Dual2, Scalar};
use crate::error::{HenonError, Result};
use crate::map::{domain_params, in_v_minus, in_v_plus, DomainParams, HenonMap, Point};
use crate::map::{DEFAULT_OVERFLOW_CAP, DEFAULT_R_LARGE, DEFAULT_R_SMALL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    /// Target bound on the log error of a truncated product.
    pub tol: f64,
    pub max_iter: usize,
    pub overflow_cap: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 200, overflow_cap: DEFAULT_OVERFLOW_CAP }
    }
}

/// A map together with its escape radius and evaluation limits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dynamics {
    pub map: HenonMap,
    pub domain: DomainParams,
    pub limits: Limits,
}

impl Dynamics {
    pub fn new(map: HenonMap) -> Result<Self> {
        Self::with_radii(map, DEFAULT_R_SMALL, DEFAULT_R_LARGE)
    }

    pub fn with_radii(map: HenonMap, r: f64, big_r: f64) -> Result<Self> {
        let domain = domain_params(&map.p, r, big_r)?;
        if !(map.a.norm() < big_r) {
            return Err(HenonError::InvalidInput(format!("|a| = {} is not below R = {big_r}", map.a.norm())));
        }
        Ok(Self { map, domain, limits: Limits::default() })
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn degree(&self) -> usize {
        self.map.degree()
    }

    pub fn is_degenerate(&self) -> bool {
        self.map.a == Complex64::new(0.0, 0.0)
    }

    /// Number of product factors needed for a log error below `tol`.
    pub fn terms_for(&self, tol: f64) -> usize {
        let d = self.degree() as f64;
        let num = -(1.0 - self.domain.r).ln() / ((1.0 - 1.0 / d) * tol);
        (num.ln() / d.ln()).ceil().max(1.0) as usize
    }

    /// Bound on the log error after `k` factors, for any point of the escape region.
    pub fn formula_tail(&self, k: usize) -> f64 {
        let d = self.degree() as f64;
        -(1.0 - self.domain.r).ln() * d.powi(-(k as i32)) / (1.0 - 1.0 / d)
    }

    fn cutoff(&self) -> f64 {
        1e100f64.min(10f64.powf(250.0 / self.degree() as f64))
    }

    /// Smallest `k` with `f^k(z)` in V+ and `|x| > margin * alpha`.
    pub fn plus_depth(&self, z: Point, margin: f64) -> Result<usize> {
        let mut w = z;
        for k in 0..=self.limits.max_iter {
            if in_v_plus(&w, &self.domain) && w.x.norm() > margin * self.domain.alpha {
                return Ok(k);
            }
            w = self.map.apply(w);
            if !w.is_finite() || w.x.norm() > self.limits.overflow_cap {
                return Err(HenonError::Overflow { steps: k + 1, cap: self.limits.overflow_cap });
            }
        }
        Err(HenonError::NotInEscapeRegion(self.limits.max_iter))
    }

    /// Smallest `k` with `f^{-k}(z)` in V- and `|y| > margin * alpha`. Needs `a != 0`.
    pub fn minus_depth(&self, z: Point, margin: f64) -> Result<usize> {
        if self.is_degenerate() {
            return Err(HenonError::DegenerateJacobian);
        }
        let mut w = z;
        for k in 0..=self.limits.max_iter {
            if in_v_minus(&w, &self.domain) && w.y.norm() > margin * self.domain.alpha {
                return Ok(k);
            }
            w = self.map.apply_inverse(w)?;
            if !w.is_finite() || w.y.norm() > self.limits.overflow_cap {
                return Err(HenonError::Overflow { steps: k + 1, cap: self.limits.overflow_cap });
            }
        }
        Err(HenonError::NotInEscapeRegion(self.limits.max_iter))
    }
}

/// A value of `phi` as a `d^k`-th root of its value `W` at the depth-k iterate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EscapeValue {
    pub value: Complex64,
    /// Principal log of `W`.
    pub log_base: Complex64,
    pub depth: usize,
    pub degree: usize,
    pub truncation_terms: usize,
    pub tail_bound: f64,
    /// Largest `|s_k|` met in the product.
    pub max_factor: f64,
}

impl EscapeValue {
    pub fn sheets(&self) -> f64 {
        (self.degree as f64).powi(self.depth as i32)
    }

    /// Principal-branch log of `value`.
    pub fn log_value(&self) -> Complex64 {
        self.log_base / self.sheets()
    }

    /// The log of the `d^k`-th root of `W` whose imaginary part is nearest `target.im`.
    pub fn log_near(&self, target: Complex64) -> Complex64 {
        let n = self.sheets();
        let base = self.log_value();
        let j = ((target.im - base.im) * n / TAU).round();
        Complex64::new(base.re, base.im + j * TAU / n)
    }

    /// The `d^k`-th root of `W` nearest `target`.
    pub fn root_near(&self, target: Complex64) -> Complex64 {
        let n = self.sheets();
        let base = self.log_value();
        let turn = (target / base.exp()).arg();
        let j = (turn * n / TAU).round();
        Complex64::new(base.re, base.im + j * TAU / n).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreenValue {
    pub value: f64,
    pub side: Side,
    pub interior_flag: bool,
    pub cap: usize,
}

pub(crate) fn principal(z: Complex64) -> Complex64 {
    let mut im = z.im.rem_euclid(TAU);
    if im > PI {
        im -= TAU;
    }
    Complex64::new(z.re, im)
}

struct Product<T> {
    lead: T,
    corr: T,
    tail: f64,
    max_factor: f64,
}

impl Dynamics {
    fn plus_product<T: Scalar>(&self, mut x: T, mut y: T, terms: usize) -> Product<T> {
        let d = self.degree();
        let df = d as f64;
        let cutoff = self.cutoff();
        let lead = x;
        let mut corr = T::constant(Complex64::new(0.0, 0.0));
        let mut max_factor = 0.0f64;
        let mut used = 0;
        let mut weight = 1.0;
        for k in 1..=terms {
            if x.value().norm() > cutoff {
                break;
            }
            let s = (self.map.p.eval_lower(x) - y * self.map.a) / x.powu(d as u32);
            max_factor = max_factor.max(s.value().norm());
            weight /= df;
            corr = corr + (s + Complex64::new(1.0, 0.0)).ln() * Complex64::new(weight, 0.0);
            let (nx, ny) = self.map.step(x, y);
            x = nx;
            y = ny;
            used = k;
        }
        let sb = self.factor_bound(x.value().norm(), self.map.a.norm());
        let tail = self.tail_from(sb, used).min(self.formula_tail(terms));
        Product { lead, corr, tail, max_factor }
    }

    fn minus_product<T: Scalar>(&self, mut x: T, mut y: T, terms: usize) -> Product<T> {
        let d = self.degree();
        let df = d as f64;
        let cutoff = self.cutoff();
        let lead = y;
        let mut corr = T::constant(Complex64::new(0.0, 0.0));
        let mut max_factor = 0.0f64;
        let mut used = 0;
        let mut weight = 1.0;
        for k in 1..=terms {
            if y.value().norm() > cutoff {
                break;
            }
            let s = (self.map.p.eval_lower(y) - x) / y.powu(d as u32);
            max_factor = max_factor.max(s.value().norm());
            weight /= df;
            corr = corr + (s + Complex64::new(1.0, 0.0)).ln() * Complex64::new(weight, 0.0);
            let (nx, ny) = self.map.step_back(x, y);
            x = nx;
            y = ny;
            used = k;
        }
        let sb = self.factor_bound(y.value().norm(), 1.0);
        let tail = self.tail_from(sb, used).min(self.formula_tail(terms));
        Product { lead, corr, tail, max_factor }
    }

    /// Bound on every later `|s|` once the escaping coordinate has modulus `big`.
    fn factor_bound(&self, big: f64, cross: f64) -> f64 {
        let d = self.degree() as i32;
        let q: f64 = self.map.p.lower_abs().iter().enumerate().map(|(j, c)| c * big.powi(j as i32 - d)).sum();
        q + cross * big.powi(1 - d)
    }

    fn tail_from(&self, sb: f64, used: usize) -> f64 {
        if !(sb < 1.0) {
            return f64::INFINITY;
        }
        let d = self.degree() as f64;
        -(1.0 - sb).ln() * d.powi(-(used as i32 + 1)) / (1.0 - 1.0 / d)
    }

    fn plus_eval<T: Scalar>(&self, x: T, y: T, depth: usize, tol: f64) -> Result<(EscapeValue, T)> {
        let (mut x, mut y) = (x, y);
        for _ in 0..depth {
            let (nx, ny) = self.map.step(x, y);
            x = nx;
            y = ny;
        }
        let w = Point::new(x.value(), y.value());
        if !in_v_plus(&w, &self.domain) {
            return Err(HenonError::NotInEscapeRegion(depth));
        }
        let terms = self.terms_for(tol);
        let prod = self.plus_product(x, y, terms);
        let log = prod.lead.ln() + prod.corr;
        let mut ev = self.finish(log.value(), depth, terms, prod.tail, prod.max_factor);
        if depth == 0 {
            ev.value = prod.lead.value() * prod.corr.value().exp();
        }
        Ok((ev, log))
    }

    fn minus_eval<T: Scalar>(&self, x: T, y: T, depth: usize, tol: f64) -> Result<(EscapeValue, T)> {
        if self.is_degenerate() {
            let v = self.map.p.eval(y) - x;
            if v.value() == Complex64::new(0.0, 0.0) {
                return Err(HenonError::OnDegenerateCurve);
            }
            let log = v.ln();
            let mut ev = self.finish(log.value(), 0, 0, 0.0, 0.0);
            let d = self.degree() as f64;
            ev.depth = 1;
            ev.value = (principal(log.value()) / d).exp();
            return Ok((ev, log));
        }
        let (mut x, mut y) = (x, y);
        for _ in 0..depth {
            let (nx, ny) = self.map.step_back(x, y);
            x = nx;
            y = ny;
        }
        let w = Point::new(x.value(), y.value());
        if !in_v_minus(&w, &self.domain) {
            return Err(HenonError::NotInEscapeRegion(depth));
        }
        let terms = self.terms_for(tol);
        let prod = self.minus_product(x, y, terms);
        let d = self.degree() as f64;
        let e_k = (d.powi(depth as i32) - 1.0) / (d - 1.0);
        let shift = self.map.a.ln() * e_k;
        let log = prod.lead.ln() + prod.corr + shift;
        let mut ev = self.finish(log.value(), depth, terms, prod.tail, prod.max_factor);
        if depth == 0 {
            ev.value = prod.lead.value() * prod.corr.value().exp();
        }
        Ok((ev, log))
    }

    fn finish(&self, log: Complex64, depth: usize, terms: usize, tail: f64, max_factor: f64) -> EscapeValue {
        let log_base = principal(log);
        let mut ev = EscapeValue {
            value: Complex64::new(0.0, 0.0),
            log_base,
            depth,
            degree: self.degree(),
            truncation_terms: terms,
            tail_bound: tail,
            max_factor,
        };
        ev.value = ev.log_value().exp();
        ev
    }

    fn depth_for(&self, z: Point, side: Side, margin: f64) -> Result<usize> {
        match side {
            Side::Plus => self.plus_depth(z, margin),
            Side::Minus if self.is_degenerate() => Ok(0),
            Side::Minus => self.minus_depth(z, margin),
        }
    }

    pub fn phi_plus(&self, z: Point) -> Result<EscapeValue> {
        self.phi_plus_tol(z, self.limits.tol)
    }

    pub fn phi_plus_tol(&self, z: Point, tol: f64) -> Result<EscapeValue> {
        let k = self.plus_depth(z, 1.0)?;
        Ok(self.plus_eval(z.x, z.y, k, tol)?.0)
    }

    /// `phi+` through the iterate `f^k(z)`, which must lie in V+.
    pub fn phi_plus_at(&self, z: Point, k: usize) -> Result<EscapeValue> {
        Ok(self.plus_eval(z.x, z.y, k, self.limits.tol)?.0)
    }

    pub fn phi_minus(&self, z: Point) -> Result<EscapeValue> {
        self.phi_minus_tol(z, self.limits.tol)
    }

    pub fn phi_minus_tol(&self, z: Point, tol: f64) -> Result<EscapeValue> {
        let k = self.depth_for(z, Side::Minus, 1.0)?;
        Ok(self.minus_eval(z.x, z.y, k, tol)?.0)
    }

    /// `phi-` through `f^{-k}(z)`, which must lie in V-.
    pub fn phi_minus_at(&self, z: Point, k: usize) -> Result<EscapeValue> {
        Ok(self.minus_eval(z.x, z.y, k, self.limits.tol)?.0)
    }

    pub fn phi(&self, z: Point, side: Side) -> Result<EscapeValue> {
        match side {
            Side::Plus => self.phi_plus(z),
            Side::Minus => self.phi_minus(z),
        }
    }

    /// Value and the gradient of its log in `(x, y)`.
    pub fn phi_with_gradient(&self, z: Point, side: Side) -> Result<(EscapeValue, [Complex64; 2])> {
        let k = self.depth_for(z, side, 1.0)?;
        self.gradient_at(z, side, k)
    }

    pub fn gradient_at(&self, z: Point, side: Side, depth: usize) -> Result<(EscapeValue, [Complex64; 2])> {
        let (x, y) = (Dual2::seed_x(z.x), Dual2::seed_y(z.y));
        let tol = self.limits.tol;
        let (ev, log) = match side {
            Side::Plus => self.plus_eval(x, y, depth, tol)?,
            Side::Minus => self.minus_eval(x, y, depth, tol)?,
        };
        let n = ev.sheets();
        Ok((ev, [log.dx / n, log.dy / n]))
    }

    pub fn green(&self, z: Point, side: Side) -> GreenValue {
        let cap = self.limits.max_iter;
        let d = self.degree() as f64;
        let inside = |value| GreenValue { value, side, interior_flag: true, cap };
        let outside = |value| GreenValue { value, side, interior_flag: false, cap };
        match side {
            Side::Plus => match self.plus_depth(z, 1.0) {
                Ok(k) => match self.plus_eval(z.x, z.y, k, self.limits.tol) {
                    Ok((ev, _)) => outside(ev.log_base.re / ev.sheets()),
                    Err(_) => inside(0.0),
                },
                Err(_) => inside(0.0),
            },
            Side::Minus => {
                let floor = self.map.a.norm().ln() / (d - 1.0);
                if self.is_degenerate() {
                    let v = (self.map.p.eval(z.y) - z.x).norm();
                    return if v == 0.0 { inside(floor) } else { outside(v.ln() / d) };
                }
                match self.minus_depth(z, 1.0).and_then(|k| self.minus_eval(z.x, z.y, k, self.limits.tol)) {
                    Ok((ev, _)) => outside(ev.log_base.re / ev.sheets()),
                    Err(_) => inside(floor),
                }
            }
        }
    }
}
