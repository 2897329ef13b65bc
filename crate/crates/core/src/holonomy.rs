//! Normalized escape coordinates, same-leaf tests and monodromy on a primary component.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HenonError, Result};
use crate::escape::Dynamics;
use crate::exec::Execution;
use crate::locus::{continue_along, LocusPoint, PsiSolveOptions};
use crate::map::Point;

pub const DEFAULT_ROOT_TOL: f64 = 1e-6;
pub const DEFAULT_ORDER_CAP: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiPair {
    pub psi_plus: Complex64,
    pub psi_minus: Complex64,
    pub eta: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootOfUnityWitness {
    pub omega: Complex64,
    /// `n` with `omega^(d^n) = 1`, minimal.
    pub order_exponent: u32,
}

/// Principal `a^{-1/(d-1)}`.
pub fn eta(dy: &Dynamics) -> Result<Complex64> {
    if dy.is_degenerate() {
        return Err(HenonError::DegenerateJacobian);
    }
    Ok((-dy.map.a.ln() / (dy.degree() as f64 - 1.0)).exp())
}

/// `psi+ = phi+` and `psi- = eta * phi-(f^{-1}(z))`.
pub fn psi_pair(dy: &Dynamics, z: Point) -> Result<PsiPair> {
    let eta = eta(dy)?;
    let psi_plus = dy.phi_plus(z)?.value;
    let back = dy.map.apply_inverse(z)?;
    let psi_minus = eta * dy.phi_minus(back)?.value;
    Ok(PsiPair { psi_plus, psi_minus, eta })
}

/// Nearest `d^n`-th root of unity to `ratio` with `n <= cap`, if within `tol`.
pub fn root_of_unity_witness(ratio: Complex64, degree: usize, tol: f64, cap: u32) -> Option<RootOfUnityWitness> {
    let d = degree as u64;
    let mut order = 1u64;
    for n in 0..=cap {
        let m = (ratio.arg() * order as f64 / TAU).round() as i64;
        let omega = Complex64::from_polar(1.0, TAU * m as f64 / order as f64);
        if (ratio - omega).norm() < tol {
            return Some(RootOfUnityWitness { omega, order_exponent: n });
        }
        order *= d;
    }
    None
}

fn common_ratio(vals: [crate::escape::EscapeValue; 2]) -> Complex64 {
    (vals[1].log_value() - vals[0].log_value()).exp()
}

/// Whether `z1` and `z2` lie on one leaf of the `phi+` foliation, up to a root of unity.
pub fn same_leaf_plus(dy: &Dynamics, z1: Point, z2: Point, tol: f64, cap: u32) -> Option<RootOfUnityWitness> {
    let k = dy.plus_depth(z1, 1.0).ok()?.max(dy.plus_depth(z2, 1.0).ok()?);
    let a = dy.phi_plus_at(z1, k).ok()?;
    let b = dy.phi_plus_at(z2, k).ok()?;
    root_of_unity_witness(common_ratio([a, b]), dy.degree(), tol, cap)
}

/// The `psi-` counterpart of [`same_leaf_plus`].
pub fn same_leaf_minus(dy: &Dynamics, z1: Point, z2: Point, tol: f64, cap: u32) -> Option<RootOfUnityWitness> {
    let w1 = dy.map.apply_inverse(z1).ok()?;
    let w2 = dy.map.apply_inverse(z2).ok()?;
    let k = dy.minus_depth(w1, 1.0).ok()?.max(dy.minus_depth(w2, 1.0).ok()?);
    let a = dy.phi_minus_at(w1, k).ok()?;
    let b = dy.phi_minus_at(w2, k).ok()?;
    root_of_unity_witness(common_ratio([a, b]), dy.degree(), tol, cap)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonodromyOrbit {
    pub psi: Complex64,
    /// Entry `j` sits over `psi * exp(2 pi i j / d^n)`.
    pub points: Vec<LocusPoint>,
}

/// Points of the component through `z` over `omega * psi+(z)` for every `d^n`-th root `omega`.
pub fn monodromy_orbit(dy: &Dynamics, z: Point, n: u32, exec: Execution) -> Result<MonodromyOrbit> {
    let opts = PsiSolveOptions::default();
    let ev = dy.phi_plus(z)?;
    let base = ev.log_value();
    let start = crate::locus::solve_locus_at_psi(dy, base, z, &opts)?;
    let count = (dy.degree() as u64).pow(n) as usize;
    let arcs = exec.map(count, |j| -> Result<LocusPoint> {
        if j == 0 {
            return Ok(start);
        }
        let turn = TAU * j as f64 / count as f64;
        let steps = ((64.0 * turn / TAU).ceil() as usize).max(8);
        let path = continue_along(dy, start, |s| base + Complex64::new(0.0, turn * s), steps, &opts)?;
        Ok(*path.last().unwrap())
    });
    let points = arcs.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(MonodromyOrbit { psi: base.exp(), points })
}

/// `count` pairs `(psi+, psi-)` on the component of `c` at equally spaced angles of
/// the circle `|psi+| = radius`, starting at angle 0.
pub fn transition_samples(dy: &Dynamics, c: Complex64, radius: f64, count: usize) -> Result<Vec<PsiPair>> {
    let opts = PsiSolveOptions::default();
    let mut lp = crate::locus::locate_on_component(dy, c, Complex64::new(radius, 0.0), &opts)?;
    let turn = Complex64::from_polar(1.0, TAU / count as f64);
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        if j > 0 {
            let target = Complex64::new(radius.ln(), TAU * j as f64 / count as f64);
            let guess = Point::new(lp.point.x * turn, lp.point.y);
            lp = crate::locus::solve_locus_at_psi(dy, target, guess, &opts)?;
        }
        out.push(psi_pair(dy, lp.point)?);
    }
    Ok(out)
}
