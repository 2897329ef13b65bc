//! Winding numbers of nonvanishing loops by angle accumulation.

use std::f64::consts::{FRAC_PI_3, TAU};

use num_complex::Complex64;

use crate::error::{HenonError, Result};
use crate::exec::Execution;

const MAX_SPLIT_DEPTH: u32 = 24;

/// Winding of `field(t)` for `t` in `[0, 1]`, with `field(1) = field(0)`.
///
/// Starts from `mesh` equal steps and bisects any step whose angle increment
/// reaches `pi/3`. `floor` is the modulus below which the field counts as
/// vanishing.
pub fn winding_number<F>(field: F, mesh: usize, floor: f64, exec: Execution) -> Result<(i64, f64)>
where
    F: Fn(f64) -> Result<Complex64> + Sync + Send,
{
    let mesh = mesh.max(4);
    let vals: Vec<Result<Complex64>> = exec.map(mesh + 1, |i| field(i as f64 / mesh as f64));
    let vals: Vec<Complex64> = vals.into_iter().collect::<Result<_>>()?;
    let check = |t: f64, v: Complex64| {
        if v.norm() <= floor || !v.re.is_finite() {
            Err(HenonError::GradientVanishesOnLoop(Complex64::new(t, 0.0)))
        } else {
            Ok(v)
        }
    };
    let mut total = 0.0;
    for i in 0..mesh {
        let (t0, t1) = (i as f64 / mesh as f64, (i + 1) as f64 / mesh as f64);
        let v0 = check(t0, vals[i])?;
        let v1 = check(t1, vals[i + 1])?;
        total += refine(&field, t0, v0, t1, v1, floor, 0)?;
    }
    let turns = total / TAU;
    Ok((turns.round() as i64, turns))
}

fn refine<F>(field: &F, t0: f64, v0: Complex64, t1: f64, v1: Complex64, floor: f64, depth: u32) -> Result<f64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let inc = (v1 / v0).arg();
    if inc.abs() < FRAC_PI_3 {
        return Ok(inc);
    }
    if depth >= MAX_SPLIT_DEPTH {
        return Err(HenonError::GradientVanishesOnLoop(Complex64::new(t0, t1)));
    }
    let tm = 0.5 * (t0 + t1);
    let vm = field(tm)?;
    if vm.norm() <= floor || !vm.re.is_finite() {
        return Err(HenonError::GradientVanishesOnLoop(Complex64::new(tm, 0.0)));
    }
    Ok(refine(field, t0, v0, tm, vm, floor, depth + 1)? + refine(field, tm, vm, t1, v1, floor, depth + 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(t: f64) -> Complex64 {
        Complex64::from_polar(1.0, TAU * t)
    }

    #[test]
    fn powers_of_the_circle() {
        for k in -3i32..=3 {
            let (w, _) = winding_number(|t| Ok(circle(t).powi(k)), 8, 1e-12, Execution::Sequential).unwrap();
            assert_eq!(w, k as i64);
        }
    }

    #[test]
    fn coarse_mesh_is_refined() {
        let (w, exact) = winding_number(|t| Ok(circle(t).powi(3)), 4, 1e-12, Execution::Parallel).unwrap();
        assert_eq!(w, 3);
        assert!((exact - 3.0).abs() < 1e-9);
    }

    #[test]
    fn zero_on_loop_detected() {
        let f = |t: f64| Ok(circle(t) - Complex64::new(1.0, 0.0));
        assert!(matches!(
            winding_number(f, 16, 1e-9, Execution::Sequential),
            Err(HenonError::GradientVanishesOnLoop(_))
        ));
    }
}
