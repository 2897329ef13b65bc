//! Rectangular samples of `g+`, `g-` or the tangency value over a real slice.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::escape::{Dynamics, Side};
use crate::exec::Execution;
use crate::map::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridQuantity {
    GreenPlus,
    GreenMinus,
    /// Modulus of the normalized tangency value; NaN where either side fails.
    Tangency,
}

/// Row 0 is the top edge `y = y_max`; columns run from `x_min` to `x_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub width: usize,
    pub height: usize,
}

impl GridSpec {
    pub fn x_at(&self, col: usize) -> f64 {
        lerp(self.x_min, self.x_max, col, self.width)
    }

    pub fn y_at(&self, row: usize) -> f64 {
        lerp(self.y_max, self.y_min, row, self.height)
    }
}

fn lerp(a: f64, b: f64, i: usize, n: usize) -> f64 {
    if n <= 1 {
        a
    } else {
        a + (b - a) * i as f64 / (n - 1) as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    pub spec: GridSpec,
    pub quantity: GridQuantity,
    /// Row-major.
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSidecar {
    pub width: usize,
    pub height: usize,
    pub quantity: GridQuantity,
    pub min: f64,
    pub max: f64,
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
    /// Pixels written as 0 because the value was not finite.
    pub non_finite: usize,
    pub polynomial: String,
    pub a: [f64; 2],
}

fn sample(dy: &Dynamics, q: GridQuantity, z: Point) -> f64 {
    match q {
        GridQuantity::GreenPlus => dy.green(z, Side::Plus).value,
        GridQuantity::GreenMinus => dy.green(z, Side::Minus).value,
        GridQuantity::Tangency => dy.tangency_value(z).map(|t| t.value.norm()).unwrap_or(f64::NAN),
    }
}

/// Rows are evaluated independently under `exec`.
pub fn evaluate_grid(dy: &Dynamics, spec: GridSpec, quantity: GridQuantity, exec: Execution) -> GridField {
    let rows = exec.map(spec.height, |r| {
        let y = Complex64::new(spec.y_at(r), 0.0);
        (0..spec.width)
            .map(|c| sample(dy, quantity, Point::new(Complex64::new(spec.x_at(c), 0.0), y)))
            .collect::<Vec<f64>>()
    });
    GridField { spec, quantity, values: rows.concat() }
}

impl GridField {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.spec.width + col]
    }

    /// Min and max over finite values; `(0, 0)` when there are none.
    pub fn range(&self) -> (f64, f64) {
        let finite = self.values.iter().copied().filter(|v| v.is_finite());
        let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if lo > hi {
            (0.0, 0.0)
        } else {
            (lo, hi)
        }
    }

    pub fn sidecar(&self, dy: &Dynamics) -> GridSidecar {
        let (min, max) = self.range();
        GridSidecar {
            width: self.spec.width,
            height: self.spec.height,
            quantity: self.quantity,
            min,
            max,
            x_range: [self.spec.x_min, self.spec.x_max],
            y_range: [self.spec.y_min, self.spec.y_max],
            non_finite: self.values.iter().filter(|v| !v.is_finite()).count(),
            polynomial: dy.map.p.to_string(),
            a: [dy.map.a.re, dy.map.a.im],
        }
    }

    /// Binary P5, maxval 65535, big-endian samples scaled affinely from `[min, max]`.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> io::Result<()> {
        let (min, max) = self.range();
        let span = max - min;
        write!(out, "P5\n{} {}\n65535\n", self.spec.width, self.spec.height)?;
        let mut buf = Vec::with_capacity(2 * self.values.len());
        for v in &self.values {
            let level = if !v.is_finite() || span <= 0.0 { 0 } else { (((v - min) / span) * 65535.0).round() as u16 };
            buf.extend_from_slice(&level.to_be_bytes());
        }
        out.write_all(&buf)
    }

    /// `x,y,value` with one line per sample.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,y,value")?;
        for r in 0..self.spec.height {
            let y = self.spec.y_at(r);
            for c in 0..self.spec.width {
                writeln!(out, "{},{},{}", self.spec.x_at(c), y, self.get(r, c))?;
            }
        }
        Ok(())
    }
}
