//! Forward-mode derivatives in two complex directions.
//!
//! Everything that is iterated (the map, the telescoping products) is written
//! against [`Scalar`], so the same code runs on plain `Complex64` and on
//! [`Dual2`], which carries the partials in `x` and `y` alongside the value.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<Complex64, Output = Self>
    + Mul<Complex64, Output = Self>
{
    fn constant(c: Complex64) -> Self;
    fn value(&self) -> Complex64;
    fn ln(self) -> Self;

    fn powu(self, n: u32) -> Self {
        let mut acc = Self::constant(Complex64::new(1.0, 0.0));
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        acc
    }
}

impl Scalar for Complex64 {
    fn constant(c: Complex64) -> Self {
        c
    }
    fn value(&self) -> Complex64 {
        *self
    }
    fn ln(self) -> Self {
        Complex64::ln(self)
    }
}

/// Value with partials along `x` and `y`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual2 {
    pub v: Complex64,
    pub dx: Complex64,
    pub dy: Complex64,
}

impl Dual2 {
    const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
    const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

    pub fn new(v: Complex64, dx: Complex64, dy: Complex64) -> Self {
        Self { v, dx, dy }
    }

    pub fn seed_x(v: Complex64) -> Self {
        Self::new(v, Self::ONE, Self::ZERO)
    }

    pub fn seed_y(v: Complex64) -> Self {
        Self::new(v, Self::ZERO, Self::ONE)
    }

    pub fn grad(&self) -> [Complex64; 2] {
        [self.dx, self.dy]
    }

    fn chain(self, v: Complex64, deriv: Complex64) -> Self {
        Self::new(v, self.dx * deriv, self.dy * deriv)
    }
}

impl Add for Dual2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.v + o.v, self.dx + o.dx, self.dy + o.dy)
    }
}

impl Sub for Dual2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.v - o.v, self.dx - o.dx, self.dy - o.dy)
    }
}

impl Mul for Dual2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.v * o.v,
            self.dx * o.v + self.v * o.dx,
            self.dy * o.v + self.v * o.dy,
        )
    }
}

impl Div for Dual2 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = Self::ONE / o.v;
        let q = self.v * inv;
        Self::new(q, (self.dx - q * o.dx) * inv, (self.dy - q * o.dy) * inv)
    }
}

impl Neg for Dual2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.v, -self.dx, -self.dy)
    }
}

impl Add<Complex64> for Dual2 {
    type Output = Self;
    fn add(self, c: Complex64) -> Self {
        Self::new(self.v + c, self.dx, self.dy)
    }
}

impl Mul<Complex64> for Dual2 {
    type Output = Self;
    fn mul(self, c: Complex64) -> Self {
        Self::new(self.v * c, self.dx * c, self.dy * c)
    }
}

impl Scalar for Dual2 {
    fn constant(c: Complex64) -> Self {
        Self::new(c, Self::ZERO, Self::ZERO)
    }
    fn value(&self) -> Complex64 {
        self.v
    }
    fn ln(self) -> Self {
        self.chain(self.v.ln(), Self::ONE / self.v)
    }
    fn powu(self, n: u32) -> Self {
        if n == 0 {
            return Self::constant(Self::ONE);
        }
        let lower = self.v.powu(n - 1);
        self.chain(lower * self.v, lower * n as f64)
    }
}
