//! Truncated power series in one formal variable with `MultiPoly` coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::SeriesError;
use crate::poly::{MultiPoly, Var};

/// `coeffs[k]` multiplies `var^k`; always `order + 1` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    var: String,
    order: usize,
    coeffs: Vec<MultiPoly>,
}

fn int(k: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

impl TruncSeries {
    pub fn new(var: &str, order: usize, mut coeffs: Vec<MultiPoly>) -> Self {
        coeffs.resize(order + 1, MultiPoly::zero());
        TruncSeries {
            var: var.to_string(),
            order,
            coeffs,
        }
    }

    pub fn zero(var: &str, order: usize) -> Self {
        TruncSeries::new(var, order, Vec::new())
    }

    pub fn constant(var: &str, order: usize, c: MultiPoly) -> Self {
        TruncSeries::new(var, order, vec![c])
    }

    pub fn one(var: &str, order: usize) -> Self {
        TruncSeries::constant(var, order, MultiPoly::one())
    }

    /// The series `var` itself.
    pub fn identity(var: &str, order: usize) -> Self {
        TruncSeries::new(var, order, vec![MultiPoly::zero(), MultiPoly::one()])
    }

    /// `c * var^k`.
    pub fn term(var: &str, order: usize, c: MultiPoly, k: usize) -> Self {
        let mut coeffs = vec![MultiPoly::zero(); order + 1];
        if k <= order {
            coeffs[k] = c;
        }
        TruncSeries::new(var, order, coeffs)
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &MultiPoly {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(MultiPoly::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check(&self, other: &TruncSeries) -> Result<(), SeriesError> {
        if self.var != other.var || self.order != other.order {
            return Err(SeriesError::OrderMismatch(format!(
                "{}:{} vs {}:{}",
                self.var, self.order, other.var, other.order
            )));
        }
        Ok(())
    }

    pub fn truncate(&self, order: usize) -> TruncSeries {
        let n = order.min(self.order);
        TruncSeries::new(&self.var, n, self.coeffs[..=n].to_vec())
    }

    pub fn with_var(&self, var: &str) -> TruncSeries {
        TruncSeries::new(var, self.order, self.coeffs.clone())
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(TruncSeries::new(&self.var, self.order, coeffs))
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.sub(b))
            .collect();
        Ok(TruncSeries::new(&self.var, self.order, coeffs))
    }

    pub fn neg(&self) -> TruncSeries {
        self.map_coeffs(MultiPoly::neg)
    }

    pub fn scale(&self, k: &BigRational) -> TruncSeries {
        self.map_coeffs(|c| c.scale(k))
    }

    pub fn scalar_mul(&self, p: &MultiPoly) -> TruncSeries {
        self.map_coeffs(|c| c.mul(p))
    }

    pub fn add_constant(&self, p: &MultiPoly) -> TruncSeries {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].add(p);
        out
    }

    pub fn map_coeffs<F: Fn(&MultiPoly) -> MultiPoly>(&self, f: F) -> TruncSeries {
        TruncSeries::new(&self.var, self.order, self.coeffs.iter().map(f).collect())
    }

    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        self.check(other)?;
        let n = self.order;
        let mut out = vec![MultiPoly::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Ok(TruncSeries::new(&self.var, n, out))
    }

    pub fn pow_int(&self, k: u32) -> TruncSeries {
        let mut out = TruncSeries::one(&self.var, self.order);
        for _ in 0..k {
            out = out.mul(self).expect("same shape");
        }
        out
    }

    /// Multiply by `var^k`.
    pub fn shift_up(&self, k: usize) -> TruncSeries {
        let mut coeffs = vec![MultiPoly::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TruncSeries::new(&self.var, self.order, coeffs)
    }

    /// Divide by `var^k`; the first k coefficients must vanish. The result loses k orders.
    pub fn shift_down(&self, k: usize) -> Result<TruncSeries, SeriesError> {
        if k > self.order || self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(SeriesError::Unsupported(format!(
                "series not divisible by {}^{}",
                self.var, k
            )));
        }
        Ok(TruncSeries::new(
            &self.var,
            self.order - k,
            self.coeffs[k..].to_vec(),
        ))
    }

    /// `(self)^e` for a unit series, by the binomial recurrence.
    pub fn pow_rational(&self, e: &BigRational) -> Result<TruncSeries, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::NotUnitSeries);
        }
        let n = self.order;
        let mut r = vec![MultiPoly::zero(); n + 1];
        r[0] = MultiPoly::one();
        for k in 1..=n {
            let mut acc = MultiPoly::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() || r[k - j].is_zero() {
                    continue;
                }
                let w = e * int(j) - int(k - j);
                if w.is_zero() {
                    continue;
                }
                acc = acc.add(&self.coeffs[j].mul(&r[k - j]).scale(&w));
            }
            r[k] = acc.scale(&(BigRational::one() / int(k)));
        }
        Ok(TruncSeries::new(&self.var, n, r))
    }

    /// Multiplicative inverse; the constant term must be a nonzero rational.
    pub fn inverse(&self) -> Result<TruncSeries, SeriesError> {
        let c0 = self.coeffs[0]
            .constant_value()
            .filter(|c| !c.is_zero())
            .ok_or(SeriesError::NotUnitSeries)?;
        let inv0 = BigRational::one() / c0;
        let unit = self.scale(&inv0);
        Ok(unit.pow_rational(&-BigRational::one())?.scale(&inv0))
    }

    /// `self(inner(var))` by Horner's rule.
    pub fn compose(&self, inner: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        self.check(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantInner);
        }
        let mut acc = TruncSeries::constant(&self.var, self.order, self.coeffs[self.order].clone());
        for k in (0..self.order).rev() {
            acc = acc.mul(inner)?.add_constant(&self.coeffs[k]);
        }
        Ok(acc)
    }

    /// Compositional inverse.
    pub fn reverse(&self) -> Result<TruncSeries, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantInner);
        }
        let n = self.order;
        let lin = if n >= 1 {
            self.coeffs[1].constant_value()
        } else {
            None
        };
        let lin = lin
            .filter(|c| !c.is_zero())
            .ok_or(SeriesError::NonInvertibleLinearTerm)?;
        let inv = BigRational::one() / lin.clone();
        let mut tail = self.clone();
        tail.coeffs[1] = MultiPoly::zero();
        let z = TruncSeries::identity(&self.var, n);
        let mut g = z.scale(&inv);
        for _ in 1..n {
            g = z.sub(&tail.compose(&g)?)?.scale(&inv);
        }
        Ok(g)
    }

    /// d/dvar; loses one order.
    pub fn derivative(&self) -> TruncSeries {
        if self.order == 0 {
            return TruncSeries::zero(&self.var, 0);
        }
        let coeffs = (1..=self.order)
            .map(|k| self.coeffs[k].scale(&int(k)))
            .collect();
        TruncSeries::new(&self.var, self.order - 1, coeffs)
    }

    /// Antiderivative with zero constant; gains one order.
    pub fn integrate(&self) -> TruncSeries {
        let mut coeffs = vec![MultiPoly::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale(&(BigRational::one() / int(k + 1))));
        }
        TruncSeries::new(&self.var, self.order + 1, coeffs)
    }

    /// Partial derivative of every coefficient in `v`.
    pub fn dvar(&self, v: Var) -> TruncSeries {
        self.map_coeffs(|c| c.derivative(v))
    }

    /// Replace the coefficient variable `v` by a series in the same formal variable.
    pub fn subs_var(&self, v: Var, value: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        if self.var != value.var {
            return Err(SeriesError::OrderMismatch(format!(
                "{} vs {}",
                self.var, value.var
            )));
        }
        let n = self.order.min(value.order);
        let value = value.truncate(n);
        let mut powers = vec![TruncSeries::one(&self.var, n)];
        let mut out = TruncSeries::zero(&self.var, n);
        for (i, c) in self.coeffs[..=n].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let parts = c.split_by(v);
            while powers.len() < parts.len() {
                let next = powers.last().unwrap().mul(&value)?;
                powers.push(next);
            }
            let mut acc = TruncSeries::zero(&self.var, n);
            for (e, part) in parts.iter().enumerate() {
                if part.is_zero() {
                    continue;
                }
                acc = acc.add(&powers[e].scalar_mul(part))?;
            }
            out = out.add(&acc.shift_up(i))?;
        }
        Ok(out)
    }

    /// Apply a polynomial map to every coefficient.
    pub fn substitute_coeffs(&self, subs: &[(Var, MultiPoly)]) -> TruncSeries {
        self.map_coeffs(|c| c.substitute_all(subs))
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            writeln!(f, "{}^{}: {}", self.var, k, c)?;
        }
        Ok(())
    }
}
