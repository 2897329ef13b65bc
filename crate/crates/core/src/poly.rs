use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dual::Scalar;
use crate::error::{HenonError, Result};

/// Monic polynomial with complex coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 3 {
            return Err(HenonError::InvalidInput("degree must be at least 2".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(HenonError::InvalidInput("non-finite coefficient".into()));
        }
        if *coeffs.last().unwrap() != Complex64::new(1.0, 0.0) {
            return Err(HenonError::InvalidInput("polynomial must be monic".into()));
        }
        Ok(Self { coeffs })
    }

    /// Monic polynomial from real lower coefficients `c_0, ..., c_{d-1}`.
    pub fn from_real(lower: &[f64]) -> Result<Self> {
        let mut coeffs: Vec<Complex64> = lower.iter().map(|&c| Complex64::new(c, 0.0)).collect();
        coeffs.push(Complex64::new(1.0, 0.0));
        Self::new(coeffs)
    }

    /// `x^2 + c`.
    pub fn quadratic(c: f64) -> Self {
        Self::from_real(&[c, 0.0]).expect("quadratic is monic")
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficients of `p - x^d`.
    pub fn lower(&self) -> &[Complex64] {
        &self.coeffs[..self.degree()]
    }

    /// Degree of `p - x^d`, or `None` when `p = x^d`.
    pub fn lower_degree(&self) -> Option<usize> {
        self.lower().iter().rposition(|c| *c != Complex64::new(0.0, 0.0))
    }

    pub fn lower_abs(&self) -> Vec<f64> {
        self.lower().iter().map(|c| c.norm()).collect()
    }

    pub fn eval<T: Scalar>(&self, z: T) -> T {
        let mut acc = T::constant(Complex64::new(1.0, 0.0));
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc * z + *c;
        }
        acc
    }

    /// `p(z) - z^d`.
    pub fn eval_lower<T: Scalar>(&self, z: T) -> T {
        let mut acc = T::constant(Complex64::new(0.0, 0.0));
        for c in self.lower().iter().rev() {
            acc = acc * z + *c;
        }
        acc
    }

    pub fn derivative_coeffs(&self) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * j as f64)
            .collect()
    }

    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        horner(&self.derivative_coeffs(), z)
    }

    pub fn eval_second_derivative(&self, z: Complex64) -> Complex64 {
        let d1 = self.derivative_coeffs();
        let d2: Vec<Complex64> = d1.iter().enumerate().skip(1).map(|(j, c)| c * j as f64).collect();
        horner(&d2, z)
    }

    /// Roots of `p'`, with multiplicity.
    pub fn critical_points(&self) -> Vec<Complex64> {
        let d = self.degree() as f64;
        let monic: Vec<Complex64> = self.derivative_coeffs().into_iter().map(|c| c / d).collect();
        roots(&monic)
    }

    /// Solutions of `p(z) = w`.
    pub fn preimages(&self, w: Complex64) -> Vec<Complex64> {
        let mut c = self.coeffs.clone();
        c[0] -= w;
        roots(&c)
    }

    /// Solutions of `p(z) = z`.
    pub fn fixed_points(&self) -> Vec<Complex64> {
        let mut c = self.coeffs.clone();
        c[1] -= 1.0;
        roots(&c)
    }

    /// Newton for `p(u) = w` from `seed`.
    pub fn local_inverse(&self, w: Complex64, seed: Complex64) -> Option<Complex64> {
        let mut u = seed;
        for _ in 0..60 {
            let dp = self.eval_derivative(u);
            if dp.norm() == 0.0 {
                return None;
            }
            let step = (self.eval(u) - w) / dp;
            u -= step;
            if !u.re.is_finite() || !u.im.is_finite() {
                return None;
            }
            if step.norm() <= 1e-15 * (1.0 + u.norm()) {
                return Some(u);
            }
        }
        let resid = (self.eval(u) - w).norm();
        (resid <= 1e-12 * (1.0 + w.norm())).then_some(u)
    }

    /// Iterate `p` `n` times.
    pub fn iterate(&self, z: Complex64, n: usize) -> Complex64 {
        (0..n).fold(z, |w, _| self.eval(w))
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Durand-Kerner on a monic coefficient list.
fn roots(monic: &[Complex64]) -> Vec<Complex64> {
    let n = monic.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![-monic[0]];
    }
    let bound = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * bound).collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let num = horner(monic, z[i]);
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                z[i] += Complex64::new(1e-8, 1e-8);
                moved = f64::INFINITY;
                continue;
            }
            let step = num / den;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * bound {
            break;
        }
    }
    z
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.degree())?;
        for (j, c) in self.lower().iter().enumerate().rev() {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mono = match j {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x{j}"),
            };
            if c.im == 0.0 {
                let sign = if c.re < 0.0 { '-' } else { '+' };
                let mag = c.re.abs();
                if mag == 1.0 && j > 0 {
                    write!(f, "{sign}{mono}")?;
                } else {
                    write!(f, "{sign}{mag}{mono}")?;
                }
            } else {
                write!(f, "+({c}){mono}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = HenonError;

    /// Accepts `x2-1`, `x3-3x`, `x^2 + 0.3`, `x2+(0.1+0.2i)`.
    fn from_str(text: &str) -> Result<Self> {
        let bad = |why: &str| HenonError::InvalidInput(format!("polynomial '{text}': {why}"));
        let s: String = text.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        if s.is_empty() {
            return Err(bad("empty"));
        }
        let chars: Vec<char> = s.chars().collect();
        let mut terms: Vec<(usize, Complex64)> = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let mut sign = 1.0;
            if chars[i] == '+' || chars[i] == '-' {
                if chars[i] == '-' {
                    sign = -1.0;
                }
                i += 1;
            }
            let mut coef: Option<Complex64> = None;
            if i < chars.len() && chars[i] == '(' {
                let close = chars[i..].iter().position(|&c| c == ')').ok_or_else(|| bad("unclosed '('"))?;
                let inner: String = chars[i + 1..i + close].iter().collect();
                coef = Some(Complex64::from_str(&inner).map_err(|_| bad("bad complex literal"))?);
                i += close + 1;
            } else {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i > start {
                    let lit: String = chars[start..i].iter().collect();
                    coef = Some(Complex64::new(lit.parse::<f64>().map_err(|_| bad("bad number"))?, 0.0));
                }
            }
            let mut power = 0usize;
            if i < chars.len() && chars[i] == 'x' {
                i += 1;
                if i < chars.len() && chars[i] == '^' {
                    i += 1;
                }
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                power = if i > start {
                    chars[start..i].iter().collect::<String>().parse().map_err(|_| bad("bad exponent"))?
                } else {
                    1
                };
            } else if coef.is_none() {
                return Err(bad("expected a term"));
            }
            terms.push((power, coef.unwrap_or(Complex64::new(1.0, 0.0)) * sign));
            if i < chars.len() && chars[i] != '+' && chars[i] != '-' {
                return Err(bad("unexpected character"));
            }
        }
        let d = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
        for (k, c) in terms {
            coeffs[k] += c;
        }
        Self::new(coeffs)
    }
}

impl TryFrom<String> for Polynomial {
    type Error = HenonError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Polynomial> for String {
    fn from(p: Polynomial) -> String {
        p.to_string()
    }
}
