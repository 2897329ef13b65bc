//! Quotients of polynomials, normalized lazily (no gcd is ever taken).

use crate::poly::{MultiPoly, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl From<MultiPoly> for RatFunc {
    fn from(p: MultiPoly) -> Self {
        RatFunc {
            num: p,
            den: MultiPoly::one(),
        }
    }
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RatFunc { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            return RatFunc::new(self.num.add(&other.num), self.den.clone());
        }
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&RatFunc::new(other.num.neg(), other.den.clone()))
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    /// Replace `v` by `value`.
    pub fn substitute(&self, v: Var, value: &RatFunc) -> RatFunc {
        let n = substitute_poly(&self.num, v, value);
        let d = substitute_poly(&self.den, v, value);
        RatFunc::new(n.num.mul(&d.den), n.den.mul(&d.num))
    }
}

/// p(value) as a quotient whose denominator is a power of value's denominator.
pub fn substitute_poly(p: &MultiPoly, v: Var, value: &RatFunc) -> RatFunc {
    let parts = p.split_by(v);
    let deg = parts.len() - 1;
    let mut num = MultiPoly::zero();
    let mut npow = MultiPoly::one();
    let dpows: Vec<MultiPoly> = (0..=deg).map(|k| value.den.pow(k as u32)).collect();
    for (j, part) in parts.iter().enumerate() {
        if !part.is_zero() {
            num = num.add(&part.mul(&npow).mul(&dpows[deg - j]));
        }
        if j < deg {
            npow = npow.mul(&value.num);
        }
    }
    RatFunc::new(num, dpows[deg].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn substitution_clears_to_zero() {
        let p = parse_poly("gamma*a1^2 - beta*a2^2").unwrap();
        let g = RatFunc::new(parse_poly("a2^2*beta").unwrap(), parse_poly("a1^2").unwrap());
        assert!(RatFunc::from(p).substitute(Var::Gamma, &g).is_zero());
    }

    #[test]
    fn arithmetic_keeps_value() {
        let x = RatFunc::new(MultiPoly::var(Var::A), MultiPoly::var(Var::C));
        let y = x.sub(&x);
        assert!(y.is_zero());
        let z = x.mul(&RatFunc::new(MultiPoly::var(Var::C), MultiPoly::var(Var::A)));
        assert_eq!(z.num, z.den);
    }
}
