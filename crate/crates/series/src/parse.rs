//! Reader for the textual polynomial form printed by `MultiPoly`'s `Display`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::SeriesError;
use crate::poly::{MultiPoly, Var};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> SeriesError {
        SeriesError::Parse(format!("{} at byte {}", msg, self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, ch: u8) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt, SeriesError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn expr(&mut self) -> Result<MultiPoly, SeriesError> {
        let mut acc = MultiPoly::zero();
        let mut first = true;
        loop {
            let neg = if self.eat(b'-') {
                true
            } else if self.eat(b'+') || first {
                false
            } else {
                break;
            };
            first = false;
            let t = self.term()?;
            acc = if neg { acc.sub(&t) } else { acc.add(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, SeriesError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, SeriesError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, SeriesError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(ch) if ch.is_ascii_digit() => {
                let n = self.integer()?;
                let save = self.pos;
                if self.eat(b'/') {
                    if let Some(d) = self.peek().filter(u8::is_ascii_digit) {
                        let _ = d;
                        let d = self.integer()?;
                        return Ok(MultiPoly::constant(BigRational::new(n, d)));
                    }
                    self.pos = save;
                }
                Ok(MultiPoly::constant(BigRational::from_integer(n)))
            }
            Some(ch) if ch.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Var::from_name(name)
                    .map(MultiPoly::var)
                    .ok_or_else(|| SeriesError::Parse(format!("unknown variable `{name}`")))
            }
            _ => Err(self.err("unexpected input")),
        }
    }
}

/// Parse text such as `gamma*a1^2 - 1/2*beta^3*a2^2*c2`.
pub fn parse_poly(text: &str) -> Result<MultiPoly, SeriesError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_display() {
        let text = "gamma*a1^2*c1^2 - beta^3*a2^2*c2^2 + 1/2*gamma*a1^2*c1";
        let p = parse_poly(text).unwrap();
        assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn parentheses_and_powers() {
        let p = parse_poly("(a + 1)^2 - 2*a").unwrap();
        assert_eq!(p.to_string(), "1 + a^2");
    }

    #[test]
    fn rejects_unknown_names() {
        assert!(parse_poly("a + zeta").is_err());
        assert!(parse_poly("a +").is_err());
    }
}
