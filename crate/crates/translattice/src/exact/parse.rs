//! Parser for polynomial expressions.
//!
//! Grammar: `+ - * / ^`, parentheses, unary minus, nonnegative integer
//! literals, identifiers.  The identifier `a` denotes `sqrt(d)` when the
//! field is quadratic; other identifiers resolve through the environment's
//! named bindings first and fall back to fresh variables.  Division is only
//! allowed by nonzero constants, so `3/4` and `(1/2)*x` parse but `1/x`
//! is rejected.  Exponents are nonnegative integers.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::{MPoly, QuadElem};

/// Name resolution context for [`parse_poly_with`].
#[derive(Clone, Debug, Default)]
pub struct PolyEnv {
    /// Field discriminant: 0 for the rationals, else a squarefree d > 1.
    pub d: u64,
    /// Named polynomial bindings, e.g. previously defined `G` and `H`.
    pub bindings: BTreeMap<String, MPoly>,
}

impl PolyEnv {
    pub fn rational() -> Self {
        PolyEnv::default()
    }

    pub fn quadratic(d: u64) -> Self {
        PolyEnv {
            d,
            bindings: BTreeMap::new(),
        }
    }

    pub fn bind(&mut self, name: &str, value: MPoly) {
        self.bindings.insert(name.to_string(), value);
    }
}

/// Parse a polynomial over `Q(sqrt d)` with no named bindings.
pub fn parse_poly(src: &str, d: u64) -> Result<MPoly> {
    parse_poly_with(src, &PolyEnv { d, bindings: BTreeMap::new() })
}

/// Parse a polynomial, resolving identifiers through `env`.
pub fn parse_poly_with(src: &str, env: &PolyEnv) -> Result<MPoly> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        env,
    };
    p.skip_ws();
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    env: &'a PolyEnv,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                let pos = self.pos;
                let rhs = self.unary()?;
                if !rhs.is_constant() {
                    return Err(Error::Parse {
                        position: pos,
                        message: "division only by nonzero constants".into(),
                    });
                }
                let c = rhs.constant_value();
                if c.is_zero() {
                    return Err(Error::Parse {
                        position: pos,
                        message: "division by zero".into(),
                    });
                }
                acc = acc.mul_scalar(&c.inv());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly> {
        if self.eat(b'-') {
            Ok(self.unary()?.neg())
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.integer()?;
            let exp: u32 = exp
                .try_into()
                .map_err(|_| self.error("exponent out of range"))?;
            Ok(base.pow(exp))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MPoly> {
        match self.peek() {
            Some(b'(') => {
                self.eat(b'(');
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(MPoly::from_int(n as i64, self.env.d))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.ident();
                self.skip_ws();
                if let Some(bound) = self.env.bindings.get(&name) {
                    return Ok(bound.clone());
                }
                if name == "a" && self.env.d > 0 {
                    return Ok(MPoly::constant(QuadElem::sqrt_d(self.env.d)));
                }
                Ok(MPoly::var(&name, self.env.d))
            }
            _ => Err(self.error("expected a number, variable, or '('")),
        }
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let value = text
            .parse::<u64>()
            .map_err(|_| self.error("integer literal too large"))?;
        self.skip_ws();
        Ok(value)
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn parses_basic_polynomial() {
        let f = parse_poly("x^2 - 2*x*y^2 + y^4", 0).unwrap();
        let g = {
            let x = MPoly::var("x", 0);
            let y = MPoly::var("y", 0);
            x.pow(2)
                .sub(&MPoly::from_int(2, 0).mul(&x).mul(&y.pow(2)))
                .add(&y.pow(4))
        };
        assert_eq!(f, g);
    }

    #[test]
    fn rational_literals_and_unary_minus() {
        let f = parse_poly("-3/4 + 1/2*x", 0).unwrap();
        let x = MPoly::var("x", 0);
        let g = MPoly::constant(QuadElem::from_rat(rat(-3, 4), 0))
            .add(&x.mul_scalar(&QuadElem::from_rat(rat(1, 2), 0)));
        assert_eq!(f, g);
    }

    #[test]
    fn sqrt_symbol_squares_to_d() {
        let f = parse_poly("a*a", 5).unwrap();
        assert_eq!(f, MPoly::from_int(5, 5));
        // With d = 0, `a` is an ordinary variable.
        let g = parse_poly("a*a", 0).unwrap();
        assert_eq!(g, MPoly::var("a", 0).pow(2));
    }

    #[test]
    fn env_bindings_resolve() {
        let mut env = PolyEnv::quadratic(5);
        let g = parse_poly("y^2 + z", 5).unwrap();
        env.bind("G", g.clone());
        let f = parse_poly_with("G + a*G", &env).unwrap();
        let expected = g.add(&g.mul(&MPoly::constant(QuadElem::sqrt_d(5))));
        assert_eq!(f, expected);
    }

    #[test]
    fn errors_carry_position() {
        let err = parse_poly("x + ", 0).unwrap_err();
        match err {
            Error::Parse { position, .. } => assert_eq!(position, 4),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(parse_poly("1/x", 0).is_err());
        assert!(parse_poly("x + (y", 0).is_err());
        assert!(parse_poly("x ^ y", 0).is_err());
    }

    #[test]
    fn display_parse_roundtrip() {
        let f = parse_poly("x^2 - 2*x*y^2 + y^4 + 7/3", 0).unwrap();
        let printed = format!("{f}");
        let reparsed = parse_poly(&printed, 0).unwrap();
        assert_eq!(f, reparsed);
        // Same over a quadratic field with irrational coefficients.
        let g = parse_poly("(1 - 2*a)*z^3 + (3/2 + a)*y - 5", 5).unwrap();
        let printed = format!("{g}");
        assert_eq!(parse_poly(&printed, 5).unwrap(), g);
    }
}
