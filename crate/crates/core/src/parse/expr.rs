use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::lexer::{tokenize, Token, TokenKind};
use crate::error::{Error, Result};
use crate::poly::{Polynomial, Rational, Ring, VarContext};

/// Default cap on literal exponents.
pub const DEFAULT_MAX_EXPONENT: u32 = 64;

/// Parses a polynomial over the full `(x, t)` ring of `ctx`.
pub fn parse_polynomial(text: &str, ctx: &VarContext) -> Result<Polynomial> {
    parse_in_ring(text, ctx.full_ring())
}

pub fn parse_in_ring(text: &str, ring: &Arc<Ring>) -> Result<Polynomial> {
    parse_tokens(&tokenize(text)?, ring, DEFAULT_MAX_EXPONENT)
}

/// Parses already-lexed tokens; `max_exponent` bounds every `^` literal.
pub fn parse_tokens(tokens: &[Token], ring: &Arc<Ring>, max_exponent: u32) -> Result<Polynomial> {
    let mut p = Parser {
        tokens,
        pos: 0,
        ring,
        max_exponent,
    };
    if tokens.is_empty() {
        return Err(p.error("empty expression"));
    }
    let out = p.expr()?;
    if p.pos < tokens.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    ring: &'a Arc<Ring>,
    max_exponent: u32,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn error(&self, message: &str) -> Error {
        let (line, column) = match self.tokens.get(self.pos).or(self.tokens.last()) {
            Some(t) => (t.line, t.column),
            None => (1, 1),
        };
        Error::Parse {
            line,
            column,
            message: message.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(TokenKind::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(TokenKind::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(TokenKind::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(TokenKind::Slash) => {
                    self.pos += 1;
                    let d = match self.peek() {
                        Some(TokenKind::Int(d)) => d.clone(),
                        _ => {
                            return Err(self.error("division is only allowed by an integer literal"))
                        }
                    };
                    if d.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    self.pos += 1;
                    acc = acc.scale(&Rational::new(BigInt::from(1), d));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(TokenKind::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(TokenKind::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() != Some(&TokenKind::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek() {
            Some(TokenKind::Int(e)) => {
                let e = e
                    .to_u32()
                    .filter(|e| *e <= self.max_exponent)
                    .ok_or_else(|| {
                        self.error(&format!(
                            "exponent exceeds the cap of {}",
                            self.max_exponent
                        ))
                    })?;
                self.pos += 1;
                Ok(base.pow(e))
            }
            Some(TokenKind::Minus) => Err(self.error("negative exponent")),
            _ => Err(self.error("expected an integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(TokenKind::Int(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.ring, Rational::from_integer(n)))
            }
            Some(TokenKind::Ident(name)) => match self.ring.index_of(&name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Polynomial::var(self.ring, i))
                }
                None => Err(self.error(&format!("unknown variable `{name}`"))),
            },
            Some(TokenKind::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&TokenKind::RParen) {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => Err(self.error("unexpected token")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses a rational literal such as `3`, `-1/2` or `+4`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Validation(format!("`{text}` is not a rational number"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn ctx2() -> VarContext {
        VarContext::new(&["x", "y"], "t").unwrap()
    }

    #[test]
    fn line_singularity_deformation_expands() {
        let p = parse_polynomial("y^2*(x^2-(y-t)^2)", &ctx2()).unwrap();
        assert_eq!(p.to_string(), "x^2*y^2 - y^4 + 2*y^3*t - y^2*t^2");
    }

    #[test]
    fn zero_parses_to_zero() {
        assert!(parse_polynomial("0", &ctx2()).unwrap().is_zero());
    }

    #[test]
    fn umbrella_deformation_expands() {
        let ctx = VarContext::new(&["x", "y", "z"], "t").unwrap();
        let p = parse_polynomial("(x^2+y^2*z)*(x-t)", &ctx).unwrap();
        let q = parse_polynomial("x^3 - t*x^2 + x*y^2*z - t*y^2*z", &ctx).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rational_coefficients() {
        let p = parse_polynomial("3/2*x - x/4", &ctx2()).unwrap();
        assert_eq!(p, parse_polynomial("5/4*x", &ctx2()).unwrap());
        assert_eq!(parse_rational("-1/2").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn rejects_bad_input() {
        let c = ctx2();
        assert!(matches!(
            parse_polynomial("x + w", &c),
            Err(Error::Parse { .. })
        ));
        assert!(parse_polynomial("x^-1", &c)
            .unwrap_err()
            .to_string()
            .contains("negative exponent"));
        assert!(parse_polynomial("x/y", &c).is_err());
        assert!(parse_polynomial("x^65", &c).is_err());
        assert!(parse_polynomial("(x + y", &c).is_err());
        assert!(parse_polynomial("x y", &c).is_err());
    }
}
