//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := unary (('*'|'/') unary)*
//! unary   := ('+'|'-') unary | power
//! power   := primary ['^' digits]
//! primary := digits | 'x' | 'y' | '(' expr ')'
//! ```
//!
//! Division is only allowed by a nonzero constant, which covers rational
//! literals such as `3/4`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{PolyError, DEFAULT_DEGREE_CAP};
use crate::{QPoly, QUniPoly, Rational};

pub fn parse_poly(text: &str) -> Result<QPoly, PolyError> {
    parse_poly_capped(text, DEFAULT_DEGREE_CAP)
}

pub fn parse_poly_capped(text: &str, cap: u32) -> Result<QPoly, PolyError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, cap };
    p.skip_ws();
    if p.at_end() {
        return Err(p.err("empty input"));
    }
    let f = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err(&format!("unexpected {:?}", p.chars[p.pos])));
    }
    Ok(f)
}

/// Parses a polynomial in `x` alone.
pub fn parse_univar(text: &str) -> Result<QUniPoly, PolyError> {
    let f = parse_poly(text)?;
    if f.deg_y().unwrap_or(0) > 0 {
        return Err(PolyError::Syntax { pos: 0, msg: "expected a polynomial in x only".into() });
    }
    Ok(f.y_coeffs().into_iter().next().unwrap_or_default())
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    cap: u32,
}

impl Parser {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn skip_ws(&mut self) {
        while !self.at_end() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&c| if c == '\u{2212}' { '-' } else { c })
    }

    fn expr(&mut self) -> Result<QPoly, PolyError> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
            self.check(&acc)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<QPoly, PolyError> {
        let mut acc = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            if c == '*' {
                acc = &acc * &rhs;
                self.check(&acc)?;
            } else {
                let k = rhs.constant_term();
                if rhs.num_terms() != 1 || k.is_zero() || rhs.deg_x() != Some(0) || rhs.deg_y() != Some(0) {
                    return Err(PolyError::Syntax {
                        pos: at,
                        msg: "division is only defined by a nonzero constant".into(),
                    });
                }
                acc = acc.scale(&(Rational::from_integer(1.into()) / k));
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<QPoly, PolyError> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<QPoly, PolyError> {
        let base = self.primary()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.err("expected a non-negative integer exponent"));
            }
            let e: u64 = digits.parse().unwrap_or(u64::MAX);
            if e > u64::from(self.cap) {
                return Err(PolyError::DegreeCap { degree: e, cap: self.cap });
            }
            return base.checked_pow(e as u32, self.cap).map_err(|err| match err {
                PolyError::DegreeCap { .. } => err,
                PolyError::Syntax { msg, .. } => PolyError::Syntax { pos: start, msg },
            });
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while !self.at_end() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn primary(&mut self) -> Result<QPoly, PolyError> {
        match self.peek() {
            Some('x') => {
                self.pos += 1;
                Ok(QPoly::x())
            }
            Some('y') => {
                self.pos += 1;
                Ok(QPoly::y())
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let v: BigInt = d.parse().expect("ascii digits");
                Ok(QPoly::constant(Rational::from_integer(v)))
            }
            Some(c) => Err(self.err(&format!("unexpected {c:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn check(&self, f: &QPoly) -> Result<(), PolyError> {
        let d = f.deg_x().unwrap_or(0).max(f.deg_y().unwrap_or(0));
        if d > self.cap {
            return Err(PolyError::DegreeCap { degree: u64::from(d), cap: self.cap });
        }
        Ok(())
    }
}
