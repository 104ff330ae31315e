//! Text form of surds.
//!
//! Accepts arithmetic over integer and decimal literals and `sqrt(..)` of a
//! nonnegative rational, e.g. `(p+q*sqrt(D))/r`, `sqrt(2)-1`, `3/4`, `0.25`,
//! `(1+sqrt(5))/2`. All operands of one expression must share a radicand.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::QuadSurd;
use crate::{Error, Result};

pub(super) fn parse_surd(input: &str) -> Result<QuadSurd> {
    let mut parser = Parser {
        input,
        bytes: input.as_bytes(),
        pos: 0,
    };
    let value = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::NumberSyntax {
            input: self.input.to_string(),
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<QuadSurd> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                acc = self.lift(acc.checked_add(&rhs))?;
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                acc = self.lift(acc.checked_sub(&rhs))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QuadSurd> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.factor()?;
                acc = self.lift(acc.checked_mul(&rhs))?;
            } else if self.eat(b'/') {
                let rhs = self.factor()?;
                acc = self.lift(acc.checked_div(&rhs))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<QuadSurd> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(b's') => {
                if !self.input[self.pos..].starts_with("sqrt") {
                    return Err(self.error("expected `sqrt`"));
                }
                self.pos += 4;
                self.expect(b'(')?;
                let start = self.pos;
                let arg = self.expr()?;
                self.expect(b')')?;
                if arg.is_irrational() {
                    self.pos = start;
                    return Err(self.error("sqrt argument must be rational"));
                }
                if arg.p().is_negative() {
                    self.pos = start;
                    return Err(self.error("sqrt argument must be nonnegative"));
                }
                // sqrt(a/b) = sqrt(a*b)/b
                let (a, b) = (arg.p().clone(), arg.r().clone());
                self.lift(QuadSurd::new(BigInt::zero(), 1, a * &b, b))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<QuadSurd> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let int_digits = &self.input[start..self.pos];
        let mut frac_digits = "";
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'.' {
            self.pos += 1;
            let frac_start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            frac_digits = &self.input[frac_start..self.pos];
        }
        if int_digits.is_empty() && frac_digits.is_empty() {
            return Err(self.error("expected digits"));
        }
        let digits = format!("{int_digits}{frac_digits}");
        let numerator: BigInt = digits.parse().map_err(|_| self.error("bad number"))?;
        let denominator = BigInt::from(10u32).pow(frac_digits.len() as u32);
        self.lift(QuadSurd::ratio(numerator, denominator))
    }

    fn lift(&self, value: Result<QuadSurd>) -> Result<QuadSurd> {
        value.map_err(|err| match err {
            Error::NumberSyntax { .. } => err,
            other => self.error(&other.to_string()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepted_forms() {
        let canonical = parse_surd("(-4+3*sqrt(2))/1").unwrap();
        assert_eq!(canonical, QuadSurd::new(-4, 3, 2, 1).unwrap());
        assert_eq!(parse_surd("sqrt(2)").unwrap(), QuadSurd::sqrt(2).unwrap());
        assert_eq!(parse_surd("3/2").unwrap(), QuadSurd::ratio(3, 2).unwrap());
        assert_eq!(parse_surd("0.5").unwrap(), QuadSurd::ratio(1, 2).unwrap());
        assert_eq!(parse_surd(" 1.25 ").unwrap(), QuadSurd::ratio(5, 4).unwrap());
        assert_eq!(
            parse_surd("sqrt(1/2)").unwrap(),
            QuadSurd::new(0, 1, 2, 2).unwrap()
        );
        assert_eq!(
            parse_surd("3*sqrt(2)/2").unwrap(),
            QuadSurd::new(0, 3, 2, 2).unwrap()
        );
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "sqrt(", "sqrt(-2)", "1/0", "2 3", "x", "sqrt(sqrt(2))", "sqrt(2)+sqrt(3)"] {
            assert!(parse_surd(bad).is_err(), "{bad}");
        }
        match parse_surd("1 + ") {
            Err(Error::NumberSyntax { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
    }
}
