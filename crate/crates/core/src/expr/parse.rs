//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | "+" unary | power
//! power  := atom ("^" integer)?
//! atom   := integer | identifier | "(" expr ")"
//! ```
//!
//! Division is only accepted by [`parse_rational`]; [`parse_polynomial`]
//! allows it only by nonzero constants.

use num::{BigInt, BigRational};

use super::poly::Polynomial;
use super::rational::RationalFunction;
use super::Vars;
use crate::error::{Error, Result};

pub fn parse_polynomial(text: &str, vars: &Vars) -> Result<Polynomial> {
    let r = parse_with(text, vars, true)?;
    Ok(r.numerator().clone())
}

pub fn parse_rational(text: &str, vars: &Vars) -> Result<RationalFunction> {
    parse_with(text, vars, false)
}

fn parse_with(text: &str, vars: &Vars, poly_only: bool) -> Result<RationalFunction> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
        poly_only,
        text,
    };
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(p.err("empty expression"));
    }
    let r = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(r)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
    poly_only: bool,
    text: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: format!("{msg} in {:?}", self.text),
        }
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

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    if d.is_zero() {
                        self.pos = at;
                        return Err(self.err("division by zero"));
                    }
                    if self.poly_only && d.constant_value().is_none() {
                        self.pos = at;
                        return Err(self.err("division by a non-constant in a polynomial"));
                    }
                    acc = &acc / &d;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected a nonnegative integer exponent"));
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("exponent too large"))?;
            if e > 10_000 {
                return Err(self.err("exponent too large"));
            }
            return Ok(base.pow(e as i32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let r = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(r)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let v: BigInt = s.parse().map_err(|_| self.err("bad integer"))?;
                Ok(RationalFunction::constant(
                    self.n(),
                    BigRational::from_integer(v),
                ))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.vars.index(name) {
                    Some(i) => Ok(RationalFunction::var(self.n(), i)),
                    None => {
                        self.pos = start;
                        Err(Error::UnknownVariable {
                            name: name.to_string(),
                            position: start,
                        })
                    }
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}
