//! Textual operator notation.
//!
//! ```text
//! sum    := term (("+" | "-") term)*
//! term   := ["+" | "-"] (coeff ["*" factors] | factors)
//! coeff  := real | real "i" | "(" real ("+" | "-") real "i" ")"
//! factor := ("X" | "Y" | "Z" | "I") label | "I"
//! label  := [A-Za-z0-9_.]+
//! ```
//!
//! Examples: `X0*Y1*Y2`, `-2i*X0*X1`, `0.25*Z1 + 0.25*Z2`, `(1-0.5i)*Z0`.
//! Printing uses shortest round-trip float formatting, so
//! `parse(format(s)) == s` exactly.

use num_complex::Complex64;

use super::string::{Pauli, PauliString};
use super::sum::PauliSum;
use crate::error::{Error, Result};

pub fn format_sum(sum: &PauliSum) -> String {
    if sum.is_zero() {
        return "0".to_string();
    }
    sum.terms()
        .map(|(c, s)| format_term(c, &s))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn format_term(c: Complex64, s: &PauliString) -> String {
    let body = if s.is_identity() {
        "I".to_string()
    } else {
        s.letters()
            .iter()
            .map(|(l, p)| format!("{}{}", p.as_char(), l))
            .collect::<Vec<_>>()
            .join("*")
    };
    if c == Complex64::new(1.0, 0.0) {
        body
    } else if c == Complex64::new(-1.0, 0.0) {
        format!("-{body}")
    } else {
        format!("{}*{body}", format_coeff(c))
    }
}

fn format_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        let sign = if c.im.is_sign_negative() { '-' } else { '+' };
        format!("({}{}{}i)", c.re, sign, c.im.abs())
    }
}

pub fn parse_sum(text: &str) -> Result<PauliSum> {
    let mut p = Parser::new(text);
    p.skip_ws();
    if p.peek() == Some('0') && p.rest().trim() == "0" {
        return Ok(PauliSum::zero());
    }
    let mut sum = PauliSum::zero();
    let (c, s) = p.term()?;
    sum.add_term(c, &s);
    loop {
        p.skip_ws();
        match p.peek() {
            None => break,
            Some('+') => {
                p.bump();
                let (c, s) = p.term()?;
                sum.add_term(c, &s);
            }
            Some('-') => {
                p.bump();
                let (c, s) = p.term()?;
                sum.add_term(-c, &s);
            }
            Some(ch) => return Err(p.error(format!("expected `+` or `-`, found `{ch}`"))),
        }
    }
    Ok(sum)
}

/// A single string, optionally with a unit-phase prefix such as `-i*`.
pub fn parse_string(text: &str) -> Result<PauliString> {
    let sum = parse_sum(text)?;
    let mut terms = sum.terms();
    let (c, s) = terms
        .next()
        .ok_or_else(|| Error::Parse {
            column: 1,
            message: "empty operator".into(),
        })?;
    if terms.next().is_some() {
        return Err(Error::Parse {
            column: 1,
            message: "expected a single Pauli string".into(),
        });
    }
    let phase = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]
        .iter()
        .position(|&(re, im)| c == Complex64::new(re, im))
        .ok_or_else(|| Error::Parse {
            column: 1,
            message: format!("coefficient {c} is not a unit phase"),
        })?;
    Ok(s.with_phase(super::string::Phase::from_power(phase as i64)))
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
            _src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn rest(&self) -> String {
        self.chars[self.pos..].iter().collect()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn term(&mut self) -> Result<(Complex64, PauliString)> {
        self.skip_ws();
        let mut sign = 1.0;
        while let Some(c @ ('+' | '-')) = self.peek() {
            if c == '-' {
                sign = -sign;
            }
            self.bump();
            self.skip_ws();
        }
        let coeff = match self.peek() {
            Some(c) if c == '(' || c == '.' || c.is_ascii_digit() => {
                let k = self.coefficient()?;
                self.skip_ws();
                if self.peek() == Some('*') {
                    self.bump();
                    self.skip_ws();
                    let s = self.factors()?;
                    return Ok((k * sign, s));
                }
                if matches!(self.peek(), Some('I' | 'X' | 'Y' | 'Z')) {
                    return Err(self.error("expected `*` between coefficient and string"));
                }
                return Ok((k * sign, PauliString::identity()));
            }
            _ => Complex64::new(sign, 0.0),
        };
        let s = self.factors()?;
        Ok((coeff, s))
    }

    fn coefficient(&mut self) -> Result<Complex64> {
        if self.peek() == Some('(') {
            self.bump();
            self.skip_ws();
            let re = self.real()?;
            self.skip_ws();
            let c = match self.peek() {
                Some('i') => {
                    self.bump();
                    Complex64::new(0.0, re)
                }
                Some(s @ ('+' | '-')) => {
                    self.bump();
                    self.skip_ws();
                    let im = self.real()?;
                    if self.bump() != Some('i') {
                        self.pos -= 1;
                        return Err(self.error("expected `i` after imaginary part"));
                    }
                    Complex64::new(re, if s == '-' { -im } else { im })
                }
                _ => Complex64::new(re, 0.0),
            };
            self.skip_ws();
            if self.bump() != Some(')') {
                self.pos -= 1;
                return Err(self.error("expected `)`"));
            }
            return Ok(c);
        }
        let x = self.real()?;
        if self.peek() == Some('i') {
            self.bump();
            return Ok(Complex64::new(0.0, x));
        }
        Ok(Complex64::new(x, 0.0))
    }

    fn real(&mut self) -> Result<f64> {
        let start = self.pos;
        if matches!(self.peek(), Some('+' | '-')) {
            self.pos += 1;
        }
        let mut seen_e = false;
        while let Some(c) = self.peek() {
            let ok = c.is_ascii_digit()
                || c == '.'
                || (!seen_e && (c == 'e' || c == 'E'))
                || ((c == '+' || c == '-')
                    && self.pos > start
                    && matches!(self.chars[self.pos - 1], 'e' | 'E'));
            if !ok {
                break;
            }
            if c == 'e' || c == 'E' {
                seen_e = true;
            }
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>().map_err(|_| Error::Parse {
            column: start + 1,
            message: format!("invalid number `{text}`"),
        })
    }

    fn factors(&mut self) -> Result<PauliString> {
        let mut s = self.factor()?;
        loop {
            let save = self.pos;
            self.skip_ws();
            if self.peek() == Some('*') {
                self.bump();
                self.skip_ws();
                s = s.multiply(&self.factor()?);
            } else {
                self.pos = save;
                return Ok(s);
            }
        }
    }

    fn factor(&mut self) -> Result<PauliString> {
        let letter = match self.peek().and_then(Pauli::from_char) {
            Some(p) => p,
            None => return Err(self.error("expected a Pauli letter (I, X, Y, Z)")),
        };
        self.bump();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_' || c == '.') {
            self.pos += 1;
        }
        let label: String = self.chars[start..self.pos].iter().collect();
        if label.is_empty() {
            if letter == Pauli::I {
                return Ok(PauliString::identity());
            }
            return Err(self.error("expected a qubit label after the letter"));
        }
        Ok(PauliString::single(label, letter))
    }
}
