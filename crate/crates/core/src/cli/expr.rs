//! Parser for symbol expressions `[t^a w w' …]^j_f`.
//!
//! Whitespace is ignored everywhere. Inside the brackets an optional power of
//! `t` comes first, followed by any sequence of `w` and `w'` (a `·` between
//! factors is accepted so rendered output can be fed back in). `[1]` is the
//! identity. After the closing bracket an exponent `^j` and a coefficient name
//! `_f` or `_{f}` may follow in either order.

use crate::weyl::{Letter, WeylElement};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolExpr {
    pub eta: WeylElement,
    pub tstar: usize,
    pub coeff: Option<String>,
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    at: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            chars: src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            at: 0,
            src,
        }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map(|c| c.0).unwrap_or(self.src.len())
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|c| c.1)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.at += 1;
        c
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.error(format!("expected '{c}', found '{found}'")),
                None => self.error(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn integer(&mut self, signed: bool) -> Result<i64, ParseError> {
        let start = self.pos();
        let negative = signed && self.eat('-');
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.at += 1;
        }
        if digits.is_empty() {
            return self.error("expected an integer");
        }
        let v: i64 = digits.parse().map_err(|_| ParseError {
            pos: start,
            msg: "integer out of range".into(),
        })?;
        Ok(if negative { -v } else { v })
    }
}

pub fn parse_symbol(src: &str) -> Result<SymbolExpr, ParseError> {
    let mut c = Cursor::new(src);
    c.expect('[')?;
    let mut eta = WeylElement::identity();
    if c.eat('1') {
        c.expect(']')?;
    } else {
        if c.eat('t') {
            let power = if c.eat('^') { c.integer(true)? } else { 1 };
            let power = i32::try_from(power).or_else(|_| c.error("exponent of t out of range"))?;
            eta = WeylElement::t_pow(power);
        }
        loop {
            c.eat('·');
            match c.peek() {
                Some('w') => {
                    c.bump();
                    let letter = if c.eat('\'') { Letter::WPrime } else { Letter::W };
                    eta = eta.mul(&letter.element());
                }
                Some(']') => {
                    c.bump();
                    break;
                }
                Some('t') => return c.error("the power of t must come first"),
                Some(other) => return c.error(format!("unexpected '{other}'")),
                None => return c.error("unterminated symbol"),
            }
        }
    }
    let mut tstar = None;
    let mut coeff = None;
    while let Some(next) = c.peek() {
        match next {
            '^' if tstar.is_none() => {
                c.bump();
                let j = c.integer(false)?;
                tstar = Some(usize::try_from(j).or_else(|_| c.error("exponent out of range"))?);
            }
            '_' if coeff.is_none() => {
                c.bump();
                let braced = c.eat('{');
                let mut name = String::new();
                while let Some(ch) = c.peek().filter(|ch| ch.is_alphanumeric()) {
                    name.push(ch);
                    c.bump();
                }
                if name.is_empty() {
                    return c.error("expected a coefficient name");
                }
                if braced {
                    c.expect('}')?;
                }
                coeff = Some(name);
            }
            other => return c.error(format!("unexpected '{other}' after symbol")),
        }
    }
    Ok(SymbolExpr {
        eta,
        tstar: tstar.unwrap_or(0),
        coeff,
    })
}
