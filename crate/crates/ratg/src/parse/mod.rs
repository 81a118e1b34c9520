//! Text formats: group specs, words, rational expressions, Presburger
//! formulas and semilinear sets.

mod expr;
mod formula;
mod semilinear;
mod spec;
mod word;

pub use expr::parse_expr;
pub use formula::{parse_formula, ParsedFormula};
pub use semilinear::parse_semilinear;
pub use spec::parse_spec;
pub use word::parse_word;

use num_bigint::BigInt;

/// A syntax error with the column (in characters, from 1) where it was found.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} at column {column} in `{input}`")]
pub struct ParseError {
    pub message: String,
    pub column: usize,
    pub input: String,
}

/// Character cursor shared by the hand-written parsers.
pub(crate) struct Cursor<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(input: &'a str) -> Self {
        Cursor { input, pos: 0 }
    }

    pub(crate) fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub(crate) fn peek_second(&self) -> Option<char> {
        self.rest().chars().nth(1)
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    /// Skips whitespace, then consumes `s` if it comes next.
    pub(crate) fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.input.len()
    }

    pub(crate) fn finish(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    pub(crate) fn starts_ident(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
    }

    /// `[A-Za-z_][A-Za-z0-9_]*`
    pub(crate) fn ident(&mut self) -> Result<&'a str, ParseError> {
        if !self.starts_ident() {
            return Err(self.error("expected a name"));
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.bump();
        }
        Ok(&self.input[start..self.pos])
    }

    pub(crate) fn starts_integer(&mut self) -> bool {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => true,
            Some('-' | '+') => self.peek_second().is_some_and(|c| c.is_ascii_digit()),
            _ => false,
        }
    }

    /// Optionally signed decimal integer of any size.
    pub(crate) fn integer(&mut self) -> Result<BigInt, ParseError> {
        if !self.starts_integer() {
            return Err(self.error("expected an integer"));
        }
        let start = self.pos;
        if matches!(self.peek(), Some('-' | '+')) {
            self.bump();
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        self.input[start..self.pos].parse().map_err(|_| self.error("malformed integer"))
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            message: message.into(),
            column: self.input[..self.pos].chars().count() + 1,
            input: self.input.to_string(),
        }
    }
}

/// `[i1, i2, ...]`
pub(crate) fn int_list(c: &mut Cursor<'_>) -> Result<Vec<BigInt>, ParseError> {
    c.expect("[")?;
    let mut out = Vec::new();
    if c.eat("]") {
        return Ok(out);
    }
    loop {
        out.push(c.integer()?);
        if c.eat("]") {
            return Ok(out);
        }
        c.expect(",")?;
    }
}

/// `(i1, i2, ...)`
pub(crate) fn int_tuple(c: &mut Cursor<'_>) -> Result<Vec<BigInt>, ParseError> {
    c.expect("(")?;
    let mut out = vec![c.integer()?];
    while !c.eat(")") {
        c.expect(",")?;
        out.push(c.integer()?);
    }
    Ok(out)
}
