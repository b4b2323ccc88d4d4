//! Recursive-descent parser for polynomial expressions.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use super::{IntPoly, MultiPoly, PolyError};

/// Exponents above this are rejected rather than expanded.
pub const MAX_EXPONENT: u32 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    Expected(&'static str),
    UnknownVariable(String),
    NegativeExponent,
    ExponentTooLarge,
}

/// A parse failure at a character offset (0-based) into the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = self.position;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?} at position {at}"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input at position {at}"),
            ParseErrorKind::Expected(what) => write!(f, "expected {what} at position {at}"),
            ParseErrorKind::UnknownVariable(v) => write!(f, "unknown variable {v:?} at position {at}"),
            ParseErrorKind::NegativeExponent => write!(f, "negative exponent at position {at}"),
            ParseErrorKind::ExponentTooLarge => {
                write!(f, "exponent exceeds {MAX_EXPONENT} at position {at}")
            }
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                // only ASCII digits were collected
                let n = BigInt::parse_bytes(digits.as_bytes(), 10).unwrap_or_default();
                out.push((start, Tok::Int(n)));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(ParseError { position: start, kind: ParseErrorKind::UnexpectedChar(other) })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, S> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a [S],
}

impl<S: AsRef<str>> Parser<'_, S> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { position: self.here(), kind }
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let negate = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let at = self.here();
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e = u32::try_from(&n)
                        .ok()
                        .filter(|&e| e <= MAX_EXPONENT)
                        .ok_or(ParseError { position: at, kind: ParseErrorKind::ExponentTooLarge })?;
                    return Ok(base.pow(e));
                }
                Some(Tok::Minus) => {
                    return Err(ParseError { position: at, kind: ParseErrorKind::NegativeExponent })
                }
                Some(_) => return Err(self.err(ParseErrorKind::Expected("nonnegative integer exponent"))),
                None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<MultiPoly, ParseError> {
        let nvars = self.vars.len();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(nvars, n))
            }
            Some(Tok::Ident(name)) => {
                let idx = self
                    .vars
                    .iter()
                    .position(|v| v.as_ref() == name)
                    .ok_or_else(|| self.err(ParseErrorKind::UnknownVariable(name.clone())))?;
                self.pos += 1;
                Ok(MultiPoly::var(nvars, idx).expect("index from vars"))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    Some(_) => Err(self.err(ParseErrorKind::Expected("')'"))),
                    None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
                }
            }
            Some(_) => Err(self.err(ParseErrorKind::Expected("integer, variable or '('"))),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }
}

/// Parses and expands `text` as a polynomial in `vars` (in that order).
pub fn parse_poly<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<MultiPoly, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.chars().count(), vars };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err(ParseErrorKind::Expected("operator or end of input")));
    }
    Ok(out)
}

/// Parses a polynomial in the single variable `var`.
pub fn parse_univariate(text: &str, var: &str) -> Result<IntPoly, PolyError> {
    parse_poly(text, &[var])?.to_univariate()
}

/// Distinct identifiers in order of first appearance; lexing errors are
/// reported the same way [`parse_poly`] would.
pub fn identifiers(text: &str) -> Result<Vec<String>, ParseError> {
    let mut out: Vec<String> = Vec::new();
    for (_, t) in lex(text)? {
        if let Tok::Ident(name) = t {
            if !out.contains(&name) {
                out.push(name.to_string());
            }
        }
    }
    Ok(out)
}
