//! Textual grammar for ring descriptors and ring elements.
//!
//! Descriptors: `Z`, `Z/6`, `poly(Z/4, X)`, `poly(Z, X, neg)`,
//! `trunc(Z, 2)`, `trunc(Z/4, 3, Y)`, `hyp(Z/5)`, `loc(poly(Z/6, Y), 3)`,
//! and `graded(..)` as a synonym for `poly(..)`.
//!
//! Elements are ordinary arithmetic expressions over integer literals and
//! the tower's variables: `1+2*X+X^2`, `3Y^2`, `(1,4)` for hyperbolic
//! pairs, `(1+Y)/3` in a localization. The `*` is optional between a
//! coefficient and a variable. Parsing is directed by the target ring, so
//! the same expression text can denote values of different rings.

use super::{Ring, RingDescriptor, RingValue};
use num_bigint::BigInt;
use num_traits::{Num, ToPrimitive};

#[derive(Debug, Clone, PartialEq)]
pub enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Comma,
    LParen,
    RParen,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
#[error("parse error at byte {at}: {message}")]
pub struct ParseError {
    pub at: usize,
    pub message: String,
}

fn err<T>(at: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        at,
        message: message.into(),
    })
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Token::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Token::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Token::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Token::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Token::Caret));
                i += 1;
            }
            ',' => {
                out.push((i, Token::Comma));
                i += 1;
            }
            '(' => {
                out.push((i, Token::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Token::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = BigInt::from_str_radix(&input[start..i], 10).map_err(|e| ParseError {
                    at: start,
                    message: e.to_string(),
                })?;
                out.push((start, Token::Int(n)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Token::Ident(input[start..i].to_string())));
            }
            other => return err(i, format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    input: &'a str,
    toks: Vec<(usize, Token)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Result<Self, ParseError> {
        Ok(Parser {
            input,
            toks: tokenize(input)?,
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.input.len())
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Token, what: &str) -> Result<(), ParseError> {
        let at = self.at();
        match self.bump() {
            Some(t) if t == *want => Ok(()),
            _ => err(at, format!("expected {what}")),
        }
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    // -- descriptors --------------------------------------------------------

    fn descriptor(&mut self) -> Result<RingDescriptor, ParseError> {
        let at = self.at();
        let head = match self.bump() {
            Some(Token::Ident(s)) => s,
            _ => return err(at, "expected a ring name"),
        };
        match head.as_str() {
            "Z" => {
                if self.peek() == Some(&Token::Slash) {
                    self.bump();
                    let mat = self.at();
                    match self.bump() {
                        Some(Token::Int(n)) => match n.to_u64() {
                            Some(m) => Ok(RingDescriptor::IntegersMod(m)),
                            None => err(mat, "modulus too large"),
                        },
                        _ => err(mat, "expected a modulus after Z/"),
                    }
                } else {
                    Ok(RingDescriptor::Integers)
                }
            }
            "poly" | "graded" => {
                self.expect(&Token::LParen, "( after poly")?;
                let base = self.descriptor()?;
                self.expect(&Token::Comma, ", before the variable name")?;
                let vat = self.at();
                let var = match self.bump() {
                    Some(Token::Ident(v)) => v,
                    _ => return err(vat, "expected a variable name"),
                };
                let mut fixes_var = true;
                if self.peek() == Some(&Token::Comma) {
                    self.bump();
                    let fat = self.at();
                    match self.bump() {
                        Some(Token::Ident(f)) if f == "neg" => fixes_var = false,
                        Some(Token::Ident(f)) if f == "fix" => fixes_var = true,
                        _ => return err(fat, "expected involution flag `neg` or `fix`"),
                    }
                }
                self.expect(&Token::RParen, ") closing poly(..)")?;
                Ok(RingDescriptor::Poly {
                    base: Box::new(base),
                    var,
                    fixes_var,
                })
            }
            "trunc" => {
                self.expect(&Token::LParen, "( after trunc")?;
                let base = self.descriptor()?;
                self.expect(&Token::Comma, ", before the truncation bound")?;
                let bat = self.at();
                let bound = match self.bump() {
                    Some(Token::Int(n)) => match n.to_u32() {
                        Some(b) => b,
                        None => return err(bat, "truncation bound too large"),
                    },
                    _ => return err(bat, "expected a truncation bound"),
                };
                let mut var = "X".to_string();
                if self.peek() == Some(&Token::Comma) {
                    self.bump();
                    let vat = self.at();
                    match self.bump() {
                        Some(Token::Ident(v)) => var = v,
                        _ => return err(vat, "expected a variable name"),
                    }
                }
                self.expect(&Token::RParen, ") closing trunc(..)")?;
                Ok(RingDescriptor::Truncated {
                    base: Box::new(base),
                    var,
                    bound,
                })
            }
            "hyp" => {
                self.expect(&Token::LParen, "( after hyp")?;
                let base = self.descriptor()?;
                self.expect(&Token::RParen, ") closing hyp(..)")?;
                Ok(RingDescriptor::Hyperbolic(Box::new(base)))
            }
            "loc" => {
                self.expect(&Token::LParen, "( after loc")?;
                let base = self.descriptor()?;
                self.expect(&Token::Comma, ", before the inverted element")?;
                // The element text runs to the matching close paren; slice it
                // out of the raw input so any element grammar is allowed.
                let start = self.at();
                let mut depth = 0usize;
                loop {
                    match self.peek() {
                        None => return err(start, "unterminated loc(..)"),
                        Some(Token::LParen) => {
                            depth += 1;
                            self.bump();
                        }
                        Some(Token::RParen) => {
                            if depth == 0 {
                                let end = self.at();
                                self.bump();
                                let elem = self.input[start..end].trim().to_string();
                                if elem.is_empty() {
                                    return err(start, "empty localization element");
                                }
                                return Ok(RingDescriptor::Localized {
                                    base: Box::new(base),
                                    elem,
                                });
                            }
                            depth -= 1;
                            self.bump();
                        }
                        Some(_) => {
                            self.bump();
                        }
                    }
                }
            }
            other => err(at, format!("unknown ring constructor {other:?}")),
        }
    }

    // -- element expressions -------------------------------------------------

    fn expr(&mut self, ring: &Ring) -> Result<RingValue, ParseError> {
        let mut acc = self.term(ring)?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    let t = self.term(ring)?;
                    acc = ring.add(&acc, &t);
                }
                Some(Token::Minus) => {
                    self.bump();
                    let t = self.term(ring)?;
                    acc = ring.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self, ring: &Ring) -> Result<RingValue, ParseError> {
        let mut negate = false;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Minus => {
                    negate = !negate;
                    self.bump();
                }
                Token::Plus => {
                    self.bump();
                }
                _ => break,
            }
        }
        let mut acc = self.factor(ring)?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    let f = self.factor(ring)?;
                    acc = ring.mul(&acc, &f);
                }
                Some(Token::Slash) => {
                    self.bump();
                    let at = self.at();
                    let f = self.factor(ring)?;
                    match ring.try_invert(&f) {
                        Some(inv) => acc = ring.mul(&acc, &inv),
                        None => return err(at, format!("cannot divide by {f} in {ring}")),
                    }
                }
                // Juxtaposition: `2Y`, `3(1+Y)`, `Y(..)` multiply.
                Some(Token::Ident(_)) | Some(Token::LParen) | Some(Token::Int(_)) => {
                    let f = self.factor(ring)?;
                    acc = ring.mul(&acc, &f);
                }
                _ => break,
            }
        }
        Ok(if negate { ring.neg(&acc) } else { acc })
    }

    fn factor(&mut self, ring: &Ring) -> Result<RingValue, ParseError> {
        let base = self.primary(ring)?;
        if self.peek() == Some(&Token::Caret) {
            self.bump();
            let at = self.at();
            match self.bump() {
                Some(Token::Int(k)) => match k.to_u32() {
                    Some(k) => Ok(ring.pow(&base, k)),
                    None => err(at, "exponent too large"),
                },
                _ => err(at, "expected an integer exponent after ^"),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self, ring: &Ring) -> Result<RingValue, ParseError> {
        let at = self.at();
        match self.bump() {
            Some(Token::Int(n)) => Ok(ring.from_bigint(&n)),
            Some(Token::Ident(name)) => resolve_ident(ring, &name)
                .ok_or_else(|| ParseError {
                    at,
                    message: format!("unknown variable {name:?} in {ring}"),
                }),
            Some(Token::LParen) => {
                // Try a pair (a, b) aimed at the nearest hyperbolic level at
                // or below `ring`, lifting the result back up as a constant.
                let save = self.pos;
                if let Some(v) = self.try_pair(ring) {
                    return Ok(v);
                }
                self.pos = save;
                let inner = self.expr(ring)?;
                if self.peek() == Some(&Token::Comma) {
                    return err(self.at(), "tuple syntax needs a hyperbolic ring in the tower");
                }
                self.expect(&Token::RParen, ") closing the group")?;
                Ok(inner)
            }
            Some(other) => err(at, format!("unexpected token {other:?}")),
            None => err(at, "unexpected end of input"),
        }
    }
}

impl<'a> Parser<'a> {
    /// Parses `(a, b)` as a pair of the nearest hyperbolic level at or below
    /// `ring`; the opening paren has already been consumed. On failure the
    /// caller restores the token position.
    fn try_pair(&mut self, ring: &Ring) -> Option<RingValue> {
        if ring.is_hyperbolic() {
            let basering = ring.base().unwrap().clone();
            let first = self.expr(&basering).ok()?;
            if self.peek() != Some(&Token::Comma) {
                return None;
            }
            self.bump();
            let second = self.expr(&basering).ok()?;
            if self.peek() != Some(&Token::RParen) {
                return None;
            }
            self.bump();
            return Some(ring.pair(&first, &second));
        }
        let base = ring.base()?.clone();
        let below = self.try_pair(&base)?;
        Some(if ring.localized_at().is_some() {
            ring.localization_map(&below)
        } else {
            ring.constant(&below)
        })
    }
}

/// Finds `name` as the variable of some level at or below `ring` and lifts
/// it back up as a constant; hyperbolic levels embed diagonally.
fn resolve_ident(ring: &Ring, name: &str) -> Option<RingValue> {
    if ring.var() == Some(name) {
        return Some(ring.variable());
    }
    let base = ring.base()?;
    let below = resolve_ident(base, name)?;
    Some(if ring.is_hyperbolic() {
        ring.pair(&below, &below)
    } else if ring.localized_at().is_some() {
        ring.localization_map(&below)
    } else {
        ring.constant(&below)
    })
}

/// Parses a ring descriptor string.
pub fn parse_descriptor(input: &str) -> Result<RingDescriptor, ParseError> {
    let mut p = Parser::new(input)?;
    let d = p.descriptor()?;
    if !p.done() {
        return err(p.at(), "trailing input after descriptor");
    }
    Ok(d)
}

/// Parses an element of `ring`.
pub fn parse_value(ring: &Ring, input: &str) -> Result<RingValue, ParseError> {
    let mut p = Parser::new(input)?;
    if p.done() {
        return err(0, "empty element");
    }
    let v = p.expr(ring)?;
    if !p.done() {
        return err(p.at(), "trailing input after element");
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// printing

/// True when `s` needs no parentheses as a coefficient or numerator.
fn is_atomic(s: &str) -> bool {
    if s.starts_with('(') && s.ends_with(')') {
        // Already fully parenthesized, e.g. a printed pair.
        let inner = &s[1..s.len() - 1];
        let mut depth = 0i32;
        for c in inner.chars() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth < 0 {
                        return false;
                    }
                }
                _ => {}
            }
        }
        return depth == 0;
    }
    let core = s.strip_prefix('-').unwrap_or(s);
    !core.is_empty()
        && core
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '^')
        && !s.contains(' ')
}

fn wrap(s: &str) -> String {
    if is_atomic(s) {
        s.to_string()
    } else {
        format!("({s})")
    }
}

pub(super) fn print_value(v: &RingValue) -> String {
    let ring = v.ring();
    if let Some(var) = ring.var() {
        let coeffs = ring.coefficients(v);
        if coeffs.is_empty() {
            return "0".to_string();
        }
        let base = ring.base().unwrap();
        let mut parts: Vec<String> = Vec::new();
        for (d, c) in coeffs.iter().enumerate() {
            if base.is_zero(c) {
                continue;
            }
            let cs = print_value(c);
            let term = match d {
                0 => cs,
                _ => {
                    let vp = if d == 1 {
                        var.to_string()
                    } else {
                        format!("{var}^{d}")
                    };
                    if cs == "1" {
                        vp
                    } else if cs == "-1" {
                        format!("-{vp}")
                    } else {
                        format!("{}{vp}", wrap(&cs))
                    }
                }
            };
            parts.push(term);
        }
        return join_terms(&parts);
    }
    if ring.is_hyperbolic() {
        let (a, b) = ring.pair_parts(v);
        return format!("({}, {})", print_value(&a), print_value(&b));
    }
    if let Some(s) = ring.localized_at() {
        let (num, pow) = ring.fraction_parts(v);
        let ns = print_value(&num);
        if pow == 0 {
            return ns;
        }
        let ss = wrap(&print_value(s));
        return if pow == 1 {
            format!("{}/{ss}", wrap(&ns))
        } else {
            format!("{}/{ss}^{pow}", wrap(&ns))
        };
    }
    // Integer levels.
    match &v.payload {
        super::Payload::Int(n) => n.to_string(),
        _ => unreachable!("payload does not match ring"),
    }
}

fn join_terms(parts: &[String]) -> String {
    let mut out = String::new();
    for (k, p) in parts.iter().enumerate() {
        if k == 0 {
            out.push_str(p);
        } else if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}
