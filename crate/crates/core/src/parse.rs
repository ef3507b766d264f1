//! Shared expression grammar for polynomial and matrix literals.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*      // '/' only by a nonzero constant
//! factor := atom ['^' integer]
//! atom   := integer | identifier | '(' expr ')'
//! ```

use crate::error::ParseError;
use crate::poly::MultiPoly;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Num(s[start..i].to_string()), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len()
                && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
            {
                i += 1;
            }
            out.push((Tok::Ident(s[start..i].to_string()), start));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(ParseError::new(
                    format!("unexpected character `{c}`"),
                    start,
                ))
            }
        };
        out.push((t, start));
        i += 1;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub enum Expr {
    Num(Rational),
    Ident(String, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn collect_identifiers(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Ident(n, _) => {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_identifiers(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
                a.collect_identifiers(out);
                b.collect_identifiers(out);
            }
        }
    }

    /// Evaluates into a polynomial; `resolve` maps identifiers to polynomials.
    pub fn eval(
        &self,
        resolve: &mut dyn FnMut(&str, usize) -> Result<MultiPoly, ParseError>,
        zero: &MultiPoly,
    ) -> Result<MultiPoly, ParseError> {
        let incompatible = |e: crate::error::Error| ParseError::new(e.to_string(), 0);
        Ok(match self {
            Expr::Num(q) => MultiPoly::constant(zero.table(), q.clone()),
            Expr::Ident(n, pos) => resolve(n, *pos)?,
            Expr::Neg(a) => -a.eval(resolve, zero)?,
            Expr::Add(a, b) => a
                .eval(resolve, zero)?
                .checked_add(&b.eval(resolve, zero)?)
                .map_err(incompatible)?,
            Expr::Sub(a, b) => a
                .eval(resolve, zero)?
                .checked_sub(&b.eval(resolve, zero)?)
                .map_err(incompatible)?,
            Expr::Mul(a, b) => a
                .eval(resolve, zero)?
                .checked_mul(&b.eval(resolve, zero)?)
                .map_err(incompatible)?,
            Expr::Div(a, b, pos) => {
                let d = b.eval(resolve, zero)?;
                let d = d
                    .as_constant()
                    .ok_or_else(|| ParseError::new("division by a non-constant", *pos))?;
                let inv = d
                    .inv()
                    .ok_or_else(|| ParseError::new("division by zero", *pos))?;
                a.eval(resolve, zero)?.scale(&inv)
            }
            Expr::Pow(a, k) => a.eval(resolve, zero)?.pow(*k),
        })
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Expr::Neg(Box::new(self.term()?))
            }
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    let at = self.here();
                    self.bump();
                    acc = Expr::Div(Box::new(acc), Box::new(self.factor()?), at);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let at = self.here();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let k: u32 = n
                        .parse()
                        .map_err(|_| ParseError::new("exponent too large", at))?;
                    return Ok(Expr::Pow(Box::new(base), k));
                }
                _ => return Err(ParseError::new("expected integer exponent", at)),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Expr::Num(
                n.parse().map_err(|_| ParseError::new("bad number", at))?,
            )),
            Some(Tok::Ident(n)) => Ok(Expr::Ident(n, at)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(ParseError::new(
                        "expected `)`",
                        self.toks.get(self.pos - 1).map(|t| t.1).unwrap_or(self.len),
                    )),
                }
            }
            Some(t) => Err(ParseError::new(format!("unexpected token {t:?}"), at)),
            None => Err(ParseError::new("unexpected end of input", at)),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(ParseError::new("empty expression", 0));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        len: s.len(),
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(ParseError::new("trailing input", p.here()));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_expr("x + * y").unwrap_err().position, 4);
        assert_eq!(parse_expr("x $ y").unwrap_err().position, 2);
        assert_eq!(parse_expr("(x + y").unwrap_err().message, "expected `)`");
        assert!(parse_expr("").is_err());
        assert!(parse_expr("x^y").is_err());
        assert!(parse_expr("x y").is_err());
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("b_23_11"));
        assert!(is_identifier("_u0"));
        assert!(!is_identifier("1x"));
        assert!(!is_identifier("a-b"));
    }
}
