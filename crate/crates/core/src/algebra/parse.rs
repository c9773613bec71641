//! Recursive-descent parser for polynomial and rational-function text.
//!
//! Grammar: sums and differences of products; `*` and `/` are explicit or
//! implied by juxtaposition (`2x`, `(a+1)(a-1)`, `l m`); `^` takes an
//! integer exponent, possibly negative.

use num_bigint::BigInt;

use super::mpoly::MPoly;
use super::rat::Rat;
use super::ratfun::RatFun;
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, AlgebraError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(s[start..i].parse().expect("digits"))));
                continue;
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(s[start..i].to_string())));
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '/' => out.push((start, Tok::Slash)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            _ => {
                return Err(AlgebraError::Parse { pos: start, msg: format!("unexpected character {c:?}") })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
    aliases: &'a [(&'a str, &'a str)],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(p, _)| *p)
    }

    fn err<T>(&self, msg: &str) -> Result<T, AlgebraError> {
        Err(AlgebraError::Parse { pos: self.offset(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<RatFun, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFun, AlgebraError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = acc.checked_div(&d).map_err(|_| AlgebraError::Parse {
                        pos: self.offset(),
                        msg: "division by zero".into(),
                    })?;
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFun, AlgebraError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFun, AlgebraError> {
        let base = self.primary()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return self.err("expected integer exponent");
        };
        self.pos += 1;
        let e: i32 = match i32::try_from(n) {
            Ok(e) => e,
            Err(_) => return self.err("exponent too large"),
        };
        let e = if neg { -e } else { e };
        base.pow(e).map_err(|_| AlgebraError::Parse { pos: self.offset(), msg: "zero to negative power".into() })
    }

    fn primary(&mut self) -> Result<RatFun, AlgebraError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RatFun::constant(Rat::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let name = self
                    .aliases
                    .iter()
                    .find(|(a, _)| *a == name)
                    .map_or(name.as_str(), |(_, b)| b);
                Ok(RatFun::var(name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            _ => self.err("expected number, identifier or '('"),
        }
    }
}

/// Parse with identifier renaming, e.g. `("l", "lambda")`.
pub fn parse_ratfun_with_aliases(s: &str, aliases: &[(&str, &str)]) -> Result<RatFun, AlgebraError> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0, len: s.len(), aliases };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

pub fn parse_ratfun(s: &str) -> Result<RatFun, AlgebraError> {
    parse_ratfun_with_aliases(s, &[])
}

pub fn parse_poly(s: &str) -> Result<MPoly, AlgebraError> {
    let r = parse_ratfun(s)?;
    r.as_polynomial().cloned().ok_or(AlgebraError::NotPolynomial)
}

pub fn parse_poly_with_aliases(s: &str, aliases: &[(&str, &str)]) -> Result<MPoly, AlgebraError> {
    let r = parse_ratfun_with_aliases(s, aliases)?;
    r.as_polynomial().cloned().ok_or(AlgebraError::NotPolynomial)
}
