//! Recursive-descent parser for polynomial matrix entries.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := name | int | '(' expr ')' | '-' factor
//! ```
//!
//! Names are parameter identifiers or `i`, the imaginary unit. The grammar
//! has no division: entries are polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::multipoly::MultiPoly;
use super::scalar::{GaussRat, Ring};
use crate::error::{Error, Result};

const MAX_EXPONENT: u32 = 256;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Int(BigInt),
    Number(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            d if d.is_ascii_digit() => {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let tok = if s.contains('.') {
                    Tok::Number(s)
                } else {
                    Tok::Int(s.parse().expect("digits"))
                };
                out.push((start, tok));
                continue;
            }
            a if a.is_alphabetic() || a == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((start, Tok::Name(chars[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

/// What the parser builds: a polynomial, or a value at a fixed point.
trait Semantics {
    type Value;
    fn int(&self, k: &BigInt) -> Self::Value;
    fn imag(&self) -> Self::Value;
    fn param(&self, idx: usize) -> Self::Value;
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn neg(&self, a: Self::Value) -> Self::Value;
    fn pow(&self, a: Self::Value, e: u32) -> Self::Value;
}

struct Expand;

impl Semantics for Expand {
    type Value = MultiPoly;
    fn int(&self, k: &BigInt) -> MultiPoly {
        MultiPoly::constant(GaussRat::real(BigRational::from_integer(k.clone())))
    }
    fn imag(&self) -> MultiPoly {
        MultiPoly::constant(GaussRat::i())
    }
    fn param(&self, idx: usize) -> MultiPoly {
        MultiPoly::var(idx)
    }
    fn add(&self, a: MultiPoly, b: MultiPoly) -> MultiPoly {
        a + b
    }
    fn sub(&self, a: MultiPoly, b: MultiPoly) -> MultiPoly {
        a - b
    }
    fn mul(&self, a: MultiPoly, b: MultiPoly) -> MultiPoly {
        a * b
    }
    fn neg(&self, a: MultiPoly) -> MultiPoly {
        -a
    }
    fn pow(&self, a: MultiPoly, e: u32) -> MultiPoly {
        a.pow(e)
    }
}

struct Evaluate<'a> {
    point: &'a [GaussRat],
}

impl Semantics for Evaluate<'_> {
    type Value = GaussRat;
    fn int(&self, k: &BigInt) -> GaussRat {
        GaussRat::real(BigRational::from_integer(k.clone()))
    }
    fn imag(&self) -> GaussRat {
        GaussRat::i()
    }
    fn param(&self, idx: usize) -> GaussRat {
        self.point[idx].clone()
    }
    fn add(&self, a: GaussRat, b: GaussRat) -> GaussRat {
        a + b
    }
    fn sub(&self, a: GaussRat, b: GaussRat) -> GaussRat {
        a - b
    }
    fn mul(&self, a: GaussRat, b: GaussRat) -> GaussRat {
        a * b
    }
    fn neg(&self, a: GaussRat) -> GaussRat {
        -a
    }
    fn pow(&self, a: GaussRat, e: u32) -> GaussRat {
        // repeated multiplication keeps this path independent of Ring::pow
        (0..e).fold(GaussRat::one(), |acc, _| acc * a.clone())
    }
}

struct Parser<'a, S: Semantics> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    params: &'a [String],
    sem: S,
}

impl<S: Semantics> Parser<'_, S> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<S::Value> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.sem.add(acc, t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.sem.sub(acc, t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<S::Value> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.sem.mul(acc, f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<S::Value> {
        let base = self.base()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                let e: u32 = k
                    .try_into()
                    .ok()
                    .filter(|&e| e <= MAX_EXPONENT)
                    .ok_or_else(|| Error::Syntax {
                        pos: at,
                        msg: format!("exponent exceeds {MAX_EXPONENT}"),
                    })?;
                Ok(self.sem.pow(base, e))
            }
            Some(Tok::Number(s)) => Err(Error::NonIntegerExponent { pos: at, text: s }),
            Some(Tok::Minus) => Err(Error::NonIntegerExponent {
                pos: at,
                text: "negative exponent".into(),
            }),
            Some(Tok::Name(s)) => Err(Error::NonIntegerExponent { pos: at, text: s }),
            Some(Tok::LParen) => Err(Error::NonIntegerExponent {
                pos: at,
                text: "parenthesized exponent".into(),
            }),
            _ => self.syntax("expected exponent after '^'"),
        }
    }

    fn base(&mut self) -> Result<S::Value> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Name(name)) => {
                self.pos += 1;
                if let Some(idx) = self.params.iter().position(|p| *p == name) {
                    Ok(self.sem.param(idx))
                } else if name == "i" {
                    Ok(self.sem.imag())
                } else {
                    Err(Error::UnknownIdentifier { pos: at, name })
                }
            }
            Some(Tok::Int(k)) => {
                self.pos += 1;
                Ok(self.sem.int(&k))
            }
            Some(Tok::Number(s)) => Err(Error::Syntax {
                pos: at,
                msg: format!("decimal literal '{s}' not allowed; entries are integer polynomials"),
            }),
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.syntax("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                let f = self.factor()?;
                Ok(self.sem.neg(f))
            }
            Some(t) => self.syntax(format!("unexpected token {t:?}")),
            None => self.syntax("unexpected end of input"),
        }
    }
}

fn run<S: Semantics>(text: &str, params: &[String], sem: S) -> Result<S::Value> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.chars().count(),
        params,
        sem,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.syntax("trailing input");
    }
    Ok(v)
}

/// Parses an entry expression into an expanded polynomial.
pub fn parse_entry(text: &str, params: &[String]) -> Result<MultiPoly> {
    run(text, params, Expand)
}

/// Evaluates an entry expression directly at a point, without expansion.
pub fn eval_entry(text: &str, params: &[String], point: &[GaussRat]) -> Result<GaussRat> {
    assert_eq!(params.len(), point.len());
    run(text, params, Evaluate { point })
}
