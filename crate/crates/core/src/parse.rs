//! Expression parser for [`MixedElement`].
//!
//! Grammar (EBNF):
//!
//! ```text
//! expr    = term , { ("+" | "-") , term } ;
//! term    = unary , { ("*" | "/") , unary } ;
//! unary   = ("-" | "+") , unary | power ;
//! power   = atom , { "^" , exponent } ;
//! exponent= ["-"] , integer | "(" , ["-"] , integer , ")" | atom ;
//! atom    = integer | "i" | "h" | var | "(" , expr , ")" ;
//! var     = ("x" | "y" | "dx") , integer ;
//! ```
//!
//! `a ^ n` with an integer `n` is a power; `a ^ b` for any other atom `b` is
//! the wedge (graded) product, so `dx2^dx1` reads as `dx2 ∧ dx1`. Negative
//! powers are only allowed for pure `h` monomials. Division is only by
//! nonzero constants. Rationals are written `(1/2)`.

use num::{BigInt, BigRational, Zero};

use crate::element::{Key, MixedElement, MultiIndex};
use crate::error::{Error, Result};
use crate::policy::TruncationPolicy;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    I,
    H,
    X(usize),
    Y(usize),
    Dx(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut p = 0;
    let read_int = |p: &mut usize| -> Option<BigInt> {
        let start = *p;
        while *p < bytes.len() && bytes[*p].is_ascii_digit() {
            *p += 1;
        }
        if start == *p {
            None
        } else {
            text[start..*p].parse().ok()
        }
    };
    while p < bytes.len() {
        let c = bytes[p] as char;
        let start = p;
        if c.is_whitespace() {
            p += 1;
            continue;
        }
        let tok = match c {
            '+' => {
                p += 1;
                Tok::Plus
            }
            '-' => {
                p += 1;
                Tok::Minus
            }
            '*' => {
                p += 1;
                Tok::Star
            }
            '/' => {
                p += 1;
                Tok::Slash
            }
            '^' => {
                p += 1;
                Tok::Caret
            }
            '(' => {
                p += 1;
                Tok::LParen
            }
            ')' => {
                p += 1;
                Tok::RParen
            }
            '0'..='9' => Tok::Int(read_int(&mut p).unwrap()),
            'i' => {
                p += 1;
                Tok::I
            }
            'h' => {
                p += 1;
                Tok::H
            }
            'x' | 'y' => {
                p += 1;
                let idx = read_int(&mut p)
                    .ok_or(Error::Parse { pos: p, msg: format!("expected index after '{}'", c) })?;
                let idx: usize = idx
                    .try_into()
                    .map_err(|_| Error::Parse { pos: start, msg: "variable index too large".into() })?;
                if c == 'x' {
                    Tok::X(idx)
                } else {
                    Tok::Y(idx)
                }
            }
            'd' => {
                if bytes.get(p + 1) != Some(&b'x') {
                    return Err(Error::Parse { pos: p, msg: "expected 'dx'".into() });
                }
                p += 2;
                let idx = read_int(&mut p)
                    .ok_or(Error::Parse { pos: p, msg: "expected index after 'dx'".into() })?;
                let idx: usize = idx
                    .try_into()
                    .map_err(|_| Error::Parse { pos: start, msg: "variable index too large".into() })?;
                Tok::Dx(idx)
            }
            other => {
                return Err(Error::Parse { pos: p, msg: format!("unexpected character '{}'", other) })
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    dim: usize,
    end: usize,
    overflow: bool,
    _text: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.peek() == Some(&t) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected {:?}", t))
        }
    }

    fn mul(&mut self, a: &MixedElement, b: &MixedElement) -> MixedElement {
        let mut out = MixedElement::zero(self.dim);
        for (ka, ca) in a.terms() {
            for (kb, cb) in b.terms() {
                let Some(sign) = crate::element::wedge_sign(ka.forms, kb.forms) else { continue };
                let mut alpha = MultiIndex::zero();
                let mut beta = MultiIndex::zero();
                let mut ok = true;
                for j in 0..self.dim {
                    let s = ka.alpha.get(j) + kb.alpha.get(j);
                    let t = ka.beta.get(j) + kb.beta.get(j);
                    if s > u8::MAX as u32 || t > u8::MAX as u32 {
                        ok = false;
                        break;
                    }
                    alpha.0[j] = s as u8;
                    beta.0[j] = t as u8;
                }
                if !ok {
                    self.overflow = true;
                    continue;
                }
                let key = Key { hbar: ka.hbar + kb.hbar, forms: ka.forms | kb.forms, alpha, beta };
                let c = (ca * cb).scale_int(sign);
                out.add_term(key, c);
            }
        }
        out
    }

    fn expr(&mut self) -> Result<MixedElement> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MixedElement> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let u = self.unary()?;
                    acc = self.mul(&acc, &u);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let pos = self.pos();
                    let u = self.unary()?;
                    let c = as_constant(&u).filter(|c| !c.is_zero()).ok_or(Error::Parse {
                        pos,
                        msg: "division only by nonzero constants".into(),
                    })?;
                    acc = acc.scale(&c.inv().unwrap());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MixedElement> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn signed_int(&mut self) -> Option<i64> {
        let save = self.at;
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        if let Some(Tok::Int(v)) = self.peek().cloned() {
            self.bump();
            let v: i64 = v.try_into().ok()?;
            return Some(if neg { -v } else { v });
        }
        self.at = save;
        None
    }

    fn power(&mut self) -> Result<MixedElement> {
        let mut base = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            self.bump();
            let pos = self.pos();
            // integer exponent, optionally parenthesized
            let exp = if let Some(e) = self.signed_int() {
                Some(e)
            } else if self.peek() == Some(&Tok::LParen) {
                let save = self.at;
                self.bump();
                match self.signed_int() {
                    Some(e) if self.peek() == Some(&Tok::RParen) => {
                        self.bump();
                        Some(e)
                    }
                    _ => {
                        self.at = save;
                        None
                    }
                }
            } else {
                None
            };
            base = match exp {
                Some(e) if e >= 0 => {
                    if e > 10_000 {
                        return Err(Error::Parse { pos, msg: "exponent too large".into() });
                    }
                    let mut acc = MixedElement::one(self.dim);
                    for _ in 0..e {
                        acc = self.mul(&acc, &base);
                        if acc.is_zero() {
                            break;
                        }
                    }
                    acc
                }
                Some(e) => {
                    let inv = invert_hbar_monomial(&base).ok_or(Error::Parse {
                        pos,
                        msg: "negative powers only for pure h monomials".into(),
                    })?;
                    let mut acc = MixedElement::one(self.dim);
                    for _ in 0..(-e) {
                        acc = self.mul(&acc, &inv);
                    }
                    acc
                }
                None => {
                    let rhs = self.atom()?;
                    self.mul(&base, &rhs)
                }
            };
        }
        Ok(base)
    }

    fn var_index(&self, j: usize) -> Result<usize> {
        if j == 0 || j > self.dim {
            self.err(format!("variable index {} outside 1..={}", j, self.dim))
        } else {
            Ok(j)
        }
    }

    fn atom(&mut self) -> Result<MixedElement> {
        let pos = self.pos();
        let Some(t) = self.bump() else {
            return Err(Error::Parse { pos, msg: "unexpected end of input".into() });
        };
        let d = self.dim;
        match t {
            Tok::Int(v) => Ok(MixedElement::constant(d, Scalar::real(BigRational::from_integer(v)))),
            Tok::I => Ok(MixedElement::constant(d, Scalar::i())),
            Tok::H => Ok(MixedElement::hbar_pow(d, 1)),
            Tok::X(j) => {
                self.at -= 1;
                let j = self.var_index(j)?;
                self.at += 1;
                Ok(MixedElement::x(d, j))
            }
            Tok::Y(j) => {
                self.at -= 1;
                let j = self.var_index(j)?;
                self.at += 1;
                Ok(MixedElement::y(d, j))
            }
            Tok::Dx(j) => {
                self.at -= 1;
                let j = self.var_index(j)?;
                self.at += 1;
                Ok(MixedElement::dx(d, j))
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => Err(Error::Parse { pos, msg: format!("unexpected token {:?}", other) }),
        }
    }
}

fn as_constant(e: &MixedElement) -> Option<Scalar> {
    if e.is_zero() {
        return Some(Scalar::zero());
    }
    if e.len() == 1 {
        let (k, c) = e.terms().next().unwrap();
        if *k == Key::one() {
            return Some(c.clone());
        }
    }
    None
}

fn invert_hbar_monomial(e: &MixedElement) -> Option<MixedElement> {
    if e.len() != 1 {
        return None;
    }
    let (k, c) = e.terms().next().unwrap();
    if k.forms != 0 || k.alpha.degree() != 0 || k.beta.degree() != 0 {
        return None;
    }
    let mut nk = *k;
    nk.hbar = -k.hbar;
    Some(MixedElement::term(e.dim(), nk, c.inv()?))
}

/// Result of [`parse_element_with_notice`].
#[derive(Debug, Clone)]
pub struct Parsed {
    pub element: MixedElement,
    /// Set when truncation or exponent overflow discarded terms.
    pub truncated: bool,
}

/// Parse and truncate per `policy`; truncation is reported, not an error.
pub fn parse_element_with_notice(text: &str, policy: &TruncationPolicy) -> Result<Parsed> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, dim: policy.dim(), end: text.len(), overflow: false, _text: text };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return p.err("trailing input");
    }
    let t = e.truncate(policy);
    let truncated = p.overflow || t.len() != e.len();
    Ok(Parsed { element: t, truncated })
}

pub fn parse_element(text: &str, policy: &TruncationPolicy) -> Result<MixedElement> {
    parse_element_with_notice(text, policy).map(|p| p.element)
}

/// Parse a scalar literal such as `3`, `-1/2`, `(1/2)*i`, `2 - i`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let e = parse_element(text, &TruncationPolicy::unbounded(1))?;
    as_constant(&e).ok_or(Error::Parse { pos: 0, msg: format!("'{}' is not a constant", text) })
}

/// Parse a rational number (no imaginary part).
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = parse_scalar(text)?;
    if !s.is_real() {
        return Err(Error::Parse { pos: 0, msg: format!("'{}' is not real", text) });
    }
    Ok(s.re)
}
