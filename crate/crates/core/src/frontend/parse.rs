//! Recursive-descent parser for Δ-polynomial expressions.
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' nat)?
//! atom   := rational | generator | jet | '(' expr ')'
//! jet    := deriv* var
//! deriv  := 'd' nat ('^' nat)? | 'D' ('^' nat)?
//! var    := 'x' nat ('_' nat)? | 'y' nat
//! ```
//!
//! `y_j` is `x_j` of block 2 and `x_j_b` is `x_j` of block `b`. Divisors
//! must be nonzero base-field elements.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::{Coeff, Field, Rational};
use crate::base_field::BaseElem;
use crate::delta::{DeltaPoly, DerivOp, Indet};

/// Largest exponent or index accepted by the parser.
pub const MAX_EXPONENT: u32 = 64;
/// Bound on the work of a single product, measured in term pairs.
pub const MAX_PRODUCT_WORK: usize = 200_000;
/// Bound on parenthesis nesting.
pub const MAX_DEPTH: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    UnknownIdentifier(String),
    VariableOutOfRange(String),
    DerivationOutOfRange,
    NonConstantDivisor,
    DivisionByZero,
    NumberTooLarge,
    NotConstant,
    TooLarge,
    TooDeep,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected {t}"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::UnknownIdentifier(s) => write!(f, "unknown generator or variable {s:?}"),
            ParseErrorKind::VariableOutOfRange(s) => write!(f, "variable {s} out of range"),
            ParseErrorKind::DerivationOutOfRange => write!(f, "derivation index out of range"),
            ParseErrorKind::NonConstantDivisor => write!(f, "divisor must be a base-field element"),
            ParseErrorKind::DivisionByZero => write!(f, "division by zero"),
            ParseErrorKind::NumberTooLarge => write!(f, "exponent or index too large"),
            ParseErrorKind::NotConstant => write!(f, "expected a base-field element"),
            ParseErrorKind::TooLarge => write!(f, "expression too large"),
            ParseErrorKind::TooDeep => write!(f, "expression nested too deeply"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("at {pos}: {kind}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub kind: ParseErrorKind,
}

/// How `D` is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DMode {
    /// `D^k` moves a jet `k` blocks up.
    Shift,
    /// `D` is structural derivation number `index` (0-based).
    Slot(usize),
}

/// Everything the parser needs to know about the ring.
#[derive(Clone, Copy, Debug)]
pub struct ParseContext<'a> {
    pub generators: &'a [String],
    pub n: usize,
    /// Length of derivative operators.
    pub m: usize,
    pub d_mode: DMode,
}

impl<'a> ParseContext<'a> {
    pub fn new(generators: &'a [String], n: usize, m: usize) -> Self {
        ParseContext { generators, n, m, d_mode: DMode::Shift }
    }

    /// Base-field expressions only: no variables at all.
    pub fn constants(generators: &'a [String]) -> Self {
        ParseContext { generators, n: 0, m: 0, d_mode: DMode::Shift }
    }
}

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

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("number {n}"),
        Tok::Ident(s) => format!("identifier {s:?}"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Num(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().expect("in bounds");
                return Err(ParseError { pos: i, kind: ParseErrorKind::UnexpectedChar(ch) });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

enum Word {
    Var { block: usize, var: usize },
    Deriv(usize),
    DShift,
    Generator(usize),
}

fn small(digits: &str) -> Option<u32> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse::<u32>().ok()
}

/// Bound on the bit length of any rational appearing in a product.
pub const MAX_COEFF_BITS: u64 = 65_536;

/// Terms plus coefficient terms: a rough measure of multiplication cost.
fn size(p: &DeltaPoly) -> usize {
    p.terms().map(|(_, c)| 1 + c.num().len() + c.den().len()).sum()
}

fn coeff_bits(p: &DeltaPoly) -> u64 {
    p.terms()
        .flat_map(|(_, c)| c.num().terms().chain(c.den().terms()))
        .map(|(_, q)| q.numer().bits() + q.denom().bits())
        .max()
        .unwrap_or(0)
}

struct Parser<'a> {
    ctx: ParseContext<'a>,
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), kind })
    }

    fn unexpected<T>(&self) -> Result<T, ParseError> {
        match self.peek() {
            Some(t) => self.err(ParseErrorKind::UnexpectedToken(describe(t))),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u32, ParseError> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let v = u32::try_from(n).ok().filter(|&v| v <= MAX_EXPONENT);
                match v {
                    Some(v) => {
                        self.at += 1;
                        Ok(v)
                    }
                    None => self.err(ParseErrorKind::NumberTooLarge),
                }
            }
            _ => self.unexpected(),
        }
    }

    fn classify(&self, word: &str) -> Result<Word, ParseError> {
        if word == "D" {
            return match self.ctx.d_mode {
                DMode::Shift => Ok(Word::DShift),
                DMode::Slot(i) => Ok(Word::Deriv(i)),
            };
        }
        if let Some(g) = self.ctx.generators.iter().position(|g| g == word) {
            return Ok(Word::Generator(g));
        }
        let (head, rest) = word.split_at(1);
        let index = |digits: &str| -> Result<Option<usize>, ParseError> {
            match small(digits) {
                Some(v) if v <= MAX_EXPONENT => Ok(Some(v as usize)),
                Some(_) => self.err(ParseErrorKind::NumberTooLarge),
                None if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) => {
                    self.err(ParseErrorKind::NumberTooLarge)
                }
                None => Ok(None),
            }
        };
        let var_out = || self.err(ParseErrorKind::VariableOutOfRange(word.to_string()));
        match head {
            "d" => {
                if let Some(i) = index(rest)? {
                    if i == 0 || i > self.ctx.m {
                        return self.err(ParseErrorKind::DerivationOutOfRange);
                    }
                    return Ok(Word::Deriv(i - 1));
                }
            }
            "y" => {
                if let Some(j) = index(rest)? {
                    if j == 0 || j > self.ctx.n {
                        return var_out();
                    }
                    return Ok(Word::Var { block: 1, var: j - 1 });
                }
            }
            "x" => {
                let (vpart, bpart) = match rest.split_once('_') {
                    Some((v, b)) => (v, Some(b)),
                    None => (rest, None),
                };
                if let Some(j) = index(vpart)? {
                    let block = match bpart {
                        None => Some(1),
                        Some(b) => index(b)?,
                    };
                    if let Some(b) = block {
                        if j == 0 || j > self.ctx.n || b == 0 {
                            return var_out();
                        }
                        return Ok(Word::Var { block: b - 1, var: j - 1 });
                    }
                }
            }
            _ => {}
        }
        self.err(ParseErrorKind::UnknownIdentifier(word.to_string()))
    }

    fn expr(&mut self) -> Result<DeltaPoly, ParseError> {
        let negate = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc + self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<DeltaPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.peek() == Some(&Tok::Star) {
                let pos = self.pos();
                self.at += 1;
                let rhs = self.factor()?;
                acc = checked_mul(&acc, &rhs, pos)?;
            } else if self.peek() == Some(&Tok::Slash) {
                let pos = self.pos();
                self.at += 1;
                let d = self.factor()?;
                let c = d.as_constant().ok_or(ParseError { pos, kind: ParseErrorKind::NonConstantDivisor })?;
                if d.is_zero() {
                    return Err(ParseError { pos, kind: ParseErrorKind::DivisionByZero });
                }
                acc = acc.scale(&c.inv());
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<DeltaPoly, ParseError> {
        let mut negate = false;
        while self.eat(&Tok::Minus) {
            negate = !negate;
        }
        let value = self.power()?;
        Ok(if negate { -value } else { value })
    }

    fn power(&mut self) -> Result<DeltaPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            let pos = self.pos();
            self.at += 1;
            let e = self.nat()?;
            let mut acc = DeltaPoly::one();
            for _ in 0..e {
                acc = checked_mul(&acc, &base, pos)?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<DeltaPoly, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(DeltaPoly::constant(BaseElem::rational(Rational::from_integer(n))))
            }
            Some(Tok::LParen) => {
                if self.depth >= MAX_DEPTH {
                    return self.err(ParseErrorKind::TooDeep);
                }
                self.at += 1;
                self.depth += 1;
                let e = self.expr()?;
                self.depth -= 1;
                if !self.eat(&Tok::RParen) {
                    return self.unexpected();
                }
                Ok(e)
            }
            Some(Tok::Ident(word)) => match self.classify(&word)? {
                Word::Generator(g) => {
                    self.at += 1;
                    Ok(DeltaPoly::constant(BaseElem::generator(g)))
                }
                _ => self.jet(),
            },
            _ => self.unexpected(),
        }
    }

    fn jet(&mut self) -> Result<DeltaPoly, ParseError> {
        let mut op = vec![0u32; self.ctx.m];
        let mut shift = 0usize;
        loop {
            let word = match self.peek() {
                Some(Tok::Ident(w)) => w.clone(),
                _ => return self.unexpected(),
            };
            match self.classify(&word)? {
                Word::Var { block, var } => {
                    self.at += 1;
                    let total: u32 = op.iter().sum();
                    if total > MAX_EXPONENT {
                        return self.err(ParseErrorKind::NumberTooLarge);
                    }
                    return Ok(DeltaPoly::var(Indet::new(block + shift, var, DerivOp::from_exponents(op))));
                }
                Word::Deriv(i) => {
                    self.at += 1;
                    let e = if self.eat(&Tok::Caret) { self.nat()? } else { 1 };
                    op[i] += e;
                }
                Word::DShift => {
                    self.at += 1;
                    let e = if self.eat(&Tok::Caret) { self.nat()? } else { 1 };
                    shift += e as usize;
                    if shift > MAX_EXPONENT as usize {
                        return self.err(ParseErrorKind::NumberTooLarge);
                    }
                }
                Word::Generator(_) => return self.unexpected(),
            }
        }
    }
}

fn checked_mul(a: &DeltaPoly, b: &DeltaPoly, pos: usize) -> Result<DeltaPoly, ParseError> {
    let too_large = ParseError { pos, kind: ParseErrorKind::TooLarge };
    let work = size(a).checked_mul(size(b)).ok_or(too_large.clone())?;
    let degree = a.total_degree().unwrap_or(0) + b.total_degree().unwrap_or(0);
    let bits = coeff_bits(a) + coeff_bits(b);
    if work > MAX_PRODUCT_WORK || degree > 4 * MAX_EXPONENT || bits > MAX_COEFF_BITS {
        return Err(too_large);
    }
    Ok(a * b)
}

pub fn parse_poly(text: &str, ctx: ParseContext<'_>) -> Result<DeltaPoly, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { ctx, toks, at: 0, end: text.len(), depth: 0 };
    let out = p.expr()?;
    if p.at != p.toks.len() {
        return p.unexpected();
    }
    Ok(out)
}

/// Parses a base-field element such as `t^2 - 1/2` or `1/(t + 1)`.
pub fn parse_base_elem(text: &str, generators: &[String]) -> Result<BaseElem, ParseError> {
    let p = parse_poly(text, ParseContext::constants(generators))?;
    if p.is_zero() {
        return Ok(BaseElem::zero());
    }
    p.as_constant().ok_or(ParseError { pos: 0, kind: ParseErrorKind::NotConstant })
}
