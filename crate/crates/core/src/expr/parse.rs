//! Tokenizer and recursive-descent parser for the input grammar.
//!
//! Besides the core grammar this accepts `/` between factors, unary minus
//! and parenthesized negative exponents such as `^(-1)`.

use super::raw::{ProdNode, Raw};
use crate::arith::{BigRat, CycNum};
use crate::error::{Error, Result};
use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

const MAX_EXPONENT: i64 = 10_000;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            let v: BigInt = s[st..i].parse().map_err(|_| Error::syntax(st, "bad integer"))?;
            out.push((Tok::Num(v), st));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(s[st..i].to_string()), st));
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(Error::syntax(i, format!("unexpected character '{c}'")));
        }
    }
    out.push((Tok::End, s.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    next_id: usize,
}

const RESERVED: [&str; 3] = ["sqrt", "zeta", "Prod"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(Error::syntax(self.pos(), format!("expected '{c}'")))
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.bump() {
            Tok::Num(v) => Ok(v),
            _ => Err(Error::syntax(self.toks[self.i.saturating_sub(1)].1, "expected integer")),
        }
    }

    fn small_int(&mut self) -> Result<i64> {
        let p = self.pos();
        self.int()?.to_i64().ok_or_else(|| Error::syntax(p, "integer too large"))
    }

    fn ident(&mut self) -> Result<String> {
        let p = self.pos();
        match self.bump() {
            Tok::Ident(s) => Ok(s),
            _ => Err(Error::syntax(p, "expected identifier")),
        }
    }

    fn expr(&mut self, var: &str) -> Result<Raw> {
        let mut a = self.term(var)?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    a = Raw::Add(Box::new(a), Box::new(self.term(var)?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    a = Raw::Sub(Box::new(a), Box::new(self.term(var)?));
                }
                _ => return Ok(a),
            }
        }
    }

    fn term(&mut self, var: &str) -> Result<Raw> {
        let mut a = self.unary(var)?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    a = Raw::Mul(Box::new(a), Box::new(self.unary(var)?));
                }
                Tok::Sym('/') => {
                    self.bump();
                    a = Raw::Div(Box::new(a), Box::new(self.unary(var)?));
                }
                _ => return Ok(a),
            }
        }
    }

    fn unary(&mut self, var: &str) -> Result<Raw> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(Raw::Neg(Box::new(self.unary(var)?)));
        }
        self.factor(var)
    }

    fn factor(&mut self, var: &str) -> Result<Raw> {
        let a = self.atom(var)?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(a);
        }
        self.bump();
        let p = self.pos();
        let e = match self.peek() {
            Tok::Sym('(') => {
                self.bump();
                let neg = *self.peek() == Tok::Sym('-');
                if neg {
                    self.bump();
                }
                let v = self.small_int()?;
                self.expect(')')?;
                if neg {
                    -v
                } else {
                    v
                }
            }
            Tok::Sym('-') => {
                self.bump();
                -self.small_int()?
            }
            _ => self.small_int()?,
        };
        if e.abs() > MAX_EXPONENT {
            return Err(Error::syntax(p, "exponent too large"));
        }
        Ok(Raw::Pow(Box::new(a), e))
    }

    fn atom(&mut self, var: &str) -> Result<Raw> {
        let p = self.pos();
        match self.bump() {
            Tok::Num(v) => Ok(Raw::Const(CycNum::from_bigint(v))),
            Tok::Sym('(') => {
                let e = self.expr(var)?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "sqrt" => {
                    self.expect('(')?;
                    let q = self.pos();
                    let d = self.int()?;
                    self.expect(')')?;
                    Ok(Raw::Const(sqrt_const(&d).ok_or_else(|| Error::syntax(q, "sqrt needs a positive integer"))?))
                }
                "zeta" => {
                    self.expect('(')?;
                    let q = self.pos();
                    let n = self.int()?;
                    self.expect(')')?;
                    match n.to_u64() {
                        Some(n) if n >= 1 && n <= 100_000 => Ok(Raw::Const(CycNum::zeta(n))),
                        _ => Err(Error::syntax(q, "zeta needs a positive integer")),
                    }
                }
                "Prod" => self.prod(var, p),
                _ => {
                    if name != var {
                        return Err(Error::syntax(p, format!("variable '{name}' is not in scope (expected '{var}')")));
                    }
                    Ok(Raw::Var(name))
                }
            },
            _ => Err(Error::syntax(p, "expected an atom")),
        }
    }

    fn prod(&mut self, var: &str, pos: usize) -> Result<Raw> {
        self.expect('(')?;
        let vp = self.pos();
        let bound = self.ident()?;
        if RESERVED.contains(&bound.as_str()) {
            return Err(Error::syntax(vp, "reserved word used as a variable"));
        }
        if bound == var {
            return Err(Error::syntax(vp, "bound variable shadows the enclosing variable"));
        }
        self.expect(',')?;
        let lower = self.small_int()?;
        self.expect(',')?;
        let up = self.pos();
        let upper_var = self.ident()?;
        if upper_var != var {
            return Err(Error::syntax(up, format!("upper bound must be '{var}' with an optional offset")));
        }
        let upper_off = match self.peek() {
            Tok::Sym('+') => {
                self.bump();
                self.small_int()?
            }
            Tok::Sym('-') => {
                self.bump();
                -self.small_int()?
            }
            _ => 0,
        };
        self.expect(',')?;
        let body = self.expr(&bound)?;
        self.expect(')')?;
        let id = self.next_id;
        self.next_id += 1;
        Ok(Raw::Prod(Box::new(ProdNode { id, pos, var: bound, lower, upper_var, upper_off, body })))
    }
}

/// `sqrt(d)` for a positive integer, pulling out square factors.
fn sqrt_const(d: &BigInt) -> Option<CycNum> {
    if d.is_zero() || d < &BigInt::zero() {
        return None;
    }
    let mut m = BigInt::one();
    let mut r = BigInt::one();
    for (p, e) in crate::arith::intfac::factor(d) {
        m *= num_traits::pow(p.clone(), (e / 2) as usize);
        if e % 2 == 1 {
            r *= p;
        }
    }
    let q = BigRat::from_integer(m);
    if r.is_one() {
        return Some(CycNum::from_rat(q));
    }
    Some(CycNum::sqrt_embed(r.to_u64()?).ok()?.scale(&q))
}

/// Parses a top-level expression in the free variable `n`.
pub fn parse_raw(text: &str) -> Result<Raw> {
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0, next_id: 0 };
    let e = p.expr("n")?;
    if *p.peek() != Tok::End {
        return Err(Error::syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}
