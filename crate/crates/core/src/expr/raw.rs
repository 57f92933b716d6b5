use crate::arith::CycNum;
use crate::error::{Error, Result};
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// Parse tree exactly as written, including upper-bound offsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Raw {
    Const(CycNum),
    Var(String),
    Add(Box<Raw>, Box<Raw>),
    Sub(Box<Raw>, Box<Raw>),
    Mul(Box<Raw>, Box<Raw>),
    Div(Box<Raw>, Box<Raw>),
    Neg(Box<Raw>),
    Pow(Box<Raw>, i64),
    Prod(Box<ProdNode>),
}

/// `Prod(var, lower, upper_var + upper_off, body)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProdNode {
    pub id: usize,
    pub pos: usize,
    pub var: String,
    pub lower: i64,
    pub upper_var: String,
    pub upper_off: i64,
    pub body: Raw,
}

/// Literal evaluator by iterated multiplication.  Partial products of each
/// `Prod` node are memoized, which is sound because a body only depends on
/// its own bound variable.
#[derive(Default)]
pub struct Oracle {
    cache: BTreeMap<usize, Vec<CycNum>>,
}

impl Oracle {
    pub fn new() -> Oracle {
        Oracle::default()
    }

    /// Value of a top-level expression (free variable `n`) at `n`.
    pub fn eval(&mut self, r: &Raw, n: i64) -> Result<CycNum> {
        self.eval_in(r, n)
    }

    /// Value of `r` with its single free variable bound to `val`.
    pub fn eval_in(&mut self, r: &Raw, val: i64) -> Result<CycNum> {
        Ok(match r {
            Raw::Const(c) => c.clone(),
            Raw::Var(_) => CycNum::from_int(val),
            Raw::Add(a, b) => &self.eval_in(a, val)? + &self.eval_in(b, val)?,
            Raw::Sub(a, b) => &self.eval_in(a, val)? - &self.eval_in(b, val)?,
            Raw::Mul(a, b) => {
                let x = self.eval_in(a, val)?;
                if x.is_zero() {
                    // still evaluate for errors in b
                    self.eval_in(b, val)?;
                    return Ok(x);
                }
                &x * &self.eval_in(b, val)?
            }
            Raw::Div(a, b) => {
                let d = self.eval_in(b, val)?;
                self.eval_in(a, val)?.div(&d)?
            }
            Raw::Neg(a) => -self.eval_in(a, val)?,
            Raw::Pow(a, e) => self.eval_in(a, val)?.try_pow(*e)?,
            Raw::Prod(p) => self.prod(p, val + p.upper_off)?,
        })
    }

    fn prod(&mut self, p: &ProdNode, upper: i64) -> Result<CycNum> {
        if upper < p.lower {
            return Ok(CycNum::one());
        }
        let need = (upper - p.lower + 1) as usize;
        let mut v = self.cache.remove(&p.id).unwrap_or_else(|| vec![CycNum::one()]);
        while v.len() <= need {
            let k = p.lower + v.len() as i64 - 1;
            let b = match self.eval_in(&p.body, k) {
                Ok(b) => b,
                Err(e) => {
                    self.cache.insert(p.id, v);
                    return Err(e);
                }
            };
            let last = v.last().unwrap().clone();
            v.push(&last * &b);
        }
        let out = v[need].clone();
        self.cache.insert(p.id, v);
        Ok(out)
    }
}

impl Raw {
    /// One-shot evaluation at `n`.
    pub fn eval(&self, n: i64) -> Result<CycNum> {
        Oracle::new().eval(self, n)
    }

    /// Values at `from..=to`; `Err` entries mark poles.
    pub fn eval_range(&self, from: i64, to: i64) -> Vec<Result<CycNum>> {
        let mut o = Oracle::new();
        (from..=to).map(|n| o.eval(self, n)).collect()
    }

    /// Largest conductor needed by the literals, as an lcm.
    pub fn conductor(&self) -> u64 {
        use crate::arith::lcm_u64;
        match self {
            Raw::Const(c) => c.conductor(),
            Raw::Var(_) => 1,
            Raw::Add(a, b) | Raw::Sub(a, b) | Raw::Mul(a, b) | Raw::Div(a, b) => {
                lcm_u64(a.conductor(), b.conductor())
            }
            Raw::Neg(a) | Raw::Pow(a, _) => a.conductor(),
            Raw::Prod(p) => p.body.conductor(),
        }
    }

    /// `a - b`, renumbering the products of `b` so memo keys stay distinct.
    pub fn sub(a: Raw, mut b: Raw) -> Raw {
        let off = a.max_id() + 1;
        b.shift_ids(off);
        Raw::Sub(Box::new(a), Box::new(b))
    }

    fn max_id(&self) -> usize {
        match self {
            Raw::Const(_) | Raw::Var(_) => 0,
            Raw::Add(a, b) | Raw::Sub(a, b) | Raw::Mul(a, b) | Raw::Div(a, b) => a.max_id().max(b.max_id()),
            Raw::Neg(a) | Raw::Pow(a, _) => a.max_id(),
            Raw::Prod(p) => p.id.max(p.body.max_id()),
        }
    }

    fn shift_ids(&mut self, off: usize) {
        match self {
            Raw::Const(_) | Raw::Var(_) => {}
            Raw::Add(a, b) | Raw::Sub(a, b) | Raw::Mul(a, b) | Raw::Div(a, b) => {
                a.shift_ids(off);
                b.shift_ids(off);
            }
            Raw::Neg(a) | Raw::Pow(a, _) => a.shift_ids(off),
            Raw::Prod(p) => {
                p.id += off;
                p.body.shift_ids(off);
            }
        }
    }
}

/// Division by zero inside the literal evaluation.
pub fn is_pole(e: &Error) -> bool {
    matches!(e, Error::DivisionByZero)
}
