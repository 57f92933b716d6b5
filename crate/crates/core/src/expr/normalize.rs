//! Rewrites a parse tree into the sum-of-monomials normal form.
//!
//! Upper bounds with offsets are unwound into products up to the plain
//! enclosing variable times boundary factors; every such rewrite records the
//! least value of the enclosing variable from which it is an identity.

use super::ast::{NestedProd, ProdExprAst, Term};
use super::raw::{Oracle, ProdNode, Raw};
use crate::arith::CycNum;
use crate::error::{Error, Result};
use crate::upoly::{z_function, RatFun};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

type Mono = Vec<(NestedProd, i64)>;

/// Sum of monomials with a validity floor (`i64::MIN` means unconstrained).
#[derive(Clone, Debug)]
struct NExpr {
    terms: BTreeMap<Mono, RatFun>,
    floor: i64,
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut m: BTreeMap<NestedProd, i64> = a.iter().cloned().collect();
    for (p, e) in b {
        *m.entry(p.clone()).or_insert(0) += e;
    }
    m.into_iter().filter(|(_, e)| *e != 0).collect()
}

impl NExpr {
    fn constant(c: RatFun) -> NExpr {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        NExpr { terms, floor: i64::MIN }
    }

    fn monomial(c: RatFun, m: Mono) -> NExpr {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        NExpr { terms, floor: i64::MIN }
    }

    fn add(mut self, o: NExpr) -> NExpr {
        for (m, c) in o.terms {
            let v = match self.terms.remove(&m) {
                Some(a) => a.add(&c),
                None => c,
            };
            if !v.is_zero() {
                self.terms.insert(m, v);
            }
        }
        self.floor = self.floor.max(o.floor);
        self
    }

    fn neg(mut self) -> NExpr {
        for c in self.terms.values_mut() {
            *c = c.neg();
        }
        self
    }

    fn mul(&self, o: &NExpr) -> NExpr {
        let mut out = NExpr::constant(RatFun::zero());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out = out.add(NExpr::monomial(ca.mul(cb), mono_mul(ma, mb)));
            }
        }
        out.floor = self.floor.max(o.floor);
        out
    }

    fn single(&self) -> Option<(RatFun, Mono)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        Some((c.clone(), m.clone()))
    }

    fn inv(&self, pos: usize) -> Result<NExpr> {
        if self.terms.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let (c, m) = self
            .single()
            .ok_or_else(|| Error::syntax(pos, "only a single monomial can be divided by or raised to a negative power"))?;
        let m: Mono = m.into_iter().map(|(p, e)| (p, -e)).collect();
        let mut r = NExpr::monomial(c.inv()?, m);
        r.floor = self.floor;
        Ok(r)
    }

    fn pow(&self, e: i64, pos: usize) -> Result<NExpr> {
        let base = if e < 0 { self.inv(pos)? } else { self.clone() };
        let mut acc = NExpr::constant(RatFun::one());
        acc.floor = self.floor;
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

struct Normalizer {
    oracle: Oracle,
}

fn pos_of(r: &Raw) -> usize {
    match r {
        Raw::Prod(p) => p.pos,
        _ => 0,
    }
}

impl Normalizer {
    fn norm(&mut self, r: &Raw) -> Result<NExpr> {
        Ok(match r {
            Raw::Const(c) => NExpr::constant(RatFun::constant(c.clone())),
            Raw::Var(_) => NExpr::constant(RatFun::x()),
            Raw::Add(a, b) => self.norm(a)?.add(self.norm(b)?),
            Raw::Sub(a, b) => self.norm(a)?.add(self.norm(b)?.neg()),
            Raw::Mul(a, b) => self.norm(a)?.mul(&self.norm(b)?),
            Raw::Div(a, b) => {
                let d = self.norm(b)?.inv(pos_of(b))?;
                self.norm(a)?.mul(&d)
            }
            Raw::Neg(a) => self.norm(a)?.neg(),
            Raw::Pow(a, e) => self.norm(a)?.pow(*e, pos_of(a))?,
            Raw::Prod(p) => self.prod(p)?,
        })
    }

    fn prod(&mut self, p: &ProdNode) -> Result<NExpr> {
        let body = self.norm(&p.body)?;
        let (f, mono) = body
            .single()
            .ok_or_else(|| Error::syntax(p.pos, "a product body must be a single monomial"))?;
        let mut lower = p.lower;
        let mut head = CycNum::one();
        let mut floor = i64::MIN;
        if body.floor > lower {
            // the rewritten body is only valid from body.floor on
            for k in lower..body.floor {
                head = &head * &self.oracle.eval_in(&p.body, k)?;
            }
            if head.is_zero() {
                return Err(Error::InvalidLowerBound { product: alloc::format!("Prod({}, {}, ...)", p.var, p.lower), at: lower });
            }
            lower = body.floor;
            floor = lower - 1;
        }
        let q = build_prod(lower, f, &mono)?;
        let mut out = q.clone();
        if p.upper_off != 0 {
            out = NExpr::constant(RatFun::one());
            let (c, m) = q.single().unwrap();
            out = out.mul(&NExpr::constant(c));
            for (np, e) in m {
                let u = unwind(&np, p.upper_off)?;
                out = out.mul(&u.pow(e, p.pos)?);
            }
        }
        out = out.mul(&NExpr::constant(RatFun::constant(head)));
        out.floor = out.floor.max(floor);
        Ok(out)
    }
}

/// `prod_{k=lower}^{x} f(k) prod_i P_i(k)^{e_i}` as a monomial in `x`.
fn build_prod(lower: i64, f: RatFun, mono: &Mono) -> Result<NExpr> {
    let chk = |np: NestedProd| -> Result<NestedProd> {
        np.check_level(0)?;
        Ok(np)
    };
    if mono.len() == 1 && mono[0].1 == 1 {
        let np = chk(mono[0].0.wrap(lower, f))?;
        return Ok(NExpr::monomial(RatFun::one(), alloc::vec![(np, 1)]));
    }
    let mut m: Mono = Vec::new();
    if !f.is_one() || mono.is_empty() {
        m.push((chk(NestedProd::new(alloc::vec![lower], alloc::vec![f])?)?, 1));
    }
    for (np, e) in mono {
        m.push((chk(np.wrap(lower, RatFun::one()))?, *e));
    }
    m.sort();
    Ok(NExpr::monomial(RatFun::one(), m))
}

/// `P(x + s)` in terms of products up to `x`, valid from the returned floor.
fn unwind(p: &NestedProd, s: i64) -> Result<NExpr> {
    let mut out = NExpr::monomial(RatFun::one(), alloc::vec![(p.clone(), 1)]);
    if s == 0 {
        return Ok(out);
    }
    let l = p.lowers()[0];
    let f = &p.mults()[0];
    let tail = p.tail();
    let shifts: Vec<i64> = if s > 0 { (1..=s).collect() } else { (0..-s).map(|t| -t).collect() };
    let mut floor = if s > 0 { l - 1 } else { l - 1 - s };
    for t in shifts {
        let mut fac = NExpr::constant(f.shift(t));
        if let Some(tl) = &tail {
            let u = unwind(tl, t)?;
            floor = floor.max(u.floor);
            fac = fac.mul(&u);
        }
        out = if s > 0 { out.mul(&fac) } else { out.mul(&fac.inv(0)?) };
    }
    out.floor = out.floor.max(floor);
    Ok(out)
}

/// Normal form of a top-level parse tree.
pub fn normalize(r: &Raw) -> Result<ProdExprAst> {
    let mut nz = Normalizer { oracle: Oracle::new() };
    let e = nz.norm(r)?;
    let mut floor = e.floor.max(0);
    for c in e.terms.values() {
        floor = floor.max(z_function(c.den())?);
    }
    let terms = e.terms.into_iter().map(|(mono, coeff)| Term { coeff, mono }).collect();
    Ok(ProdExprAst { terms, floor })
}
