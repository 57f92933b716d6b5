use crate::arith::{lcm_u64, CycNum};
use crate::error::{Error, Result};
use crate::upoly::{z_function, RatFun};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

/// Bound-variable names used when printing, outermost first.
const VARS: [&str; 8] = ["k", "j", "i", "l", "m", "p", "q", "r"];

pub(crate) fn var_name(level: usize) -> String {
    VARS.get(level).map(|s| s.to_string()).unwrap_or_else(|| format!("k{level}"))
}

/// `prod_{k1=l1}^{n} f1(k1) prod_{k2=l2}^{k1} f2(k2) ... prod_{km=lm}^{k(m-1)} fm(km)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NestedProd {
    lowers: Vec<i64>,
    mults: Vec<RatFun>,
}

impl NestedProd {
    /// Checks that every multiplicand is defined and nonzero from its lower bound on.
    pub fn new(lowers: Vec<i64>, mults: Vec<RatFun>) -> Result<NestedProd> {
        assert!(!lowers.is_empty() && lowers.len() == mults.len());
        let p = NestedProd { lowers, mults };
        for i in 0..p.depth() {
            p.check_level(i)?;
        }
        Ok(p)
    }

    /// Product in factored form: all multiplicands 1 except the innermost `base`.
    pub fn factored(lowers: Vec<i64>, base: RatFun) -> Result<NestedProd> {
        let mut mults = vec![RatFun::one(); lowers.len()];
        *mults.last_mut().unwrap() = base;
        NestedProd::new(lowers, mults)
    }

    pub(crate) fn check_level(&self, i: usize) -> Result<()> {
        let f = &self.mults[i];
        let l = self.lowers[i];
        if l < 0 {
            return Err(Error::InvalidLowerBound { product: self.to_text("n"), at: l });
        }
        if f.is_zero() {
            return Err(Error::InvalidLowerBound { product: self.to_text("n"), at: l });
        }
        let z = z_function(f.num())?.max(z_function(f.den())?);
        if z > l {
            return Err(Error::InvalidLowerBound { product: self.to_text("n"), at: z - 1 });
        }
        Ok(())
    }

    pub fn depth(&self) -> usize {
        self.lowers.len()
    }

    pub fn lowers(&self) -> &[i64] {
        &self.lowers
    }

    pub fn mults(&self) -> &[RatFun] {
        &self.mults
    }

    pub fn max_lower(&self) -> i64 {
        *self.lowers.iter().max().unwrap()
    }

    /// Innermost multiplicand, the base of a product in factored form.
    pub fn base(&self) -> &RatFun {
        self.mults.last().unwrap()
    }

    pub fn is_factored(&self) -> bool {
        self.mults[..self.depth() - 1].iter().all(|f| f.is_one())
    }

    /// The product with its outermost level removed (`None` at depth 1).
    pub fn tail(&self) -> Option<NestedProd> {
        if self.depth() == 1 {
            None
        } else {
            Some(NestedProd { lowers: self.lowers[1..].to_vec(), mults: self.mults[1..].to_vec() })
        }
    }

    /// Prepends an outer level `(lower, f)`.
    pub fn wrap(&self, lower: i64, f: RatFun) -> NestedProd {
        let mut lowers = vec![lower];
        lowers.extend_from_slice(&self.lowers);
        let mut mults = vec![f];
        mults.extend_from_slice(&self.mults);
        NestedProd { lowers, mults }
    }

    pub fn conductor(&self) -> u64 {
        self.mults.iter().fold(1, |a, f| lcm_u64(a, f.conductor()))
    }

    /// Values `P(0), ..., P(nmax)` by the defining recurrence.
    pub fn values(&self, nmax: i64) -> Vec<CycNum> {
        let len = (nmax.max(-1) + 1) as usize;
        let mut inner: Option<Vec<CycNum>> = None;
        for lvl in (0..self.depth()).rev() {
            let l = self.lowers[lvl];
            let f = &self.mults[lvl];
            let mut v = Vec::with_capacity(len);
            let mut acc = CycNum::one();
            for u in 0..len {
                let k = u as i64;
                if k >= l {
                    let mut t = f.eval_at(k);
                    if let Some(inn) = &inner {
                        t = &t * &inn[u];
                    }
                    acc = &acc * &t;
                }
                v.push(acc.clone());
            }
            inner = Some(v);
        }
        inner.unwrap()
    }

    pub fn eval(&self, n: i64) -> CycNum {
        if n < 0 {
            return CycNum::one();
        }
        self.values(n).pop().unwrap()
    }

    /// Text in the input grammar with outermost upper bound `upper`.
    pub fn to_text(&self, upper: &str) -> String {
        self.level_text(0, upper)
    }

    fn level_text(&self, lvl: usize, upper: &str) -> String {
        let v = var_name(lvl);
        let f = &self.mults[lvl];
        let body = if lvl + 1 == self.depth() {
            f.to_text(&v, false)
        } else if f.is_one() {
            self.level_text(lvl + 1, &v)
        } else {
            format!("{}*{}", f.to_text(&v, true), self.level_text(lvl + 1, &v))
        };
        format!("Prod({v}, {}, {upper}, {body})", self.lowers[lvl])
    }
}

/// `coeff * prod P_i^{e_i}`, products distinct and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: RatFun,
    pub mono: Vec<(NestedProd, i64)>,
}

/// Sum of terms in normal form.  The rewrite from the written input is an
/// identity for `n >= floor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProdExprAst {
    pub terms: Vec<Term>,
    pub floor: i64,
}

impl ProdExprAst {
    pub fn zero() -> ProdExprAst {
        ProdExprAst { terms: Vec::new(), floor: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Distinct products in order of first appearance.
    pub fn products(&self) -> Vec<NestedProd> {
        let mut out: Vec<NestedProd> = Vec::new();
        for t in &self.terms {
            for (p, _) in &t.mono {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
        }
        out
    }

    pub fn conductor(&self) -> u64 {
        let mut c = 1;
        for t in &self.terms {
            c = lcm_u64(c, t.coeff.conductor());
            for (p, _) in &t.mono {
                c = lcm_u64(c, p.conductor());
            }
        }
        c
    }

    pub fn max_lower(&self) -> i64 {
        self.products().iter().map(|p| p.max_lower()).max().unwrap_or(0)
    }

    /// Values at `from..=to` by literal evaluation of the normal form.
    pub fn eval_range(&self, from: i64, to: i64) -> Vec<CycNum> {
        let prods = self.products();
        let vals: Vec<Vec<CycNum>> = prods.iter().map(|p| p.values(to)).collect();
        (from..=to)
            .map(|n| {
                let mut acc = CycNum::zero();
                for t in &self.terms {
                    let mut v = t.coeff.eval_at(n);
                    for (p, e) in &t.mono {
                        let i = prods.iter().position(|q| q == p).unwrap();
                        let pv = if n < 0 { CycNum::one() } else { vals[i][n as usize].clone() };
                        v = &v * &pv.try_pow(*e).unwrap_or_else(|_| CycNum::zero());
                    }
                    acc = &acc + &v;
                }
                acc
            })
            .collect()
    }

    pub fn oracle_eval(&self, n: i64) -> CycNum {
        self.eval_range(n, n).pop().unwrap()
    }

    /// Text in the input grammar; re-parses to an equal normal form.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let ts = term_text(t);
            if i == 0 {
                s.push_str(&ts);
            } else if let Some(rest) = ts.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(&ts);
            }
        }
        s
    }
}

pub(crate) fn power_text(base: &str, e: i64) -> String {
    match e {
        1 => base.to_string(),
        e if e < 0 => format!("{base}^({e})"),
        e => format!("{base}^{e}"),
    }
}

fn term_text(t: &Term) -> String {
    let factors: Vec<String> = t.mono.iter().map(|(p, e)| power_text(&p.to_text("n"), *e)).collect();
    let body = factors.join("*");
    if t.mono.is_empty() {
        return t.coeff.to_text("n", false);
    }
    if t.coeff.is_one() {
        return body;
    }
    if t.coeff == RatFun::from_int(-1) {
        return format!("-{body}");
    }
    format!("{}*{}", t.coeff.to_text("n", true), body)
}
