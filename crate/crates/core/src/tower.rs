//! Towers of algebraic (`t^lambda = 1`) and product (Laurent) generators over
//! `(K(x), sigma)` with `sigma(x) = x + 1`, their elements, the shift and the
//! evaluation into sequences.

use crate::arith::{lcm_u64, CycField, CycNum};
use crate::error::{Error, Result};
use crate::upoly::RatFun;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// `t^order = 1`.
    A(u64),
    /// Laurent generator.
    P,
}

/// `coeff * prod t_j^{exps[j]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitMono {
    pub coeff: RatFun,
    pub exps: Vec<i64>,
}

impl UnitMono {
    pub fn constant(c: RatFun) -> UnitMono {
        UnitMono { coeff: c, exps: Vec::new() }
    }

    fn exp(&self, j: usize) -> i64 {
        self.exps.get(j).copied().unwrap_or(0)
    }
}

/// `sigma(t) = quotient * t`; evaluated as `u` up to `lower - 1`, then by
/// `val(t, n) = val(t, n-1) * ev(quotient, n-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub kind: GenKind,
    pub quotient: UnitMono,
    pub depth: usize,
    pub lower: i64,
    pub init: CycNum,
}

impl Generator {
    pub fn new(name: &str, kind: GenKind, quotient: UnitMono, lower: i64) -> Generator {
        Generator { name: name.into(), kind, quotient, depth: 0, lower, init: CycNum::one() }
    }
}

#[derive(Clone, Debug)]
pub struct Tower {
    field: CycField,
    gens: Vec<Generator>,
    mods: Arc<Vec<u64>>,
    fwd: Vec<UnitMono>,
    bwd: Vec<UnitMono>,
}

/// Laurent polynomial in the generators with coefficients in `K(x)`;
/// exponents of algebraic generators live in `[0, order)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerElem {
    mods: Arc<Vec<u64>>,
    terms: BTreeMap<Vec<i64>, RatFun>,
}

impl Tower {
    pub fn new(field: CycField) -> Tower {
        Tower { field, gens: Vec::new(), mods: Arc::new(Vec::new()), fwd: Vec::new(), bwd: Vec::new() }
    }

    pub fn field(&self) -> &CycField {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    /// Appends a generator.  Its depth is recomputed from the quotient; the
    /// quotient may only mention earlier generators, algebraic quotients only
    /// algebraic generators and a root of unity, product quotients only
    /// product generators.
    pub fn push(&mut self, mut g: Generator) -> Result<usize> {
        let i = self.gens.len();
        if g.lower < 0 {
            return Err(Error::InvalidLowerBound { product: g.name.clone(), at: g.lower });
        }
        if g.quotient.exps.len() > i {
            return Err(Error::syntax(0, format!("quotient of {} refers to later generators", g.name)));
        }
        g.quotient.exps.resize(i, 0);
        let mut depth = 1;
        for (j, &a) in g.quotient.exps.iter().enumerate() {
            if a == 0 {
                continue;
            }
            depth = depth.max(self.gens[j].depth + 1);
            let same = matches!(
                (g.kind, self.gens[j].kind),
                (GenKind::A(_), GenKind::A(_)) | (GenKind::P, GenKind::P)
            );
            if !same {
                return Err(Error::syntax(0, format!("quotient of {} mixes generator kinds", g.name)));
            }
        }
        if let GenKind::A(l) = g.kind {
            let c = g.quotient.coeff.as_constant().ok_or_else(|| Error::syntax(0, "algebraic quotient must be constant"))?;
            let ord = c.order_of()?;
            if ord == 0 || l % ord != 0 {
                return Err(Error::syntax(0, format!("quotient of {} is not a root of unity of order dividing {l}", g.name)));
            }
        }
        if let Some(last) = self.gens.last() {
            if depth < last.depth {
                return Err(Error::syntax(0, "generators must be ordered by depth"));
            }
        }
        g.depth = depth;
        self.field = CycField::new(lcm_u64(self.field.conductor(), g.quotient.coeff.conductor()));
        let mut mods = (*self.mods).clone();
        mods.push(match g.kind {
            GenKind::A(l) => l,
            GenKind::P => 0,
        });
        self.mods = Arc::new(mods);
        // sigma(t) = q t ; sigma^{-1}(t) = sigma^{-1}(q)^{-1} t
        let mut f = g.quotient.clone();
        f.exps.push(1);
        let q_back = self.mono_step(&g.quotient, -1);
        let mut b = UnitMono { coeff: q_back.coeff.inv()?, exps: q_back.exps.iter().map(|a| -a).collect() };
        b.exps.resize(i, 0);
        b.exps.push(1);
        let f = self.reduce_mono(f);
        let b = self.reduce_mono(b);
        self.fwd.push(f);
        self.bwd.push(b);
        self.gens.push(g);
        Ok(i)
    }

    fn reduce_mono(&self, mut m: UnitMono) -> UnitMono {
        for (j, a) in m.exps.iter_mut().enumerate() {
            if let Some(&l) = self.mods.get(j) {
                if l > 0 {
                    *a = a.rem_euclid(l as i64);
                }
            }
        }
        m
    }

    /// `sigma^{dir}` of a unit monomial over the current generators.
    fn mono_step(&self, m: &UnitMono, dir: i64) -> UnitMono {
        let imgs = if dir > 0 { &self.fwd } else { &self.bwd };
        let n = self.gens.len();
        let mut coeff = m.coeff.shift(dir);
        let mut exps = vec![0i64; n];
        for j in 0..n {
            let a = m.exp(j);
            if a == 0 {
                continue;
            }
            let img = &imgs[j];
            coeff = coeff.mul(&img.coeff.pow(a).expect("unit coefficient"));
            for (t, b) in img.exps.iter().enumerate() {
                exps[t] += a * b;
            }
        }
        self.reduce_mono(UnitMono { coeff, exps })
    }

    pub fn zero(&self) -> TowerElem {
        TowerElem { mods: self.mods.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> TowerElem {
        self.constant(RatFun::one())
    }

    pub fn constant(&self, c: RatFun) -> TowerElem {
        self.monomial(c, &[])
    }

    /// The generator `t_i`.
    pub fn var(&self, i: usize) -> TowerElem {
        let mut e = vec![0; self.len()];
        e[i] = 1;
        self.monomial(RatFun::one(), &e)
    }

    pub fn monomial(&self, c: RatFun, exps: &[i64]) -> TowerElem {
        let mut z = self.zero();
        if !c.is_zero() {
            let mut e = exps.to_vec();
            e.resize(self.len(), 0);
            let m = self.reduce_mono(UnitMono { coeff: c, exps: e });
            z.terms.insert(m.exps, m.coeff);
        }
        z
    }

    /// The quotient `sigma(t_i) / t_i` as an element.
    pub fn quotient(&self, i: usize) -> TowerElem {
        let q = &self.gens[i].quotient;
        self.monomial(q.coeff.clone(), &q.exps)
    }

    /// `sigma^power(e)`.
    pub fn apply_sigma(&self, e: &TowerElem, power: i64) -> TowerElem {
        let dir = power.signum();
        let mut cur = e.clone();
        for _ in 0..power.unsigned_abs() {
            let mut next = self.zero();
            for (exps, c) in &cur.terms {
                let m = self.mono_step(&UnitMono { coeff: c.clone(), exps: exps.clone() }, dir);
                next.add_term(m.exps, m.coeff);
            }
            cur = next;
        }
        cur
    }

    /// Least `p > 0` with `sigma^p(t_i) = t_i`, searched up to `order^(depth+1)`.
    pub fn period(&self, i: usize) -> Result<u64> {
        let g = &self.gens[i];
        let order = match g.kind {
            GenKind::A(l) => l,
            GenKind::P => return Err(Error::PeriodCapExceeded),
        };
        let cap = order.saturating_pow(g.depth as u32 + 1);
        let t = self.var(i);
        let mut cur = t.clone();
        for p in 1..=cap {
            cur = self.apply_sigma(&cur, 1);
            if cur == t {
                return Ok(p);
            }
        }
        Err(Error::PeriodCapExceeded)
    }

    pub fn evaluator(&self) -> Evaluator<'_> {
        Evaluator { tower: self, cache: vec![Vec::new(); self.len()] }
    }
}

impl TowerElem {
    fn add_term(&mut self, exps: Vec<i64>, c: RatFun) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&exps) {
            Some(a) => a.add(&c),
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(exps, v);
        }
    }

    fn reduce(&self, mut e: Vec<i64>) -> Vec<i64> {
        for (j, a) in e.iter_mut().enumerate() {
            let l = self.mods[j];
            if l > 0 {
                *a = a.rem_euclid(l as i64);
            }
        }
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &RatFun)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(e, c)| e.iter().all(|&a| a == 0) && c.is_one())
    }

    pub fn add(&self, o: &TowerElem) -> TowerElem {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> TowerElem {
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = c.neg();
        }
        r
    }

    pub fn sub(&self, o: &TowerElem) -> TowerElem {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &RatFun) -> TowerElem {
        let mut r = TowerElem { mods: self.mods.clone(), terms: BTreeMap::new() };
        for (e, a) in &self.terms {
            r.add_term(e.clone(), a.mul(c));
        }
        r
    }

    pub fn mul(&self, o: &TowerElem) -> TowerElem {
        let mut r = TowerElem { mods: self.mods.clone(), terms: BTreeMap::new() };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                r.add_term(self.reduce(e), ca.mul(cb));
            }
        }
        r
    }

    /// Unit monomial `(coeff, exps)` if the element is one.
    pub fn as_unit_mono(&self) -> Option<(RatFun, Vec<i64>)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        Some((c.clone(), e.clone()))
    }

    /// Integer power; negative powers only of unit monomials.
    pub fn pow(&self, k: i64) -> Result<TowerElem> {
        if k < 0 {
            let (c, e) = self.as_unit_mono().ok_or(Error::NonUnitDivisor)?;
            let inv = TowerElem { mods: self.mods.clone(), terms: BTreeMap::new() };
            let mut inv = inv;
            inv.add_term(self.reduce(e.iter().map(|a| -a).collect()), c.inv()?);
            return inv.pow(-k);
        }
        let mut acc = TowerElem { mods: self.mods.clone(), terms: BTreeMap::new() };
        acc.add_term(vec![0; self.mods.len()], RatFun::one());
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Division by a unit monomial.
    pub fn div(&self, d: &TowerElem) -> Result<TowerElem> {
        Ok(self.mul(&d.pow(-1)?))
    }

    pub fn conductor(&self) -> u64 {
        self.terms.values().fold(1, |a, c| lcm_u64(a, c.conductor()))
    }

    /// Text with generator names; for diagnostics.
    pub fn to_text(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mut s = format!("({})", c.to_text("x", false));
            for (j, &a) in e.iter().enumerate() {
                if a != 0 {
                    s.push_str(&format!("*{}^{}", names[j], a));
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

/// Evaluation of tower elements at integers, memoizing generator values.
pub struct Evaluator<'a> {
    tower: &'a Tower,
    cache: Vec<Vec<CycNum>>,
}

impl<'a> Evaluator<'a> {
    /// Value of the generator `t_i` at `n`; negative `n` lies below every
    /// lower bound and gives the initial value.
    pub fn gen_value(&mut self, i: usize, n: i64) -> CycNum {
        if n < 0 {
            return self.tower.gens[i].init.clone();
        }
        let n = n as usize;
        while self.cache[i].len() <= n {
            let m = self.cache[i].len() as i64;
            let g = &self.tower.gens[i];
            let v = if m <= g.lower - 1 {
                g.init.clone()
            } else {
                let prev = if m == 0 { g.init.clone() } else { self.cache[i][m as usize - 1].clone() };
                let q = g.quotient.clone();
                &prev * &self.mono_value(&q, m - 1)
            };
            self.cache[i].push(v);
        }
        self.cache[i][n].clone()
    }

    fn mono_value(&mut self, m: &UnitMono, n: i64) -> CycNum {
        let mut v = m.coeff.eval_at(n);
        for (j, &a) in m.exps.iter().enumerate() {
            if a != 0 && !v.is_zero() {
                let g = self.gen_value(j, n);
                v = &v * &g.try_pow(a).unwrap_or_else(|_| CycNum::zero());
            }
        }
        v
    }

    /// `ev(e, n)`; coefficients contribute 0 at their poles.
    pub fn ev(&mut self, e: &TowerElem, n: i64) -> CycNum {
        let mut acc = CycNum::zero();
        for (exps, c) in &e.terms {
            let m = UnitMono { coeff: c.clone(), exps: exps.clone() };
            acc = &acc + &self.mono_value(&m, n);
        }
        acc
    }
}

/// Checks the evaluation laws for `e`, `f` on `ns`: multiplicativity,
/// additivity and `ev(sigma(e), n) = ev(e, n + 1)`.  Reports the first failure.
pub fn ev_hom_check(tower: &Tower, e: &TowerElem, f: &TowerElem, ns: core::ops::RangeInclusive<i64>) -> core::result::Result<(), String> {
    let mut ev = tower.evaluator();
    let prod = e.mul(f);
    let sum = e.add(f);
    let se = tower.apply_sigma(e, 1);
    for n in ns {
        let (a, b) = (ev.ev(e, n), ev.ev(f, n));
        if ev.ev(&prod, n) != &a * &b {
            return Err(format!("product law fails at n={n}"));
        }
        if ev.ev(&sum, n) != &a + &b {
            return Err(format!("sum law fails at n={n}"));
        }
        if ev.ev(&se, n) != ev.ev(e, n + 1) {
            return Err(format!("shift law fails at n={n}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::upoly::Poly;

    fn c(v: i64) -> RatFun {
        RatFun::from_int(v)
    }

    /// theta1 over -1 (order 2), z over (x - 2) with lower 3, then theta2.
    fn sample() -> Tower {
        let mut t = Tower::new(CycField::rationals());
        t.push(Generator::new("th1", GenKind::A(2), UnitMono::constant(c(-1)), 1)).unwrap();
        let q = RatFun::from_poly(Poly::from_ints(&[-2, 1])).shift(1);
        t.push(Generator::new("z", GenKind::P, UnitMono::constant(q), 3)).unwrap();
        t.push(Generator::new("th2", GenKind::A(2), UnitMono { coeff: c(-1), exps: vec![1] }, 1)).unwrap();
        t
    }

    #[test]
    fn sigma_examples() {
        let mut t = Tower::new(CycField::rationals());
        t.push(Generator::new("t", GenKind::P, UnitMono::constant(c(2)), 1)).unwrap();
        let e = t.var(0).scale(&RatFun::x());
        let want = t.var(0).scale(&RatFun::from_poly(Poly::from_ints(&[2, 2])));
        assert_eq!(t.apply_sigma(&e, 1), want);
        assert_eq!(t.apply_sigma(&t.apply_sigma(&e, 1), -1), e);

        let s = sample();
        let th2 = s.var(2);
        let q = s.apply_sigma(&th2, 1).div(&th2).unwrap();
        assert_eq!(q, s.var(0).scale(&c(-1)));
        let back = th2.div(&s.apply_sigma(&th2, -1)).unwrap();
        assert_eq!(back, s.var(0));
    }

    #[test]
    fn evaluations() {
        let s = sample();
        let mut ev = s.evaluator();
        for n in 0..50i64 {
            let sign = |k: i64| if k % 2 == 0 { CycNum::one() } else { CycNum::from_int(-1) };
            assert_eq!(ev.ev(&s.var(0), n), sign(n));
            assert_eq!(ev.ev(&s.var(2), n), sign(n * (n + 1) / 2));
        }
        let mut fact = CycNum::one();
        for n in 3..15 {
            fact = &fact * &CycNum::from_int(n - 2);
            assert_eq!(ev.ev(&s.var(1), n), fact);
        }
        assert_eq!(s.generator(2).depth, 2);
    }

    #[test]
    fn arithmetic() {
        let s = sample();
        let th = s.var(0);
        assert!(th.mul(&th).is_one());
        let a = th.sub(&s.one());
        let b = th.add(&s.one());
        assert!(a.mul(&b).is_zero());
        let z = s.var(1);
        assert!(z.pow(3).unwrap().mul(&z.pow(-3).unwrap()).is_one());
        assert!(matches!(a.pow(-1), Err(Error::NonUnitDivisor)));
    }

    #[test]
    fn periods() {
        let s = sample();
        assert_eq!(s.period(0).unwrap(), 2);
        assert_eq!(s.period(2).unwrap(), 4);
    }

    #[test]
    fn laws_and_negative_control() {
        let s = sample();
        let e = s.var(0).add(&s.var(1).scale(&RatFun::x()));
        let f = s.var(2).mul(&s.var(1).pow(-1).unwrap()).add(&s.constant(c(3)));
        assert!(ev_hom_check(&s, &e, &f, 3..=30).is_ok());
        assert!(ev_hom_check(&s, &s.one(), &s.one(), 0..=5).is_ok());
        let mut bad = s.clone();
        bad.gens[1].quotient.coeff = RatFun::x();
        assert!(ev_hom_check(&bad, &bad.var(1), &bad.one(), 3..=10).is_err());
    }
}
