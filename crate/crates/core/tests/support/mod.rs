//! Inputs and property suites shared by the integration tests and the
//! acceptance report.
#![allow(dead_code)]

use prodring_core::arith::{rat, BigRat};
use prodring_core::expr::NestedProd;
use prodring_core::pipeline::zero_test;
use prodring_core::preprocess::{check_shift_coprime, split, split_all};
use prodring_core::tower::{ev_hom_check, GenKind, Generator, Tower, TowerElem, UnitMono};
use prodring_core::{parse, CycField, CycNum, GoOptions, Poly, RatFun};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const RUNNING: &str =
    "Prod(k,1,n, (24*k+1)/(-sqrt(3)) * Prod(j,3,k, (-2*(j^3-3*j+2))/(5*(j^2-j-2))))";
pub const RATE: &str = "Prod(k,1,n-1, 1/36 * Prod(i,1,k-1,(i+1)*(i+2)/(4*(2*i+3)^2))) * 1/2";
pub const A2_EXTRA: &str =
    "Prod(k,1,n, 4*(3+2*k)^4/((k+1)^2*(2*k+1)^4*(k+2)^2) * Prod(i,1,k, -(i+1)*(i+2)/(4*(2*i-1)^2)))";
pub const ROOTS: &str =
    "sqrt(3)*Prod(k,1,n,-1) + 2*Prod(k,1,n,Prod(j,1,k,-1)) + 3*Prod(k,1,n,-1)*Prod(k,1,n,Prod(j,1,k,-1))";

pub fn a2() -> String {
    format!("{RATE} + {A2_EXTRA}")
}

/// Inputs with known reductions.
pub fn golden() -> Vec<String> {
    vec![
        RUNNING.to_string(),
        RATE.to_string(),
        a2(),
        ROOTS.to_string(),
        "Prod(k,1,n,-1)".to_string(),
        "Prod(k,1,n,2) - Prod(k,1,n,3)".to_string(),
        "Prod(k,2,n+1,k^2-1)/Prod(k,1,n,k)^2".to_string(),
        "n*Prod(k,1,n,zeta(6)*k) + Prod(k,1,n,Prod(j,2,k,j/(j-1)))^(-1)".to_string(),
    ]
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

fn outcome<T: core::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn lin(a: i64) -> RatFun {
    RatFun::from_poly(Poly::from_ints(&[a, 1]))
}

/// Small nonzero rational.
fn small_rat() -> impl Strategy<Value = BigRat> {
    (-4i64..=4, 1i64..=3).prop_filter("nonzero", |(p, _)| *p != 0).prop_map(|(p, q)| rat(p, q))
}

/// Sample tower: theta (order 4), geometric chain over 2 (depths 1, 2),
/// hypergeometric chain over x + 1 (depths 1, 2).
pub fn sample_tower() -> Tower {
    let mut t = Tower::new(CycField::new(4));
    let q = |c: RatFun, exps: Vec<i64>| UnitMono { coeff: c, exps };
    t.push(Generator::new("theta", GenKind::A(4), q(RatFun::constant(CycNum::zeta(4)), vec![]), 1)).unwrap();
    t.push(Generator::new("y1", GenKind::P, q(RatFun::from_int(2), vec![]), 1)).unwrap();
    t.push(Generator::new("z1", GenKind::P, q(lin(2), vec![]), 1)).unwrap();
    t.push(Generator::new("y2", GenKind::P, q(RatFun::from_int(2), vec![0, 1]), 1)).unwrap();
    t.push(Generator::new("z2", GenKind::P, q(lin(2), vec![0, 0, 1]), 1)).unwrap();
    t
}

/// Up to three terms with pole-free coefficients `(a + b x)/(x + c)`, `c >= 1`.
fn elem_parts() -> impl Strategy<Value = Vec<((i64, i64, i64, bool), Vec<i64>)>> {
    let coeff = (-3i64..=3, -2i64..=2, 1i64..=4, any::<bool>());
    let exps = (0i64..4, -2i64..=2, -2i64..=2, -1i64..=1, -1i64..=1).prop_map(|(a, b, c, d, e)| vec![a, b, c, d, e]);
    proptest::collection::vec((coeff, exps), 1..=3)
}

fn build_elem(t: &Tower, parts: &[((i64, i64, i64, bool), Vec<i64>)]) -> TowerElem {
    let mut e = t.zero();
    for ((a, b, c, zeta), exps) in parts {
        let num = RatFun::from_poly(Poly::from_ints(&[*a, *b]));
        let mut coeff = num.div(&lin(*c)).unwrap();
        if *zeta {
            coeff = coeff.scale(&CycNum::zeta(4));
        }
        e = e.add(&t.monomial(coeff, exps));
    }
    e
}

/// Multiplicativity, additivity and shift compatibility of evaluation.
pub fn ev_laws(cases: u32) -> Result<(), String> {
    let t = sample_tower();
    outcome(runner(cases).run(&(elem_parts(), elem_parts()), |(a, b)| {
        let (e, f) = (build_elem(&t, &a), build_elem(&t, &b));
        ev_hom_check(&t, &e, &f, 0..=6).map_err(TestCaseError::fail)
    }))
}

/// One level of a random product: lower bound, constant, shifted linear
/// factors `(x + a)^(+-1)` with `a > -lower`.
#[derive(Clone, Debug)]
pub struct Level {
    pub lower: i64,
    pub c: BigRat,
    pub factors: Vec<(i64, i64)>,
}

fn level() -> impl Strategy<Value = Level> {
    (1i64..=3, small_rat(), proptest::collection::vec((0i64..=5, prop_oneof![Just(1i64), Just(-1i64)]), 0..=3))
        .prop_map(|(lower, c, fs)| Level { lower, c, factors: fs.into_iter().map(|(a, e)| (a - lower + 1, e)).collect() })
}

impl Level {
    pub fn ratfun(&self) -> RatFun {
        let mut f = RatFun::constant(CycNum::from_rat(self.c.clone()));
        for &(a, e) in &self.factors {
            f = f.mul(&lin(a).pow(e).unwrap());
        }
        f
    }

    /// Multiplicand text in the variable `v`.
    pub fn text(&self, v: &str) -> String {
        let mut s = format!("({})", self.c);
        for &(a, e) in &self.factors {
            let base = format!("({v} + ({a}))");
            s.push_str(&if e == 1 { format!("*{base}") } else { format!("/{base}") });
        }
        s
    }
}

pub fn random_product() -> impl Strategy<Value = Vec<Level>> {
    proptest::collection::vec(level(), 1..=3)
}

pub fn nested(levels: &[Level]) -> NestedProd {
    NestedProd::new(levels.iter().map(|l| l.lower).collect(), levels.iter().map(|l| l.ratfun()).collect()).unwrap()
}

/// The split `c * r * G * H` agrees with the product from `max(0, delta - 1)` on.
pub fn preprocess_splits(cases: u32) -> Result<(), String> {
    outcome(runner(cases).run(&random_product(), |levels| {
        let p = nested(&levels);
        let s = split(&p).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let vals = p.values(s.delta + 5);
        for n in (s.delta - 1).max(0)..=s.delta + 5 {
            prop_assert_eq!(s.eval(n), vals[n as usize].clone(), "{} at n={}", p.to_text("n"), n);
        }
        Ok(())
    }))
}

/// Bases produced for several products at once are pairwise shift-coprime
/// and every split still agrees with its product.
pub fn shift_coprimality(cases: u32) -> Result<(), String> {
    outcome(runner(cases).run(&proptest::collection::vec(random_product(), 2..=3), |ps| {
        let prods: Vec<NestedProd> = ps.iter().map(|l| nested(l)).collect();
        let pre = split_all(&prods, &CycField::rationals()).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let mut bases: Vec<Poly> = Vec::new();
        for s in &pre.splits {
            for h in &s.hyp {
                prop_assert!(h.base.is_monic());
                if !bases.contains(&h.base) {
                    bases.push(h.base.clone());
                }
            }
        }
        prop_assert!(check_shift_coprime(&bases).is_ok(), "bases {:?}", bases);
        for (p, s) in prods.iter().zip(&pre.splits) {
            let vals = p.values(pre.delta + 3);
            for n in (pre.delta - 1).max(0)..=pre.delta + 3 {
                prop_assert_eq!(s.eval(n), vals[n as usize].clone());
            }
        }
        Ok(())
    }))
}

/// A depth-1 or depth-2 product written in several equivalent ways.
#[derive(Clone, Debug)]
pub struct Rewritable {
    pub outer: Level,
    pub inner: Option<Level>,
}

fn rewritable() -> impl Strategy<Value = Rewritable> {
    (level(), proptest::option::of(level())).prop_map(|(outer, inner)| Rewritable { outer, inner })
}

impl Rewritable {
    fn body(&self, v: &str, outer: &Level) -> String {
        match &self.inner {
            None => outer.text(v),
            Some(i) => format!("{}*Prod(j, {}, {v}, {})", outer.text(v), i.lower, i.text("j")),
        }
    }

    pub fn text(&self) -> String {
        format!("Prod(k, {}, n, {})", self.outer.lower, self.body("k", &self.outer))
    }

    /// Equivalent forms: lower bound raised by one with the first factor
    /// pulled out, the index shifted, or the multiplicand split in two.
    pub fn rewrite(&self, how: u8) -> String {
        let l = self.outer.lower;
        match how % 3 {
            0 => match &self.inner {
                None => format!("({})*Prod(k, {}, n, {})", self.outer.text(&format!("({l})")), l + 1, self.outer.text("k")),
                Some(_) => {
                    let rest = Level { c: rat(1, 1), ..self.outer.clone() };
                    format!("Prod(k, {l}, n, {})*Prod(k, {l}, n, {})", self.outer.c, self.body("k", &rest))
                }
            },
            1 => format!("Prod(k, {}, n + 1, {})", l + 1, self.body("k - 1", &self.outer)),
            _ => {
                let a = Level { factors: self.outer.factors.iter().take(1).cloned().collect(), ..self.outer.clone() };
                let b = Level { c: rat(1, 1), factors: self.outer.factors.iter().skip(1).cloned().collect(), ..self.outer.clone() };
                let second = match &self.inner {
                    None => b.text("k"),
                    Some(i) => format!("{}*Prod(j, {}, k, {})", b.text("k"), i.lower, i.text("j")),
                };
                format!("Prod(k, {l}, n, {})*Prod(k, {l}, n, {second})", a.text("k"))
            }
        }
    }
}

/// `A - A'` is recognized as zero for rearrangements `A'` of a monomial `A`.
pub fn zero_pairs(cases: u32) -> Result<(), String> {
    let strat = (rewritable(), rewritable(), -2i64..=2, 1i64..=2, 0u8..3, 0u8..3, small_rat());
    outcome(runner(cases).run(&strat, |(p, q, e, f, hp, hq, c)| {
        let a = format!("({c})*({})^({e})*({})^({f})", p.text(), q.text());
        let b = format!("({})^({f})*({})^({e})*({c})", q.rewrite(hq), p.rewrite(hp));
        let text = format!("{a} - ({b})");
        let parsed = parse(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        let z = zero_test(&parsed.ast, &GoOptions::default()).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert!(z.is_some(), "not recognized as zero: {}", text);
        Ok(())
    }))
}

/// Printing a normal form and parsing it back gives the same normal form.
pub fn round_trip(inputs: &[String]) -> Result<(), String> {
    for s in inputs {
        let a = parse(s).map_err(|e| format!("{s}: {e}"))?.ast;
        let t = a.to_text();
        let b = parse(&t).map_err(|e| format!("{t}: {e}"))?.ast;
        if a.terms != b.terms {
            return Err(format!("round trip changed {s} into {t}"));
        }
    }
    Ok(())
}
