//! End-to-end reduction: split every product, build one tower holding
//! `zeta^n`, the geometric chains and the hypergeometric chains, map the
//! expression into it and print the result back as an expression.

use crate::arith::embed::log_abs_conj;
use crate::arith::{lcm_u64, CycField, CycNum};
use crate::error::{Error, Result};
use crate::expr::{is_pole, parse, NestedProd, Oracle, ProdExprAst, Raw, Term};
use crate::georing::{push_geo_chains, reduce_geometric, solve_go, GeoImage, GoOptions};
use crate::hyperring::HyperTowerPlan;
use crate::preprocess::{split_all, GeoFactor, HypFactor, ProductSplit};
use crate::tower::{GenKind, Generator, Tower, TowerElem, UnitMono};
use crate::upoly::RatFun;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// What a tower generator stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenRole {
    /// `zeta_lambda^n`.
    Zeta,
    /// Chain `d` over the constant `h`, lower bounds 1.
    Geometric { h: CycNum, depth: usize },
    /// Chain `d` over the polynomial `f`, lower bounds `delta`.
    Hypergeometric { f: crate::upoly::Poly, depth: usize },
}

/// A product of the output, `Q1, Q2, ...` in tower order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutProduct {
    pub id: String,
    pub depth: usize,
    pub lower: i64,
    pub base: RatFun,
    pub prod: NestedProd,
    /// Position of the generator in the tower.
    pub gen: usize,
}

/// `coeff(n) * zeta^(n*zeta) * prod Q_i^e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutTerm {
    pub coeff: RatFun,
    pub zeta: i64,
    /// `(index into products, exponent)`, nonzero exponents only.
    pub exps: Vec<(usize, i64)>,
}

#[derive(Clone, Debug)]
pub struct RpeResult {
    /// The output equals the input for `n >= delta`.
    pub delta: i64,
    pub field: CycField,
    /// Order of `zeta`, 0 when no root of unity is needed.
    pub zeta_order: u64,
    pub products: Vec<OutProduct>,
    pub terms: Vec<OutTerm>,
    pub tower: Tower,
    pub roles: Vec<GenRole>,
    pub element: TowerElem,
    pub output_expr: ProdExprAst,
    /// Geometric chain bases, for the structural check.
    pub geo_bases: Vec<CycNum>,
    pub hyper_bases: Vec<crate::upoly::Poly>,
}

impl RpeResult {
    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }

    /// The output in the input grammar.
    pub fn to_text(&self) -> String {
        self.output_expr.to_text()
    }

    /// `Prod(k,1,n,zeta(lambda))`, if present.
    pub fn zeta_product(&self) -> Option<NestedProd> {
        (self.zeta_order > 0).then(|| zeta_prod(self.zeta_order))
    }

    pub fn generator_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.tower.generators().iter().map(|g| g.name.clone()).collect();
        for p in &self.products {
            names[p.gen] = p.id.clone();
        }
        names
    }
}

fn zeta_prod(lambda: u64) -> NestedProd {
    NestedProd::factored(vec![1], RatFun::constant(CycNum::zeta(lambda))).expect("root of unity")
}

/// Everything needed to map products into the tower.
struct Assembly {
    tower: Tower,
    roles: Vec<GenRole>,
    theta: Option<usize>,
    geo: GeoImage,
    geo_idx: BTreeMap<(usize, usize), usize>,
    plan: HyperTowerPlan,
    hyp_idx: BTreeMap<(usize, usize), usize>,
}

/// Interleaves `theta`, the geometric chains and the hypergeometric chains by
/// depth, `theta` first and geometric before hypergeometric at each depth.
fn merge_towers(field: u64, geo: GeoImage, plan: HyperTowerPlan) -> Result<Assembly> {
    let mut field = geo.hs.iter().fold(field, |a, h| lcm_u64(a, h.conductor()));
    if let Some(c) = &geo.collapse {
        field = lcm_u64(field, c.lambda);
    }
    let mut t = Tower::new(CycField::new(field));
    let mut roles = Vec::new();
    let theta = match &geo.collapse {
        Some(c) => {
            let q = UnitMono::constant(RatFun::constant(c.zeta.clone()));
            roles.push(GenRole::Zeta);
            Some(t.push(Generator::new("theta", GenKind::A(c.lambda), q, 1))?)
        }
        None => None,
    };
    let maxd = geo.chain_len.iter().copied().max().unwrap_or(0).max(plan.max_depth());
    let mut geo_idx = BTreeMap::new();
    let mut hyp_idx = BTreeMap::new();
    for d in 1..=maxd {
        let before = t.len();
        push_geo_chains(&mut t, &geo, d, d, &mut geo_idx)?;
        for (&(j, dd), &i) in &geo_idx {
            if i >= before {
                debug_assert_eq!(dd, d);
                roles.resize(i + 1, GenRole::Zeta);
                roles[i] = GenRole::Geometric { h: geo.hs[j].clone(), depth: d };
            }
        }
        let before = t.len();
        plan.push_depth(&mut t, d, &mut hyp_idx)?;
        for (&(j, dd), &i) in &hyp_idx {
            if i >= before {
                debug_assert_eq!(dd, d);
                roles.resize(i + 1, GenRole::Zeta);
                roles[i] = GenRole::Hypergeometric { f: plan.bases[j].clone(), depth: d };
            }
        }
    }
    Ok(Assembly { tower: t, roles, theta, geo, geo_idx, plan, hyp_idx })
}

impl Assembly {
    /// Image of `P^e` for a product with split `s`.
    fn image_pow(&self, s: &ProductSplit, e: i64) -> Result<TowerElem> {
        let t = &self.tower;
        let coeff = s.r.pow(e)?.scale(&s.c.try_pow(e)?);
        let mut out = t.constant(coeff);
        let y = |j: usize, d: usize| self.geo_idx[&(j, d)];
        for g in &s.geo {
            let f = GeoFactor { depth: g.depth, base: g.base.clone(), exp: g.exp * e };
            out = out.mul(&self.geo.image_of(t, self.theta, &y, &f));
        }
        for h in &s.hyp {
            let f = HypFactor { depth: h.depth, base: h.base.clone(), exp: h.exp * e };
            out = out.mul(&self.plan.image_of(t, &self.hyp_idx, &f));
        }
        Ok(out)
    }

    fn role_product(&self, i: usize, delta: i64) -> Result<(usize, i64, RatFun, NestedProd)> {
        Ok(match &self.roles[i] {
            GenRole::Zeta => unreachable!("zeta is not an output product"),
            GenRole::Geometric { h, depth } => {
                let b = RatFun::constant(h.clone());
                (*depth, 1, b.clone(), NestedProd::factored(vec![1; *depth], b)?)
            }
            GenRole::Hypergeometric { f, depth } => {
                let b = RatFun::from_poly(f.clone());
                (*depth, delta, b.clone(), NestedProd::factored(vec![delta; *depth], b)?)
            }
        })
    }
}

/// Reduces `a` to an expression in `zeta^n` and algebraically independent
/// products.
pub fn reduce(a: &ProdExprAst, opts: &GoOptions) -> Result<RpeResult> {
    let prods = a.products();
    let pre = split_all(&prods, &CycField::new(a.conductor()))?;
    let geo_factors: Vec<GeoFactor> = pre.splits.iter().flat_map(|s| s.geo.iter().cloned()).collect();
    let geo = reduce_geometric(&geo_factors, opts)?;
    let plan = HyperTowerPlan::new(&pre.splits, pre.delta)?;
    let asm = merge_towers(pre.field.conductor(), geo, plan)?;
    let t = &asm.tower;

    let mut element = t.zero();
    for term in &a.terms {
        let mut m = t.constant(term.coeff.clone());
        for (p, e) in &term.mono {
            let i = prods.iter().position(|q| q == p).expect("listed product");
            m = m.mul(&asm.image_pow(&pre.splits[i], *e)?);
        }
        element = element.add(&m);
    }

    let delta = (pre.delta - 1).max(a.floor).max(0);
    let zeta_order = asm.geo.zeta_order();

    // output products: generators other than theta that occur
    let mut used = vec![false; t.len()];
    for (exps, _) in element.terms() {
        for (i, &x) in exps.iter().enumerate() {
            if x != 0 {
                used[i] = true;
            }
        }
    }
    let mut products = Vec::new();
    let mut slot = vec![usize::MAX; t.len()];
    for i in 0..t.len() {
        if !used[i] || Some(i) == asm.theta {
            continue;
        }
        let (depth, lower, base, prod) = asm.role_product(i, pre.delta)?;
        slot[i] = products.len();
        products.push(OutProduct { id: format!("Q{}", products.len() + 1), depth, lower, base, prod, gen: i });
    }
    let mut terms = Vec::new();
    for (exps, c) in element.terms() {
        let mut zeta = 0;
        let mut ex = Vec::new();
        for (i, &x) in exps.iter().enumerate() {
            if x == 0 {
                continue;
            }
            if Some(i) == asm.theta {
                zeta = x;
            } else {
                ex.push((slot[i], x));
            }
        }
        terms.push(OutTerm { coeff: c.clone(), zeta, exps: ex });
    }
    let output_expr = ProdExprAst {
        terms: terms
            .iter()
            .map(|ot| {
                let mut mono = Vec::new();
                if ot.zeta != 0 {
                    mono.push((zeta_prod(zeta_order), ot.zeta));
                }
                mono.extend(ot.exps.iter().map(|&(i, e)| (products[i].prod.clone(), e)));
                Term { coeff: ot.coeff.clone(), mono }
            })
            .collect(),
        floor: delta,
    };
    Ok(RpeResult {
        delta,
        field: t.field().clone(),
        zeta_order,
        products,
        terms,
        geo_bases: asm.geo.hs.clone(),
        hyper_bases: asm.plan.bases.clone(),
        roles: asm.roles,
        element,
        output_expr,
        tower: asm.tower,
    })
}

/// `Some(delta)` when `a` vanishes for all `n >= delta`, `None` otherwise.
pub fn zero_test(a: &ProdExprAst, opts: &GoOptions) -> Result<Option<i64>> {
    let r = reduce(a, opts)?;
    Ok(r.is_zero().then_some(r.delta))
}

/// The two structural conditions behind independence: pairwise
/// shift-coprime hypergeometric bases and no relation among the geometric
/// bases modulo roots of unity.
pub fn structural_checks(r: &RpeResult, opts: &GoOptions) -> Result<()> {
    crate::preprocess::check_shift_coprime(&r.hyper_bases)?;
    if !r.geo_bases.is_empty() && solve_go(&r.geo_bases, opts)?.rank() != 0 {
        return Err(Error::RelationSearchExhausted);
    }
    Ok(())
}

/// First `n` where two values differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub n: i64,
    pub expected: CycNum,
    pub got: CycNum,
}

/// Compares literal evaluations of `input` and `output` at `from..from+count`,
/// skipping points where either side has a pole.
pub fn oracle_check(input: &Raw, output: &Raw, from: i64, count: usize) -> Result<Option<Mismatch>> {
    let mut oi = Oracle::new();
    let mut oo = Oracle::new();
    for n in from..from + count as i64 {
        let a = match oi.eval(input, n) {
            Ok(v) => v,
            Err(e) if is_pole(&e) => continue,
            Err(e) => return Err(e),
        };
        let b = match oo.eval(output, n) {
            Ok(v) => v,
            Err(e) if is_pole(&e) => continue,
            Err(e) => return Err(e),
        };
        if a != b {
            return Ok(Some(Mismatch { n, expected: a, got: b }));
        }
    }
    Ok(None)
}

/// Re-parses the printed output of `r` and checks it against `input`.
pub fn check_result(input: &Raw, r: &RpeResult, count: usize) -> Result<Option<Mismatch>> {
    let out = parse(&r.to_text())?;
    oracle_check(input, &out.raw, r.delta, count)
}

/// Outcome of the numeric search for relations among output products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Independence {
    /// No relation found.
    Consistent { products: usize, samples: usize },
    /// `prod Q_i^{v_i}` equals a constant times `root^n`.
    Relation { exponents: Vec<i64>, root: CycNum },
}

/// Successive quotients `Q(n+1)/Q(n)` for `n` in `from..to`.
fn quotients(p: &NestedProd, from: i64, to: i64) -> Vec<CycNum> {
    let v = p.values(to);
    (from..to).map(|n| v[n as usize + 1].div(&v[n as usize]).expect("nonzero product")).collect()
}

/// Whether `prod q_i^{v_i}` is one fixed root of unity at every sample.
fn exact_relation(qs: &[Vec<CycNum>], v: &[i64]) -> Option<CycNum> {
    let m = qs.first()?.len();
    let mut root: Option<CycNum> = None;
    for k in 0..m {
        let mut t = CycNum::one();
        for (q, &e) in qs.iter().zip(v) {
            if e != 0 {
                t = &t * &q[k].try_pow(e).ok()?;
            }
        }
        match &root {
            None => {
                if t.order_of().ok()? == 0 {
                    return None;
                }
                root = Some(t);
            }
            Some(r) if *r == t => {}
            Some(_) => return None,
        }
    }
    root
}

/// Searches for `v != 0`, `|v_i| <= exp_bound`, with `prod Q_i(n)^{v_i}`
/// a constant times a power of a root of unity, using samples `n <= n_max`.
/// Candidates come from LLL on scaled `log |conjugate|` vectors and, when
/// small enough, exhaustive enumeration; each is verified exactly.
pub fn independence_check(prods: &[NestedProd], from: i64, n_max: i64, exp_bound: i64) -> Independence {
    let s = prods.len();
    let from = from.max(0);
    if s == 0 || n_max <= from {
        return Independence::Consistent { products: s, samples: 0 };
    }
    let qs: Vec<Vec<CycNum>> = prods.iter().map(|p| quotients(p, from, n_max)).collect();
    let conductor = qs.iter().flatten().fold(1, |a, q| lcm_u64(a, q.conductor()));
    let idx = CycField::new(conductor).galois_indices();
    let prec = 48u32;
    let samples = qs[0].len();
    // a few spread-out samples keep the lattice small; verification is exact
    let want = (s + 2).div_ceil(idx.len()).max(2).min(samples);
    let picks: Vec<usize> = (0..want).map(|t| (samples - 1) - t * (samples - 1) / want.max(1)).collect();
    let mut cols: Vec<Vec<i64>> = vec![Vec::new(); s];
    for (i, q) in qs.iter().enumerate() {
        for x in picks.iter().map(|&t| &q[t]) {
            for &k in &idx {
                cols[i].push(log_abs_conj(x, k, prec).v.try_into().unwrap_or(i64::MAX / 4));
            }
        }
    }
    let found = |v: &[i64]| -> Option<Independence> {
        if v.iter().all(|&x| x == 0) || v.iter().any(|x| x.abs() > exp_bound) {
            return None;
        }
        exact_relation(&qs, v).map(|root| Independence::Relation { exponents: v.to_vec(), root })
    };
    // lattice search
    let basis: crate::lattice::IMat = (0..s)
        .map(|i| {
            let mut row: Vec<num_bigint::BigInt> =
                (0..s).map(|j| num_bigint::BigInt::from((i == j) as i64)).collect();
            row.extend(cols[i].iter().map(|&x| num_bigint::BigInt::from(x)));
            row
        })
        .collect();
    for row in crate::lattice::lll(&basis) {
        let v: Option<Vec<i64>> = row[..s].iter().map(|x| i64::try_from(x).ok()).collect();
        if let Some(v) = v {
            if let Some(r) = found(&v) {
                return r;
            }
        }
    }
    // exhaustive search on a floating-point filter
    let width = (2 * exp_bound + 1) as u128;
    if width.checked_pow(s as u32).map_or(false, |c| c <= 2_000_000) {
        let fl: Vec<Vec<f64>> = cols.iter().map(|c| c.iter().map(|&x| x as f64 / (1u64 << prec) as f64).collect()).collect();
        let tol = 1e-6;
        let mut v = vec![-exp_bound; s];
        loop {
            let ok = (0..fl[0].len()).all(|c| (0..s).map(|i| v[i] as f64 * fl[i][c]).sum::<f64>().abs() < tol);
            if ok {
                if let Some(r) = found(&v) {
                    return r;
                }
            }
            let mut i = 0;
            while i < s && v[i] == exp_bound {
                v[i] = -exp_bound;
                i += 1;
            }
            if i == s {
                break;
            }
            v[i] += 1;
        }
    }
    Independence::Consistent { products: s, samples }
}

/// [`independence_check`] on the output products of `r`.
pub fn independence_report(r: &RpeResult, n_max: i64, exp_bound: i64) -> Independence {
    let prods: Vec<NestedProd> = r.products.iter().map(|p| p.prod.clone()).collect();
    let from = r.products.iter().map(|p| p.lower).max().unwrap_or(0);
    independence_check(&prods, from, n_max, exp_bound)
}
