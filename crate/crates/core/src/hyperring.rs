//! Hypergeometric products: one chain of product generators per
//! shift-coprime base, all starting at the common lower bound `delta`.

use crate::error::Result;
use crate::preprocess::{check_shift_coprime, HypFactor, ProductSplit};
use crate::tower::{GenKind, Generator, Tower, TowerElem, UnitMono};
use crate::upoly::{canonical_cmp, Poly, RatFun};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Chains `z_{f,1}, ..., z_{f,s_f}` with
/// `z_{f,d}(n) = prod_{k1=delta}^n ... prod_{kd=delta}^{k(d-1)} f(kd)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperTowerPlan {
    /// Bases in canonical order (degree, then coefficients).
    pub bases: Vec<Poly>,
    pub chain_lengths: Vec<usize>,
    pub delta: i64,
}

impl HyperTowerPlan {
    /// Plan for the hypergeometric factors of `splits`, which share `delta`.
    pub fn new(splits: &[ProductSplit], delta: i64) -> Result<HyperTowerPlan> {
        let mut len: BTreeMap<Poly, usize> = BTreeMap::new();
        for s in splits {
            debug_assert_eq!(s.delta, delta);
            for h in &s.hyp {
                let e = len.entry(h.base.clone()).or_insert(0);
                *e = (*e).max(h.depth);
            }
        }
        let mut bases: Vec<Poly> = len.keys().cloned().collect();
        bases.sort_by(canonical_cmp);
        check_shift_coprime(&bases)?;
        let chain_lengths = bases.iter().map(|b| len[b]).collect();
        Ok(HyperTowerPlan { bases, chain_lengths, delta })
    }

    pub fn max_depth(&self) -> usize {
        self.chain_lengths.iter().copied().max().unwrap_or(0)
    }

    pub fn index_of(&self, base: &Poly) -> Option<usize> {
        self.bases.iter().position(|b| b == base)
    }

    /// Pushes `z_{f,d}` for every chain that reaches depth `d`; records
    /// positions as `idx[(base index, d)]`.
    pub fn push_depth(&self, t: &mut Tower, d: usize, idx: &mut BTreeMap<(usize, usize), usize>) -> Result<()> {
        for (j, f) in self.bases.iter().enumerate() {
            if self.chain_lengths[j] < d {
                continue;
            }
            let mut exps = vec![0i64; t.len()];
            for dd in 1..d {
                exps[idx[&(j, dd)]] = 1;
            }
            let q = UnitMono { coeff: RatFun::from_poly(f.shift(1)), exps };
            let i = t.push(Generator::new(&format!("z{}_{}", j + 1, d), GenKind::P, q, self.delta))?;
            idx.insert((j, d), i);
        }
        Ok(())
    }

    /// Standalone tower of all chains, interleaved by depth.
    pub fn build(&self, t: &mut Tower) -> Result<BTreeMap<(usize, usize), usize>> {
        let mut idx = BTreeMap::new();
        for d in 1..=self.max_depth() {
            self.push_depth(t, d, &mut idx)?;
        }
        Ok(idx)
    }

    /// Image `z_{f,d}^e` of a hypergeometric factor.
    pub fn image_of(&self, t: &Tower, idx: &BTreeMap<(usize, usize), usize>, h: &HypFactor) -> TowerElem {
        let j = self.index_of(&h.base).expect("planned base");
        let mut exps = vec![0i64; t.len()];
        exps[idx[&(j, h.depth)]] = h.exp;
        t.monomial(RatFun::one(), &exps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, CycField, CycNum};
    use crate::expr::NestedProd;
    use crate::preprocess::split_all;

    fn lin(a: CycNum) -> Poly {
        Poly::linear(a)
    }

    fn check_chains(prods: &[NestedProd], upto: i64) -> (HyperTowerPlan, Tower) {
        let pre = split_all(prods, &CycField::rationals()).unwrap();
        let plan = HyperTowerPlan::new(&pre.splits, pre.delta).unwrap();
        let mut t = Tower::new(pre.field.clone());
        let idx = plan.build(&mut t).unwrap();
        let mut ev = t.evaluator();
        for (p, s) in prods.iter().zip(&pre.splits) {
            for n in (pre.delta - 1).max(0)..=upto {
                let mut v = &s.c * &s.r.eval_at(n);
                for g in &s.geo {
                    v = &v * &g.eval(n);
                }
                for h in &s.hyp {
                    v = &v * &ev.ev(&plan.image_of(&t, &idx, h), n);
                }
                assert_eq!(v, p.eval(n), "{} at {n}", p.to_text("n"));
            }
        }
        (plan, t)
    }

    #[test]
    fn single_depth_one() {
        let p = NestedProd::factored(vec![0], RatFun::from_poly(lin(CycNum::one()))).unwrap();
        let (plan, t) = check_chains(&[p], 20);
        assert_eq!(plan.chain_lengths, vec![1]);
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn shared_base_depths_one_and_three() {
        let f = RatFun::from_poly(lin(CycNum::from_int(2)));
        let p1 = NestedProd::factored(vec![1], f.clone()).unwrap();
        let p3 = NestedProd::factored(vec![1, 1, 1], f).unwrap();
        let (plan, t) = check_chains(&[p1, p3], 25);
        assert_eq!(plan.chain_lengths, vec![3]);
        assert_eq!(t.len(), 3);
        let depths: Vec<usize> = t.generators().iter().map(|g| g.depth).collect();
        assert_eq!(depths, vec![1, 2, 3]);
    }

    #[test]
    fn running_example_chains() {
        let m2 = lin(CycNum::from_int(-2));
        let c24 = lin(CycNum::from_rat(rat(1, 24)));
        let split = ProductSplit {
            c: CycNum::one(),
            r: RatFun::one(),
            geo: Vec::new(),
            hyp: vec![
                HypFactor { depth: 1, base: m2.clone(), exp: 3 },
                HypFactor { depth: 1, base: c24.clone(), exp: 1 },
                HypFactor { depth: 2, base: m2.clone(), exp: 1 },
            ],
            delta: 3,
        };
        let plan = HyperTowerPlan::new(core::slice::from_ref(&split), 3).unwrap();
        assert_eq!(plan.bases.len(), 2);
        assert_eq!(plan.chain_lengths[plan.index_of(&m2).unwrap()], 2);
        assert_eq!(plan.chain_lengths[plan.index_of(&c24).unwrap()], 1);
        let mut t = Tower::new(CycField::rationals());
        let idx = plan.build(&mut t).unwrap();
        let depths: Vec<usize> = t.generators().iter().map(|g| g.depth).collect();
        assert_eq!(depths, vec![1, 1, 2]);
        let mut ev = t.evaluator();
        for h in &split.hyp {
            let img = plan.image_of(&t, &idx, h);
            let p = h.product(3);
            for n in 2..20 {
                assert_eq!(ev.ev(&img, n), p.eval(n).pow(h.exp));
            }
        }
    }

    #[test]
    fn shift_equivalent_bases_rejected() {
        let split = ProductSplit {
            c: CycNum::one(),
            r: RatFun::one(),
            geo: Vec::new(),
            hyp: vec![
                HypFactor { depth: 1, base: lin(CycNum::one()), exp: 1 },
                HypFactor { depth: 1, base: lin(CycNum::from_int(3)), exp: 1 },
            ],
            delta: 1,
        };
        assert!(HyperTowerPlan::new(&[split], 1).is_err());
    }
}
