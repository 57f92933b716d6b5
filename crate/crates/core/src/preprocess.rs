//! Splits nested products into `c * r(n) * G(n) * H(n)`: a constant, a
//! rational function, geometric products over constant bases starting at 1,
//! and hypergeometric products over pairwise shift-coprime monic irreducible
//! bases starting at a common `delta`.

use crate::arith::intfac;
use crate::arith::{lcm_u64, BigRat, CycField, CycNum};
use crate::error::{Error, Result};
use crate::expr::NestedProd;
use crate::lattice;
use crate::upoly::{canonical_cmp, factorize, integer_roots, resultant_shift, Poly, RatFun};
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `prod_{k1=1}^n ... prod_{kd=1}^{k(d-1)} base`, raised to `exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeoFactor {
    pub depth: usize,
    pub base: CycNum,
    pub exp: i64,
}

/// `prod_{k1=delta}^n ... prod_{kd=delta}^{k(d-1)} base(kd)`, raised to `exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypFactor {
    pub depth: usize,
    pub base: Poly,
    pub exp: i64,
}

impl GeoFactor {
    pub fn product(&self) -> NestedProd {
        NestedProd::factored(vec![1; self.depth], RatFun::constant(self.base.clone())).expect("nonzero base")
    }

    /// `base^C(n+d-1, d)`.
    pub fn eval(&self, n: i64) -> CycNum {
        let c = count_ones(self.depth, n);
        self.base.pow(c.to_i64().expect("small exponent") * self.exp)
    }
}

impl HypFactor {
    pub fn product(&self, delta: i64) -> NestedProd {
        NestedProd::factored(vec![delta; self.depth], RatFun::from_poly(self.base.clone())).expect("valid base")
    }
}

/// One input product as `c * r(n) * prod geo * prod hyp`, an identity for
/// `n >= max(0, delta - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSplit {
    pub c: CycNum,
    pub r: RatFun,
    pub geo: Vec<GeoFactor>,
    pub hyp: Vec<HypFactor>,
    pub delta: i64,
}

impl ProductSplit {
    /// Value at `n` computed from the split.
    pub fn eval(&self, n: i64) -> CycNum {
        let mut acc = &self.c * &self.r.eval_at(n);
        for g in &self.geo {
            acc = &acc * &g.eval(n);
        }
        for h in &self.hyp {
            let v = h.product(self.delta).eval(n);
            acc = &acc * &v.try_pow(h.exp).unwrap_or_else(|_| CycNum::zero());
        }
        acc
    }
}

/// Splits a nonzero constant into atoms: `-1`, rational primes and the
/// primitive irrational part.
pub fn atoms(c: &CycNum) -> Vec<(CycNum, i64)> {
    let (q, w) = c.split_rational();
    let mut out = Vec::new();
    if q.is_negative() {
        out.push((CycNum::from_int(-1), 1));
    }
    for (p, e) in intfac::factor(q.numer()) {
        out.push((CycNum::from_bigint(p), e as i64));
    }
    for (p, e) in intfac::factor(q.denom()) {
        out.push((CycNum::from_bigint(p), -(e as i64)));
    }
    if !w.is_one() {
        out.push((w, 1));
    }
    out
}

/// Rewrites `p` as a product of powers of products in factored form whose
/// bases are constant atoms or monic irreducible polynomials over `field`.
pub fn factored_form(p: &NestedProd, field: &CycField) -> Result<Vec<(NestedProd, i64)>> {
    let mut out = Vec::new();
    for (i, f) in p.mults().iter().enumerate() {
        if f.is_one() {
            continue;
        }
        let lowers = p.lowers()[..=i].to_vec();
        let fac = factorize(f, field)?;
        for (a, e) in atoms(&fac.content) {
            out.push((NestedProd::factored(lowers.clone(), RatFun::constant(a))?, e));
        }
        for (g, e) in fac.factors {
            out.push((NestedProd::factored(lowers.clone(), RatFun::from_poly(g))?, e));
        }
    }
    Ok(out)
}

struct Acc {
    c: CycNum,
    r: RatFun,
    geo: BTreeMap<(usize, CycNum), i64>,
    hyp: BTreeMap<(usize, Poly), i64>,
}

impl Acc {
    fn new() -> Acc {
        Acc { c: CycNum::one(), r: RatFun::one(), geo: BTreeMap::new(), hyp: BTreeMap::new() }
    }

    fn mul_const(&mut self, a: &CycNum, e: i64) {
        self.c = &self.c * &a.pow(e);
    }

    fn add_geo(&mut self, depth: usize, u: CycNum, e: i64) {
        if e != 0 && !u.is_one() {
            *self.geo.entry((depth, u)).or_insert(0) += e;
        }
    }

    fn add_hyp(&mut self, depth: usize, f: Poly, e: i64) {
        if e != 0 {
            *self.hyp.entry((depth, f)).or_insert(0) += e;
        }
    }

    /// `F(lowers; u)^e` for a constant `u`, moved to lower bounds 1.
    fn geo_from(&mut self, lowers: &[i64], u: &CycNum, e: i64) {
        if u.is_one() || e == 0 {
            return;
        }
        let a = count_in_ones_basis(lowers);
        for (m, am) in a.iter().enumerate() {
            if am.is_zero() {
                continue;
            }
            let k = am.to_i64().expect("small count") * e;
            if m == 0 {
                self.mul_const(u, k);
            } else {
                for (atom, ae) in atoms(u) {
                    self.add_geo(m, atom, ae * k);
                }
            }
        }
    }

    /// `F(lowers; h)^e` for a monic irreducible `h`, moved to lower bounds `delta`.
    fn hyp_from(&mut self, lowers: &[i64], h: &Poly, e: i64, delta: i64) {
        let r = lowers.len();
        let cs = boundary_values(lowers, h, delta);
        self.mul_const(&cs[0], e);
        for (j, cj) in cs.iter().enumerate().skip(1) {
            // G_j(delta; C_{j+1}) at depth j
            self.geo_from(&vec![delta; j], cj, e);
        }
        self.add_hyp(r, h.clone(), e);
    }

    fn finish(self, delta: i64) -> ProductSplit {
        let geo = self
            .geo
            .into_iter()
            .filter(|(_, e)| *e != 0)
            .map(|((depth, base), exp)| GeoFactor { depth, base, exp })
            .collect();
        let mut hyp: Vec<HypFactor> = self
            .hyp
            .into_iter()
            .filter(|(_, e)| *e != 0)
            .map(|((depth, base), exp)| HypFactor { depth, base, exp })
            .collect();
        hyp.sort_by(|a, b| a.depth.cmp(&b.depth).then_with(|| canonical_cmp(&a.base, &b.base)));
        ProductSplit { c: self.c, r: self.r, geo, hyp, delta }
    }
}

/// `C(n+m-1, m)`: number of tuples `1 <= km <= ... <= k1 <= n`.
fn count_ones(m: usize, n: i64) -> BigInt {
    if m == 0 {
        return BigInt::one();
    }
    crate::arith::binom(n + m as i64 - 1, m as i64)
}

/// Number of index tuples of `F(lowers; .)` at `n`.
fn count_tuples(lowers: &[i64], n: i64) -> BigInt {
    // v[k] = count of the inner levels with upper bound k
    let len = (n + 1).max(0) as usize;
    let mut v: Vec<BigInt> = vec![BigInt::one(); len];
    for &l in lowers.iter().rev() {
        let mut acc = BigInt::zero();
        let mut w = Vec::with_capacity(len);
        for (k, x) in v.iter().enumerate() {
            if k as i64 >= l {
                acc += x;
            }
            w.push(acc.clone());
        }
        v = w;
    }
    if n < 0 {
        BigInt::zero()
    } else {
        v[n as usize].clone()
    }
}

/// Coordinates `a_m` with `#tuples(lowers, n) = sum_m a_m C(n+m-1, m)` for
/// `n >= max(lowers) - 1`.
fn count_in_ones_basis(lowers: &[i64]) -> Vec<BigInt> {
    let r = lowers.len();
    let n0 = (lowers.iter().copied().max().unwrap_or(0) - 1).max(0);
    let a: lattice::IMat = (0..=r)
        .map(|i| (0..=r).map(|m| count_ones(m, n0 + i as i64)).collect())
        .collect();
    let inv = lattice::inverse_rat(&a).expect("binomial basis is invertible");
    let b: Vec<BigInt> = (0..=r).map(|i| count_tuples(lowers, n0 + i as i64)).collect();
    let coords: Vec<BigInt> = (0..=r)
        .map(|m| {
            let s = (0..=r).fold(BigRat::zero(), |s, i| s + &inv[m][i] * BigRat::from_integer(b[i].clone()));
            assert!(s.is_integer(), "tuple counts are integer valued");
            s.to_integer()
        })
        .collect();
    debug_assert!((1..3).all(|t| {
        let n = n0 + (r + t) as i64;
        let lhs = count_tuples(lowers, n);
        let rhs = coords.iter().enumerate().fold(BigInt::zero(), |s, (m, am)| s + am * count_ones(m, n));
        lhs == rhs
    }));
    coords
}

/// `C_j = V_j(delta - 1)` where `V_r(k) = prod_{kr=lr}^k h(kr)` and
/// `V_j(k) = prod_{kj=lj}^k V_{j+1}(kj)`; index 0 is the outermost level.
fn boundary_values(lowers: &[i64], h: &Poly, delta: i64) -> Vec<CycNum> {
    let r = lowers.len();
    let top = delta - 1;
    let len = (top + 1).max(0) as usize;
    let mut out = vec![CycNum::one(); r];
    let mut inner: Option<Vec<CycNum>> = None;
    for lvl in (0..r).rev() {
        let l = lowers[lvl];
        let mut acc = CycNum::one();
        let mut v = Vec::with_capacity(len);
        for k in 0..len {
            if k as i64 >= l {
                let t = match &inner {
                    Some(inn) => inn[k].clone(),
                    None => h.eval_int(k as i64),
                };
                acc = &acc * &t;
            }
            v.push(acc.clone());
        }
        if top >= 0 {
            out[lvl] = v[top as usize].clone();
        }
        inner = Some(v);
    }
    out
}

/// Moves the factors of [`factored_form`] to common lower bounds: geometric
/// ones to 1, hypergeometric ones to `delta`.  Identity for `n >= max(0, delta-1)`;
/// requires `delta >= ` every lower bound.
pub fn synchronize(factors: &[(NestedProd, i64)], delta: i64) -> Result<(CycNum, Vec<GeoFactor>, Vec<HypFactor>)> {
    let mut acc = Acc::new();
    for (p, e) in factors {
        push_factor(&mut acc, p, *e, delta)?;
    }
    let s = acc.finish(delta);
    Ok((s.c, s.geo, s.hyp))
}

fn push_factor(acc: &mut Acc, p: &NestedProd, e: i64, delta: i64) -> Result<()> {
    debug_assert!(p.is_factored());
    if p.max_lower() > delta {
        return Err(Error::InvalidLowerBound { product: p.to_text("n"), at: p.max_lower() });
    }
    let b = p.base();
    if let Some(u) = b.as_constant() {
        acc.geo_from(p.lowers(), &u, e);
    } else {
        let h = b.num();
        debug_assert!(b.den().is_one() && h.is_monic());
        acc.hyp_from(p.lowers(), h, e, delta);
    }
    Ok(())
}

/// Shift-equivalence classes, each represented by its leftmost member.
#[derive(Clone, Debug, Default)]
pub struct ShiftClasses {
    reps: Vec<Poly>,
}

/// `k` with `g(x) = f(x + k)`, if any.
pub fn shift_distance(f: &Poly, g: &Poly) -> Option<i64> {
    let d = f.deg();
    if d == 0 || d != g.deg() || !f.is_monic() || !g.is_monic() {
        return None;
    }
    let diff = (&g.coeff(d - 1) - &f.coeff(d - 1)).as_rational()? / BigRat::from_integer(BigInt::from(d));
    if !diff.is_integer() {
        return None;
    }
    let k = diff.to_integer().to_i64()?;
    if &f.shift(k) == g {
        Some(k)
    } else {
        None
    }
}

impl ShiftClasses {
    pub fn new<'a, I: IntoIterator<Item = &'a Poly>>(bases: I) -> ShiftClasses {
        let mut reps: Vec<Poly> = Vec::new();
        for g in bases {
            let mut placed = false;
            for r in reps.iter_mut() {
                if let Some(k) = shift_distance(r, g) {
                    if k < 0 {
                        *r = g.clone();
                    }
                    placed = true;
                    break;
                }
            }
            if !placed {
                reps.push(g.clone());
            }
        }
        ShiftClasses { reps }
    }

    /// Leftmost representative `f0` and `k >= 0` with `g = f0(x + k)`.
    pub fn locate(&self, g: &Poly) -> Option<(&Poly, i64)> {
        self.reps.iter().find_map(|r| shift_distance(r, g).map(|k| (r, k)))
    }

    pub fn representatives(&self) -> &[Poly] {
        &self.reps
    }
}

/// `prod_{i<k} f(x + i + s)` evaluated at the integer `t`.
fn shifted_block(f: &Poly, k: i64, t: i64) -> CycNum {
    (0..k).fold(CycNum::one(), |a, i| &a * &f.eval_int(t + i))
}

fn reduce_hyp(acc: &mut Acc, classes: &ShiftClasses, delta: i64) -> Result<()> {
    let maxd = acc.hyp.keys().map(|(d, _)| *d).max().unwrap_or(0);
    for m in (1..=maxd).rev() {
        let level: Vec<(Poly, i64)> =
            acc.hyp.iter().filter(|((d, _), _)| *d == m).map(|((_, f), e)| (f.clone(), *e)).collect();
        for (g, e) in level {
            let (f0, k) = match classes.locate(&g) {
                Some((f0, k)) => (f0.clone(), k),
                None => return Err(Error::ShiftCoprimalityViolated),
            };
            if k == 0 {
                continue;
            }
            assert!(k > 0, "leftmost representative");
            acc.hyp.remove(&(m, g.clone()));
            acc.add_hyp(m, f0.clone(), e);
            if m == 1 {
                // prod_{j=delta}^n f0(j+k) = prod f0(j) * G(n+1) / G(delta)
                let mut gpoly = Poly::one();
                for i in 0..k {
                    gpoly = gpoly.mul(&f0.shift(i));
                }
                let gd = gpoly.eval_int(delta);
                let q = RatFun::from_poly(gpoly.shift(1)).scale(&gd.inv()?);
                acc.r = acc.r.mul(&q.pow(e)?);
            } else {
                let gd = shifted_block(&f0, k, delta);
                acc.geo_from(&vec![delta; m - 1], &gd.inv()?, e);
                for i in 0..k {
                    acc.add_hyp(m - 1, f0.shift(1 + i), e);
                }
            }
        }
    }
    acc.hyp.retain(|_, e| *e != 0);
    Ok(())
}

/// Rewrites hypergeometric factors (lower bounds `delta`) over the leftmost
/// members of their shift classes.  Returns the constant, the rational part,
/// the new geometric factors and the reduced hypergeometric factors.
pub fn shift_coprime_reduce(
    hyp: &[HypFactor],
    delta: i64,
) -> Result<(CycNum, RatFun, Vec<GeoFactor>, Vec<HypFactor>)> {
    let classes = ShiftClasses::new(hyp.iter().map(|h| &h.base));
    let mut acc = Acc::new();
    for h in hyp {
        acc.add_hyp(h.depth, h.base.clone(), h.exp);
    }
    reduce_hyp(&mut acc, &classes, delta)?;
    let s = acc.finish(delta);
    Ok((s.c, s.r, s.geo, s.hyp))
}

/// Splits of several products sharing one `delta`, one field and one set of
/// shift classes.
#[derive(Clone, Debug)]
pub struct Preprocessed {
    pub delta: i64,
    pub field: CycField,
    pub splits: Vec<ProductSplit>,
}

pub fn split_all(prods: &[NestedProd], field: &CycField) -> Result<Preprocessed> {
    let n = prods.iter().fold(field.conductor(), |a, p| lcm_u64(a, p.conductor()));
    let field = CycField::new(n);
    let delta = prods.iter().map(|p| p.max_lower()).max().unwrap_or(0).max(0);
    let forms: Vec<Vec<(NestedProd, i64)>> =
        prods.iter().map(|p| factored_form(p, &field)).collect::<Result<_>>()?;
    let bases: Vec<Poly> = forms
        .iter()
        .flatten()
        .filter(|(p, _)| !p.base().is_constant())
        .map(|(p, _)| p.base().num().clone())
        .collect();
    let classes = ShiftClasses::new(bases.iter());
    let mut splits = Vec::with_capacity(prods.len());
    for form in &forms {
        let mut acc = Acc::new();
        for (p, e) in form {
            push_factor(&mut acc, p, *e, delta)?;
        }
        reduce_hyp(&mut acc, &classes, delta)?;
        splits.push(acc.finish(delta));
    }
    check_shift_coprime(classes.representatives())?;
    Ok(Preprocessed { delta, field, splits })
}

/// Split of a single product with `delta` its largest lower bound.
pub fn split(p: &NestedProd) -> Result<ProductSplit> {
    let mut pre = split_all(core::slice::from_ref(p), &CycField::rationals())?;
    Ok(pre.splits.pop().unwrap())
}

/// Fails unless the given bases are pairwise shift-coprime.
pub fn check_shift_coprime(bases: &[Poly]) -> Result<()> {
    for (i, f) in bases.iter().enumerate() {
        for g in &bases[i + 1..] {
            if !integer_roots(&resultant_shift(f, g))?.is_empty() {
                return Err(Error::ShiftCoprimalityViolated);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::expr::parse;

    fn prods_of(text: &str) -> Vec<NestedProd> {
        parse(text).unwrap().ast.products()
    }

    fn check_split(p: &NestedProd, s: &ProductSplit, upto: i64) {
        let from = (s.delta - 1).max(0);
        let vals = p.values(upto);
        for n in from..=upto {
            assert_eq!(s.eval(n), vals[n as usize], "{} at {n}", p.to_text("n"));
        }
    }

    #[test]
    fn tuple_counts() {
        assert_eq!(count_in_ones_basis(&[1, 1]), vec![BigInt::zero(), BigInt::zero(), BigInt::one()]);
        // prod_{k=3}^n c: exponent n - 2
        assert_eq!(count_in_ones_basis(&[3]), vec![BigInt::from(-2), BigInt::one()]);
        for lw in [vec![0, 2], vec![3, 1, 2], vec![2, 5], vec![0]] {
            let a = count_in_ones_basis(&lw);
            let n0 = (lw.iter().copied().max().unwrap() - 1).max(0);
            for n in n0..n0 + 10 {
                let rhs = a.iter().enumerate().fold(BigInt::zero(), |s, (m, am)| s + am * count_ones(m, n));
                assert_eq!(count_tuples(&lw, n), rhs);
            }
        }
    }

    #[test]
    fn constant_multiplicand_splits_into_primes() {
        let p = &prods_of("Prod(k,1,n,6)")[0];
        let s = split(p).unwrap();
        assert_eq!(s.geo.len(), 2);
        assert!(s.c.is_one() && s.r.is_one() && s.hyp.is_empty());
        check_split(p, &s, 10);
    }

    #[test]
    fn square_base() {
        let p = &prods_of("Prod(k,2,n,(k-1)^2)")[0];
        let s = split(p).unwrap();
        assert_eq!(s.hyp, vec![HypFactor { depth: 1, base: Poly::from_ints(&[-1, 1]), exp: 2 }]);
        check_split(p, &s, 10);
    }

    #[test]
    fn depth_one_reduction() {
        // prod_{k=3}^n (k+2) = (n-1)n(n+1)(n+2)/24 prod_{k=3}^n (k-2)
        let ps = prods_of("Prod(k,3,n,k+2)*Prod(k,3,n,k-2)");
        let pre = split_all(&ps, &CycField::rationals()).unwrap();
        let s = pre.splits.iter().find(|s| !s.r.is_one()).unwrap();
        assert_eq!(s.hyp[0].base, Poly::from_ints(&[-2, 1]));
        let want = RatFun::from_poly(
            Poly::from_ints(&[-1, 1]).mul(&Poly::x()).mul(&Poly::from_ints(&[1, 1])).mul(&Poly::from_ints(&[2, 1])),
        )
        .scale(&CycNum::from_rat(rat(1, 24)));
        assert_eq!(s.r, want);
        for (p, s) in ps.iter().zip(&pre.splits) {
            check_split(p, s, 12);
        }
    }

    #[test]
    fn depth_two_reduction() {
        let ps = prods_of("Prod(k,3,n,Prod(j,3,k,j+2))*Prod(k,3,n,k-2)");
        let pre = split_all(&ps, &CycField::rationals()).unwrap();
        for (p, s) in ps.iter().zip(&pre.splits) {
            check_split(p, s, 12);
            for h in &s.hyp {
                assert_eq!(h.base, Poly::from_ints(&[-2, 1]));
            }
        }
    }

    #[test]
    fn running_example_split() {
        let text = "Prod(k,1,n, (24*k+1)/(-sqrt(3)) * Prod(j,3,k, (-2*(j^3-3*j+2))/(5*(j^2-j-2))))";
        let ps = prods_of(text);
        let pre = split_all(&ps, &CycField::rationals()).unwrap();
        assert_eq!(pre.delta, 3);
        let s = &pre.splits[0];
        check_split(&ps[0], s, 20);
        let bases: Vec<(usize, Poly)> = s.hyp.iter().map(|h| (h.depth, h.base.clone())).collect();
        let xm2 = Poly::from_ints(&[-2, 1]);
        let x24 = Poly::from_rats(&[rat(1, 24), rat(1, 1)]);
        assert_eq!(bases, vec![(1, xm2.clone()), (1, x24), (2, xm2)]);
        assert_eq!(s.hyp[0].exp, 3);
        // r = (n-1)^3 n (n+1) (n+2) up to a constant
        assert_eq!(s.r.num().deg(), 6);
        assert!(s.r.den().is_one());
    }

    #[test]
    fn lower_zero() {
        let p = &prods_of("Prod(k,0,n,k+1)")[0];
        let s = split(p).unwrap();
        assert_eq!(s.delta, 0);
        assert!(s.c.is_one() && s.r.is_one());
        assert_eq!(s.hyp[0].base, Poly::from_ints(&[1, 1]));
        check_split(p, &s, 15);
    }

    #[test]
    fn classes_pick_leftmost() {
        let fs: Vec<Poly> = [-1, 1, 2, -2].iter().map(|&a| Poly::from_ints(&[a, 1])).collect();
        let c = ShiftClasses::new(fs.iter());
        assert_eq!(c.representatives(), &[Poly::from_ints(&[-2, 1])]);
        assert_eq!(c.locate(&Poly::from_ints(&[2, 1])).unwrap().1, 4);
    }
}
