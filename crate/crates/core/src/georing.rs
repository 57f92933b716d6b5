//! Geometric products: multiplicative relations among constants, the
//! reduction to independent bases plus a root of unity, periods of algebraic
//! chains and their collapse onto a single `zeta^n`.

use crate::arith::embed::log_abs_conj;
use crate::arith::{intfac, lcm_u64, CycField, CycNum};
use crate::error::{Error, Result};
use crate::lattice::{self, IMat};
use crate::preprocess::GeoFactor;
use crate::tower::{GenKind, Generator, Tower, TowerElem, UnitMono};
use crate::upoly::RatFun;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Knobs of the relation search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GoOptions {
    /// Candidate relations with a larger exponent are discarded.
    pub max_exponent: i64,
    /// Starting precision in bits of the numerical search.
    pub precision: u32,
}

impl Default for GoOptions {
    fn default() -> Self {
        GoOptions { max_exponent: 64, precision: 128 }
    }
}

/// Basis of `{v : prod alpha_i^{v_i} is a root of unity}` with the root of
/// unity of each basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationLattice {
    pub elements: Vec<CycNum>,
    pub basis: Vec<Vec<i64>>,
    pub cofactors: Vec<CycNum>,
}

fn power_product(alphas: &[CycNum], v: &[i64]) -> Result<CycNum> {
    let mut acc = CycNum::one();
    for (a, &e) in alphas.iter().zip(v) {
        if e != 0 {
            acc = &acc * &a.try_pow(e)?;
        }
    }
    Ok(acc)
}

fn to_i64_rows(m: &IMat) -> Option<Vec<Vec<i64>>> {
    m.iter().map(|r| r.iter().map(|x| x.to_i64()).collect()).collect()
}

impl RelationLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Basis of the exact relations `{v : prod alpha^v = 1}`.
    pub fn strict_basis(&self) -> Vec<Vec<i64>> {
        let r = self.basis.len();
        if r == 0 {
            return Vec::new();
        }
        let t = self.cofactors.iter().fold(1u64, |a, c| lcm_u64(a, c.order_of().unwrap_or(1).max(1)));
        let z = CycNum::zeta(t);
        let ms: Vec<i64> = self.cofactors.iter().map(|c| discrete_log(&z, t, c).expect("root of unity") as i64).collect();
        // kernel of c -> sum c_i m_i mod t
        let mut rows: Vec<Vec<i64>> = ms.iter().map(|&m| vec![m]).collect();
        rows.push(vec![t as i64]);
        let ker = lattice::left_kernel(&lattice::to_imat(&rows), 1);
        let proj: IMat = ker.iter().map(|row| row[..r].to_vec()).collect();
        let proj = lattice::row_hnf(&proj);
        let b = lattice::to_imat(&self.basis);
        let w = self.elements.len();
        to_i64_rows(&lattice::mat_mul(&proj, &b, w)).expect("small relations")
    }
}

/// `k` in `[0, t)` with `z^k = c`.
fn discrete_log(z: &CycNum, t: u64, c: &CycNum) -> Option<u64> {
    let mut p = CycNum::one();
    for k in 0..t.max(1) {
        if &p == c {
            return Some(k);
        }
        p = &p * z;
    }
    None
}

/// Basis of all multiplicative relations modulo roots of unity.
pub fn solve_go(alphas: &[CycNum], opts: &GoOptions) -> Result<RelationLattice> {
    if alphas.iter().any(|a| a.is_zero()) {
        return Err(Error::ZeroElement);
    }
    if alphas.iter().all(|a| a.is_rational()) {
        solve_rational(alphas)
    } else {
        solve_general(alphas, opts)
    }
}

fn finish(alphas: &[CycNum], basis: IMat) -> Result<RelationLattice> {
    let basis = to_i64_rows(&basis).ok_or(Error::RelationSearchExhausted)?;
    let mut cofactors = Vec::with_capacity(basis.len());
    for v in &basis {
        let c = power_product(alphas, v)?;
        if c.order_of()? == 0 {
            return Err(Error::RelationSearchExhausted);
        }
        cofactors.push(c);
    }
    Ok(RelationLattice { elements: alphas.to_vec(), basis, cofactors })
}

/// Valuation matrix `rows[i][p] = v_p(q_i)`.
fn valuation_matrix(qs: &[num_rational::BigRational]) -> IMat {
    let mut primes: Vec<BigInt> = Vec::new();
    let facs: Vec<Vec<(BigInt, i64)>> = qs
        .iter()
        .map(|q| {
            let mut f: Vec<(BigInt, i64)> = intfac::factor(q.numer()).into_iter().map(|(p, e)| (p, e as i64)).collect();
            f.extend(intfac::factor(q.denom()).into_iter().map(|(p, e)| (p, -(e as i64))));
            for (p, _) in &f {
                if !primes.contains(p) {
                    primes.push(p.clone());
                }
            }
            f
        })
        .collect();
    facs.iter()
        .map(|f| {
            primes
                .iter()
                .map(|p| f.iter().find(|(q, _)| q == p).map(|(_, e)| BigInt::from(*e)).unwrap_or_default())
                .collect()
        })
        .collect()
}

/// Exact path for rational inputs: the kernel of the prime-exponent matrix.
pub fn solve_rational(alphas: &[CycNum]) -> Result<RelationLattice> {
    let qs: Vec<_> = alphas.iter().map(|a| a.as_rational().expect("rational input")).collect();
    let m = valuation_matrix(&qs);
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let ker = if cols == 0 { lattice::identity(alphas.len()) } else { lattice::left_kernel(&m, cols) };
    finish(alphas, ker)
}

/// Heuristic path for arbitrary cyclotomic inputs.
///
/// Exact relations lie in the kernel of the norm-valuation matrix; inside it,
/// candidates are short vectors of an LLL-reduced lattice weighting
/// `ln |conjugate|` sums, at doubling precision.  Every accepted vector is
/// verified exactly.
pub fn solve_general(alphas: &[CycNum], opts: &GoOptions) -> Result<RelationLattice> {
    if alphas.iter().any(|a| a.is_zero()) {
        return Err(Error::ZeroElement);
    }
    let w = alphas.len();
    let n = alphas.iter().fold(1u64, |a, x| lcm_u64(a, x.conductor()));
    let deg = CycField::new(n).degree();
    // norms taken in the common field
    let norms: Vec<_> = alphas
        .iter()
        .map(|a| {
            let k = (deg / a.field().degree()) as i32;
            num_traits::pow::Pow::pow(a.norm(), k)
        })
        .collect();
    let vm = valuation_matrix(&norms);
    let cols = vm.first().map(|r| r.len()).unwrap_or(0);
    let k0 = if cols == 0 { lattice::identity(w) } else { lattice::left_kernel(&vm, cols) };
    if k0.is_empty() {
        return finish(alphas, Vec::new());
    }
    let t = lcm_u64(2, n) as i64;
    let idx = CycField::new(n).galois_indices();
    let bound = BigInt::from(opts.max_exponent);
    let mut prec = opts.precision.max(64);
    let mut prev: Option<IMat> = None;
    for _round in 0..5 {
        let logs: Vec<Vec<num_bigint::BigInt>> = alphas
            .iter()
            .map(|a| idx.iter().map(|&k| log_abs_conj(a, k, prec).v).collect())
            .collect();
        let kdim = k0.len();
        // row i: [e_i | sum_u k0[i][u] * log_u], features at 2^prec scale
        let basis: IMat = (0..kdim)
            .map(|i| {
                let mut row: Vec<BigInt> = (0..kdim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect();
                for c in 0..idx.len() {
                    let s = (0..w).fold(BigInt::zero(), |s, u| s + &k0[i][u] * &logs[u][c]);
                    row.push(s);
                }
                row
            })
            .collect();
        let red = lattice::lll(&basis);
        let small = BigInt::one() << (prec / 2);
        let mut found: IMat = Vec::new();
        let mut failed = false;
        for row in &red {
            if row[kdim..].iter().any(|x| x.abs() > small) {
                continue;
            }
            let coef: IMat = vec![row[..kdim].to_vec()];
            let v = lattice::mat_mul(&coef, &k0, w).remove(0);
            if v.iter().any(|x| x.abs() > bound) {
                continue;
            }
            let vi: Vec<i64> = v.iter().map(|x| x.to_i64().unwrap()).collect();
            let beta = power_product(alphas, &vi)?;
            if beta.pow(t).is_one() {
                found.push(v);
            } else {
                failed = true;
            }
        }
        let sat = lattice::saturate(&found, w);
        let ok = !failed
            && sat.iter().all(|v| {
                v.iter().all(|x| x.abs() <= bound)
                    && power_product(alphas, &v.iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>())
                        .map(|b| b.pow(t).is_one())
                        .unwrap_or(false)
            });
        if ok && prev.as_ref() == Some(&sat) {
            return finish(alphas, sat);
        }
        prev = if ok { Some(sat) } else { None };
        prec *= 2;
    }
    Err(Error::RelationSearchExhausted)
}

/// Bases rewritten as `zeta'^mu * prod h_j^{v_j}` with the `h_j`
/// multiplicatively independent modulo roots of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Depth1 {
    /// Order of `zeta'` (1 when no root of unity is needed).
    pub lambda: u64,
    pub zeta: CycNum,
    pub hs: Vec<CycNum>,
    /// Per input base: `(mu, v)`.
    pub images: Vec<(u64, Vec<i64>)>,
}

pub fn reduce_depth1(bases: &[CycNum], opts: &GoOptions) -> Result<Depth1> {
    let w = bases.len();
    let lat = solve_go(bases, opts)?;
    let b = lattice::to_imat(&lat.basis);
    let r = b.len();
    let mut c = lattice::unimodular_complement(&b, w);
    // irrational bases first, then rationals by value
    let key = |row: &Vec<BigInt>| -> (bool, Option<crate::arith::BigRat>) {
        let v: Vec<i64> = row.iter().map(|x| x.to_i64().unwrap_or(0)).collect();
        let h = power_product(bases, &v).ok();
        let q = h.as_ref().and_then(|h| h.as_rational());
        (q.is_some(), q.map(|q| q.abs()))
    };
    c.sort_by_cached_key(key);
    for row in c.iter_mut() {
        // orient each chain base to have absolute value above one where rational
        let v: Vec<i64> = row.iter().map(|x| x.to_i64().unwrap_or(0)).collect();
        if let Some(q) = power_product(bases, &v).ok().and_then(|h| h.as_rational()) {
            if q.abs() < crate::arith::BigRat::one() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
        }
    }
    let mut m = b.clone();
    m.extend(c.iter().cloned());
    let minv = lattice::inverse_unimodular(&m).ok_or(Error::RelationSearchExhausted)?;
    let c64 = to_i64_rows(&c).ok_or(Error::RelationSearchExhausted)?;
    let hs: Vec<CycNum> = c64.iter().map(|row| power_product(bases, row)).collect::<Result<_>>()?;
    let lambda = lat.cofactors.iter().map(|t| t.order_of()).try_fold(1u64, |a, o| o.map(|o| lcm_u64(a, o)))?;
    let zeta = CycNum::zeta(lambda);
    let ms: Vec<u64> = lat
        .cofactors
        .iter()
        .map(|t| discrete_log(&zeta, lambda, t).ok_or(Error::RelationSearchExhausted))
        .collect::<Result<_>>()?;
    let mut images = Vec::with_capacity(w);
    for (u, base) in bases.iter().enumerate() {
        let row = &minv[u];
        let mut mu: i64 = 0;
        for i in 0..r {
            let x = row[i].to_i64().ok_or(Error::RelationSearchExhausted)?;
            mu = (mu + x * ms[i] as i64).rem_euclid(lambda as i64);
        }
        let v: Vec<i64> = row[r..].iter().map(|x| x.to_i64()).collect::<Option<_>>().ok_or(Error::RelationSearchExhausted)?;
        let got = &zeta.pow(mu) * &power_product(&hs, &v)?;
        if &got != base {
            return Err(Error::RelationSearchExhausted);
        }
        images.push((mu as u64, v));
    }
    Ok(Depth1 { lambda, zeta, hs, images })
}

/// `theta_1, ..., theta_depth` with `sigma(theta_d) = zeta theta_1 ... theta_d`,
/// all of order `lambda`.
pub fn a_chain(lambda: u64, zeta: &CycNum, depth: usize) -> Result<Tower> {
    let mut t = Tower::new(CycField::new(zeta.conductor()));
    for d in 0..depth {
        let mut exps = vec![1i64; d];
        exps.resize(d, 1);
        let q = UnitMono { coeff: RatFun::constant(zeta.clone()), exps };
        t.push(Generator::new(&format!("th{}", d + 1), GenKind::A(lambda), q, 1))?;
    }
    Ok(t)
}

/// Period of the generator `i` of an algebraic tower.
pub fn period(tower: &Tower, i: usize) -> Result<u64> {
    tower.period(i)
}

/// The single-generator tower `sigma(theta) = zeta theta`, `theta^lambda = 1`.
pub fn theta_tower(lambda: u64, zeta: &CycNum) -> Result<Tower> {
    a_chain(lambda, zeta, 1)
}

/// Cyclic polynomials in `theta` modulo `theta^lambda - 1`.
fn cyc_mul(a: &[CycNum], b: &[CycNum]) -> Vec<CycNum> {
    let l = a.len();
    let mut out = vec![CycNum::zero(); l];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[(i + j) % l] = &out[(i + j) % l] + &(x * y);
            }
        }
    }
    out
}

/// Coefficient vectors of `e_0, ..., e_{lambda-1}` in `theta`, where
/// `e_k = prod_{i != lambda-1-k} (theta - zeta^i) / (zeta^{lambda-1-k} - zeta^i)`.
pub fn idempotent_coeffs(lambda: u64, zeta: &CycNum) -> Result<Vec<Vec<CycNum>>> {
    let l = lambda as usize;
    let pw: Vec<CycNum> = (0..l).map(|i| zeta.pow(i as i64)).collect();
    let mut out = Vec::with_capacity(l);
    for k in 0..l {
        let s = l - 1 - k;
        let mut acc = vec![CycNum::zero(); l];
        acc[0] = CycNum::one();
        let mut den = CycNum::one();
        for (i, zi) in pw.iter().enumerate() {
            if i == s {
                continue;
            }
            let mut lin = vec![CycNum::zero(); l];
            lin[0] = -zi.clone();
            if l > 1 {
                lin[1] = &lin[1] + &CycNum::one();
            } else {
                lin[0] = &lin[0] + &CycNum::one();
            }
            acc = cyc_mul(&acc, &lin);
            den = &den * &(&pw[s] - zi);
        }
        let inv = den.inv()?;
        out.push(acc.iter().map(|c| c * &inv).collect());
    }
    Ok(out)
}

fn poly_elem(t: &Tower, theta: usize, coeffs: &[CycNum]) -> TowerElem {
    let mut e = t.zero();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut exps = vec![0i64; t.len()];
        exps[theta] = i as i64;
        e = e.add(&t.monomial(RatFun::constant(c.clone()), &exps));
    }
    e
}

/// `e_0, ..., e_{lambda-1}` as elements of [`theta_tower`].
pub fn idempotents(lambda: u64, zeta: &CycNum) -> Result<(Tower, Vec<TowerElem>)> {
    let t = theta_tower(lambda, zeta)?;
    let es = idempotent_coeffs(lambda, zeta)?.iter().map(|c| poly_elem(&t, 0, c)).collect();
    Ok((t, es))
}

/// Images of an algebraic chain in `Q(zeta_lambda)[theta]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collapse {
    pub lambda: u64,
    pub zeta: CycNum,
    /// Per chain generator, coefficients of its image in `theta^0 .. theta^(lambda-1)`.
    pub images: Vec<Vec<CycNum>>,
}

impl Collapse {
    pub fn image(&self, t: &Tower, theta: usize, d: usize) -> TowerElem {
        poly_elem(t, theta, &self.images[d])
    }
}

/// Collapses an algebraic tower over a root of order `m` onto one generator
/// `theta` with `ev(theta, n) = zeta_lambda^n`, `lambda = lcm(m, periods)`.
pub fn collapse_a_chains(chain: &Tower, m: u64) -> Result<Collapse> {
    let mut lambda = m.max(1);
    for i in 0..chain.len() {
        lambda = lcm_u64(lambda, period(chain, i)?);
    }
    let zeta = CycNum::zeta(lambda);
    let es = idempotent_coeffs(lambda, &zeta)?;
    let l = lambda as usize;
    let mut ev = chain.evaluator();
    let mut images = Vec::with_capacity(chain.len());
    for d in 0..chain.len() {
        let mut img = vec![CycNum::zero(); l];
        for (i, e) in es.iter().enumerate() {
            let f = ev.ev(&chain.var(d), (l - 1 - i) as i64);
            for (a, b) in img.iter_mut().zip(e) {
                *a = &*a + &(&f * b);
            }
        }
        images.push(img);
    }
    Ok(Collapse { lambda, zeta, images })
}

/// The reduced geometric part of a set of products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeoImage {
    /// Order of the root `zeta'` the bases need (1 if none).
    pub lambda_base: u64,
    /// Chain collapse; `None` when no root of unity is needed.
    pub collapse: Option<Collapse>,
    pub hs: Vec<CycNum>,
    /// Longest chain needed per `h_j`.
    pub chain_len: Vec<usize>,
    pub atoms: Vec<CycNum>,
    pub atom_images: Vec<(u64, Vec<i64>)>,
}

impl GeoImage {
    pub fn zeta_order(&self) -> u64 {
        self.collapse.as_ref().map(|c| c.lambda).unwrap_or(0)
    }

    fn atom_index(&self, u: &CycNum) -> usize {
        self.atoms.iter().position(|a| a == u).expect("known atom")
    }

    /// Image of `F(1^d; u)^e` given the positions of `theta` and of the
    /// chain generators `y_{j,d}` in `tower`.
    pub fn image_of(
        &self,
        tower: &Tower,
        theta: Option<usize>,
        y: &dyn Fn(usize, usize) -> usize,
        f: &GeoFactor,
    ) -> TowerElem {
        let (mu, v) = &self.atom_images[self.atom_index(&f.base)];
        let mut out = tower.one();
        if *mu != 0 {
            let c = self.collapse.as_ref().expect("root of unity present");
            let k = (*mu as i64 * f.exp).rem_euclid(self.lambda_base as i64);
            let th = c.image(tower, theta.expect("theta present"), f.depth - 1);
            out = out.mul(&th.pow(k).expect("nonnegative"));
        }
        let mut exps = vec![0i64; tower.len()];
        for (j, &vj) in v.iter().enumerate() {
            if vj != 0 {
                exps[y(j, f.depth)] = vj * f.exp;
            }
        }
        out.mul(&tower.monomial(RatFun::one(), &exps))
    }

    /// Standalone tower `theta, y_{.,1}, y_{.,2}, ...` and the index map.
    pub fn tower(&self) -> Result<(Tower, Option<usize>, BTreeMap<(usize, usize), usize>)> {
        let mut field = self.hs.iter().fold(1, |a, h| lcm_u64(a, h.conductor()));
        let mut t;
        let theta = if let Some(c) = &self.collapse {
            field = lcm_u64(field, c.lambda);
            t = Tower::new(CycField::new(field));
            let q = UnitMono::constant(RatFun::constant(c.zeta.clone()));
            Some(t.push(Generator::new("theta", GenKind::A(c.lambda), q, 1))?)
        } else {
            t = Tower::new(CycField::new(field));
            None
        };
        let mut idx = BTreeMap::new();
        push_geo_chains(&mut t, self, 1, usize::MAX, &mut idx)?;
        Ok((t, theta, idx))
    }
}

/// Pushes `y_{j,d}` for `d` in `from..=to` (where needed) in tower order.
pub fn push_geo_chains(
    t: &mut Tower,
    g: &GeoImage,
    from: usize,
    to: usize,
    idx: &mut BTreeMap<(usize, usize), usize>,
) -> Result<()> {
    let maxd = g.chain_len.iter().copied().max().unwrap_or(0).min(to);
    for d in from..=maxd {
        for (j, h) in g.hs.iter().enumerate() {
            if g.chain_len[j] < d {
                continue;
            }
            let mut exps = vec![0i64; t.len()];
            for dd in 1..d {
                exps[idx[&(j, dd)]] = 1;
            }
            let q = UnitMono { coeff: RatFun::constant(h.clone()), exps };
            let i = t.push(Generator::new(&format!("y{}_{}", j + 1, d), GenKind::P, q, 1))?;
            idx.insert((j, d), i);
        }
    }
    Ok(())
}

/// Reduces geometric factors (lower bounds 1, atomic bases) onto independent
/// chains and one collapsed root of unity.
pub fn reduce_geometric(factors: &[GeoFactor], opts: &GoOptions) -> Result<GeoImage> {
    let mut atoms: Vec<CycNum> = Vec::new();
    let mut maxd: BTreeMap<usize, usize> = BTreeMap::new();
    for f in factors {
        let i = match atoms.iter().position(|a| a == &f.base) {
            Some(i) => i,
            None => {
                atoms.push(f.base.clone());
                atoms.len() - 1
            }
        };
        let e = maxd.entry(i).or_insert(0);
        *e = (*e).max(f.depth);
    }
    let d1 = reduce_depth1(&atoms, opts)?;
    let mut chain_len = vec![0usize; d1.hs.len()];
    let mut theta_depth = 0;
    for (u, (mu, v)) in d1.images.iter().enumerate() {
        let d = maxd[&u];
        if *mu != 0 {
            theta_depth = theta_depth.max(d);
        }
        for (j, &vj) in v.iter().enumerate() {
            if vj != 0 {
                chain_len[j] = chain_len[j].max(d);
            }
        }
    }
    let collapse = if theta_depth > 0 && d1.lambda > 1 {
        let chain = a_chain(d1.lambda, &d1.zeta, theta_depth)?;
        Some(collapse_a_chains(&chain, d1.lambda)?)
    } else {
        None
    };
    Ok(GeoImage { lambda_base: d1.lambda, collapse, hs: d1.hs, chain_len, atoms, atom_images: d1.images })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn q(n: i64) -> CycNum {
        CycNum::from_int(n)
    }

    fn sqrt3() -> CycNum {
        CycNum::sqrt_embed(3).unwrap()
    }

    #[test]
    fn simple_relation() {
        let l = solve_go(&[q(2), q(4)], &GoOptions::default()).unwrap();
        assert_eq!(l.basis, vec![vec![2, -1]]);
        assert!(l.cofactors[0].is_one());
    }

    #[test]
    fn mixed_bases() {
        let alphas = [q(-1), sqrt3(), q(2), q(3), q(5), q(25)];
        let l = solve_go(&alphas, &GoOptions::default()).unwrap();
        assert_eq!(l.rank(), 3);
        for (v, c) in l.basis.iter().zip(&l.cofactors) {
            assert_eq!(&power_product(&alphas, v).unwrap(), c);
        }
        let strict = l.strict_basis();
        assert_eq!(strict.len(), 3);
        for v in &strict {
            assert!(power_product(&alphas, v).unwrap().is_one());
        }
    }

    #[test]
    fn general_path_verifies() {
        let o = GoOptions::default();
        let l = solve_general(&[sqrt3(), q(3)], &o).unwrap();
        assert_eq!(l.basis, vec![vec![2, -1]]);
        let l = solve_general(&[q(25), q(5)], &o).unwrap();
        assert_eq!(l.basis, vec![vec![1, -2]]);
        let l = solve_general(&[q(2), q(3), q(5)], &o).unwrap();
        assert_eq!(l.rank(), 0);
        let i = CycNum::zeta(4);
        let l = solve_general(&[i.clone(), q(2)], &o).unwrap();
        assert_eq!(l.basis, vec![vec![1, 0]]);
    }

    #[test]
    fn non_torsion_unit_modulus_is_reported() {
        let i = CycNum::zeta(4);
        let a = (&(&i * &q(4)) + &q(3)).scale(&rat(1, 5));
        assert!(matches!(solve_general(&[a], &GoOptions::default()), Err(Error::RelationSearchExhausted)));
    }

    #[test]
    fn depth1_running_bases() {
        let bases = [q(-1), q(2), q(3), q(5), sqrt3()];
        let d = reduce_depth1(&bases, &GoOptions::default()).unwrap();
        assert_eq!(d.lambda, 2);
        assert_eq!(d.hs, vec![sqrt3(), q(2), q(5)]);
        assert_eq!(d.images[0], (1, vec![0, 0, 0]));
        assert_eq!(d.images[2], (0, vec![2, 0, 0]));
        let d = reduce_depth1(&[q(1)], &GoOptions::default()).unwrap();
        assert!(d.hs.is_empty() && d.images[0] == (0, vec![]));
        let d = reduce_depth1(&[q(4)], &GoOptions::default()).unwrap();
        assert_eq!(d.hs.len(), 1);
    }

    #[test]
    fn chain_periods_and_collapse() {
        let t = a_chain(2, &q(-1), 2).unwrap();
        assert_eq!(period(&t, 0).unwrap(), 2);
        assert_eq!(period(&t, 1).unwrap(), 4);
        let c = collapse_a_chains(&t, 2).unwrap();
        assert_eq!(c.lambda, 4);
        let i = CycNum::zeta(4);
        // theta1 -> theta^2, theta2 -> (1-i)/2 theta (theta^2 + i)
        assert_eq!(c.images[0], vec![q(0), q(0), q(1), q(0)]);
        let h = (&q(1) - &i).scale(&rat(1, 2));
        assert_eq!(c.images[1], vec![q(0), &h * &i, q(0), h]);
    }

    #[test]
    fn idempotents_order4() {
        let i = CycNum::zeta(4);
        let es = idempotent_coeffs(4, &i).unwrap();
        let quarter = |c: CycNum| c.scale(&rat(1, 4));
        // i/4 (t^3 + i t^2 - t - i) is 1 at t = i, i.e. at n = 1 mod 4, so it
        // is e2 under the rule `e_k(n) = 1 iff 4 | n + k + 1`; e0 is its conjugate
        let at_i = vec![quarter(q(1)), quarter(-i.clone()), quarter(-q(1)), quarter(i.clone())];
        assert_eq!(es[2], at_i);
        let conj: Vec<CycNum> = at_i.iter().map(|c| c.conj(3)).collect();
        assert_eq!(es[0], conj);
        let e1 = vec![quarter(q(1)), quarter(q(-1)), quarter(q(1)), quarter(q(-1))];
        assert_eq!(es[1], e1);
        let e3 = vec![quarter(q(1)); 4];
        assert_eq!(es[3], e3);
    }

    #[test]
    fn geometric_independent_chains() {
        let fs = vec![
            GeoFactor { depth: 1, base: q(2), exp: 1 },
            GeoFactor { depth: 2, base: q(3), exp: -1 },
        ];
        let g = reduce_geometric(&fs, &GoOptions::default()).unwrap();
        assert!(g.collapse.is_none());
        assert_eq!(g.chain_len, vec![1, 2]);
        let (t, theta, idx) = g.tower().unwrap();
        assert!(theta.is_none());
        assert_eq!(t.len(), 3);
        let mut ev = t.evaluator();
        for f in &fs {
            let img = g.image_of(&t, theta, &|j, d| idx[&(j, d)], f);
            for n in 0..20 {
                assert_eq!(ev.ev(&img, n), f.eval(n));
            }
        }
    }
}
