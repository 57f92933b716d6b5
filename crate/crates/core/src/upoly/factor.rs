//! Factorization over `Q` (Zassenhaus with Hensel lifting) and over
//! `Q(zeta_N)` (Trager's norm method).

use super::modp::{self, PolyP};
use super::{canonical_cmp, Poly, RatFun};
use crate::arith::{BigRat, CycField, CycNum};
use crate::error::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `content * prod f_i^{e_i}` with monic irreducible, pairwise distinct `f_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: CycNum,
    pub factors: Vec<(Poly, i64)>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self) -> RatFun {
        let mut acc = RatFun::constant(self.content.clone());
        for (f, e) in &self.factors {
            acc = acc.mul(&RatFun::from_poly(f.clone()).pow(*e).expect("nonzero factor"));
        }
        acc
    }
}

/// Squarefree decomposition (Yun): monic `a_i` with `f = lc * prod a_i^i`.
pub fn squarefree(f: &Poly) -> Vec<(Poly, u32)> {
    let f = f.monic();
    if f.deg() == 0 {
        return Vec::new();
    }
    let d = f.derivative();
    let a0 = f.gcd(&d);
    let mut b = f.div_exact(&a0);
    let mut c = d.div_exact(&a0);
    let mut dd = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while b.deg() > 0 {
        let a = b.gcd(&dd);
        b = b.div_exact(&a);
        c = dd.div_exact(&a);
        dd = c.sub(&b.derivative());
        if a.deg() > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

fn canonical_field(n: u64) -> CycField {
    CycField::new(if n % 4 == 2 { n / 2 } else { n })
}

/// Complete factorization of a polynomial over `Q(zeta_N)` (`N` is widened to
/// contain the coefficients).  Returns the leading coefficient and the monic
/// irreducible factors with multiplicities, in canonical order.
pub fn factor_poly(f: &Poly, field: &CycField) -> Result<(CycNum, Vec<(Poly, u32)>)> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let field = canonical_field(crate::arith::lcm_u64(field.conductor(), f.conductor()));
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (a, e) in squarefree(f) {
        for g in factor_squarefree_over(&a, &field) {
            out.push((g, e));
        }
    }
    out.sort_by(|x, y| canonical_cmp(&x.0, &y.0));
    Ok((f.lead(), out))
}

/// Factorization of a nonzero rational function; denominator factors carry
/// negative exponents.
pub fn factorize(f: &RatFun, field: &CycField) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (c, nf) = factor_poly(f.num(), field)?;
    let (_, df) = factor_poly(f.den(), field)?;
    let mut factors: Vec<(Poly, i64)> = nf.into_iter().map(|(p, e)| (p, e as i64)).collect();
    factors.extend(df.into_iter().map(|(p, e)| (p, -(e as i64))));
    factors.sort_by(|x, y| canonical_cmp(&x.0, &y.0));
    Ok(Factorization { content: c, factors })
}

fn factor_squarefree_over(f: &Poly, field: &CycField) -> Vec<Poly> {
    if f.deg() <= 1 {
        return vec![f.monic()];
    }
    let rational: Vec<Poly> = if f.is_rational() { factor_rational(f) } else { vec![f.monic()] };
    if field.degree() == 1 {
        return rational;
    }
    let mut out = Vec::new();
    for g in rational {
        out.extend(trager(&g, field));
    }
    out
}

/// Monic irreducible factors over `Q` of a squarefree rational polynomial.
pub fn factor_rational(f: &Poly) -> Vec<Poly> {
    if f.deg() <= 1 {
        return vec![f.monic()];
    }
    let z = primitive(&f.to_integer_coeffs());
    zassenhaus(&z).into_iter().map(|g| int_to_monic(&g)).collect()
}

fn int_to_monic(g: &[BigInt]) -> Poly {
    Poly::new(g.iter().map(|c| CycNum::from_rat(BigRat::from_integer(c.clone()))).collect()).monic()
}

fn primitive(a: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for c in a {
        g = g.gcd(c);
    }
    if a.last().map(|c| c.is_negative()).unwrap_or(false) {
        g = -g;
    }
    a.iter().map(|c| c / &g).collect()
}

fn trim_z(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.last().map(|c| c.is_zero()).unwrap_or(false) {
        a.pop();
    }
    a
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim_z(r)
}

fn zmod(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    trim_z(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m >> 1;
    trim_z(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn to_p(a: &[BigInt], p: u64) -> PolyP {
    let bp = BigInt::from(p);
    modp::trim(a.iter().map(|c| c.mod_floor(&bp).to_u64().unwrap()).collect())
}

fn from_p(a: &PolyP) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// `a / b` over `Z` if it is exact.
fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return if r.is_empty() { Some(Vec::new()) } else { None };
    }
    let db = b.len() - 1;
    let lb = &b[db];
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let (c, rm) = r[i + db].div_rem(lb);
        if !rm.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for j in 0..=db {
                r[i + j] -= &c * &b[j];
            }
        }
        q[i] = c;
    }
    if r.iter().all(|c| c.is_zero()) {
        Some(trim_z(q))
    } else {
        None
    }
}

const PRIMES: [u64; 40] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107,
    109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
];

/// Irreducible factors over `Z` of a primitive squarefree polynomial with
/// positive leading coefficient.
fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f[n].clone();
    let mut best: Option<(u64, Vec<PolyP>)> = None;
    let mut good = 0;
    for &p in PRIMES.iter() {
        if (&lc % p).is_zero() {
            continue;
        }
        let fp = to_p(f, p);
        let g = modp::gcd(&fp, &modp::derivative(&fp, p), p);
        if g.len() != 1 {
            continue;
        }
        let fs = modp::factor_squarefree(&modp::monic(&fp, p), p);
        if best.as_ref().map(|b| fs.len() < b.1.len()).unwrap_or(true) {
            best = Some((p, fs));
        }
        good += 1;
        if good >= 6 {
            break;
        }
    }
    let (p, fs) = best.expect("some prime keeps the polynomial squarefree");
    if fs.len() == 1 {
        return vec![f.to_vec()];
    }
    // coefficient bound for factors, times the leading coefficient
    let maxc = f.iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt = lc.abs() * (BigInt::one() << n) * BigInt::from(n + 1) * maxc;
    let bp = BigInt::from(p);
    let mut k = 1u32;
    let mut m = bp.clone();
    while m <= &bound * 2 {
        m *= &bp;
        k += 1;
    }
    let lifted = hensel_multi(f, &fs, p, k, &m);
    recombine(f, lifted, &m)
}

/// Lifts the monic modular factors of `f` to monic factors mod `p^k`.
fn hensel_multi(f: &[BigInt], fs: &[PolyP], p: u64, k: u32, m: &BigInt) -> Vec<Vec<BigInt>> {
    let lc_inv = mod_inverse(f.last().unwrap(), m);
    let mut target = zmod(&f.iter().map(|c| c * &lc_inv).collect::<Vec<_>>(), m);
    let mut out = Vec::new();
    for i in 0..fs.len() - 1 {
        let mut h: PolyP = vec![1];
        for r in &fs[i + 1..] {
            h = modp::mul(&h, r, p);
        }
        let (gl, hl) = hensel_pair(&target, &fs[i], &h, p, k);
        out.push(gl);
        target = hl;
    }
    out.push(target);
    out
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

fn add_p(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    let n = a.len().max(b.len());
    modp::trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

/// `a + s * d`.
fn add_scaled(a: &[BigInt], d: &PolyP, s: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(d.len());
    trim_z(
        (0..n)
            .map(|i| {
                a.get(i).cloned().unwrap_or_default() + s * BigInt::from(d.get(i).copied().unwrap_or(0))
            })
            .collect(),
    )
}

/// Linear Hensel lifting of `t = g h (mod p)` to `t = G H (mod p^k)`, all monic.
fn hensel_pair(t: &[BigInt], g: &PolyP, h: &PolyP, p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let (_, s, tt) = modp::xgcd(g, h, p);
    let bp = BigInt::from(p);
    let mut gg = from_p(g);
    let mut hh = from_p(h);
    let mut pk = bp.clone();
    for _ in 1..k {
        let prod = zmul(&gg, &hh);
        let n = t.len().max(prod.len());
        let e: Vec<BigInt> = (0..n)
            .map(|i| {
                let d = t.get(i).cloned().unwrap_or_default() - prod.get(i).cloned().unwrap_or_default();
                debug_assert!((&d % &pk).is_zero());
                d / &pk
            })
            .collect();
        let ep = to_p(&e, p);
        if !ep.is_empty() {
            // g dH + h dG = e  with  dH = e s mod h,  dG = e t + q g
            let (q, dh) = modp::divrem(&modp::mul(&ep, &s, p), h, p);
            let dg = add_p(&modp::mul(&ep, &tt, p), &modp::mul(&q, g, p), p);
            gg = add_scaled(&gg, &dg, &pk);
            hh = add_scaled(&hh, &dh, &pk);
        }
        pk *= &bp;
    }
    (zmod(&gg, &pk), zmod(&hh, &pk))
}

/// Subset recombination of lifted factors into true factors over `Z`.
fn recombine(f: &[BigInt], lifted: Vec<Vec<BigInt>>, m: &BigInt) -> Vec<Vec<BigInt>> {
    let mut f = f.to_vec();
    let mut rest: Vec<Vec<BigInt>> = lifted;
    let mut out = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= rest.len() {
        let r = rest.len();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let lc = f.last().unwrap().clone();
            let mut cand = vec![lc];
            for &i in &idx {
                cand = zmod(&zmul(&cand, &rest[i]), m);
            }
            let cand = primitive(&symmetric(&cand, m));
            if let Some(q) = zdiv_exact(&f, &cand) {
                out.push(cand);
                f = q;
                let mut keep = Vec::new();
                for (i, g) in rest.into_iter().enumerate() {
                    if !idx.contains(&i) {
                        keep.push(g);
                    }
                }
                rest = keep;
                continue 'outer;
            }
            // next combination
            let mut j = size;
            loop {
                if j == 0 {
                    size += 1;
                    continue 'outer;
                }
                j -= 1;
                if idx[j] < r - size + j {
                    idx[j] += 1;
                    for l in j + 1..size {
                        idx[l] = idx[l - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    let f = primitive(&f);
    if f.len() > 1 {
        out.push(f);
    }
    out
}

/// Factors a monic squarefree polynomial that is irreducible over `Q(zeta_M)`,
/// `M | N`, further over `Q(zeta_N)`.
fn trager(f: &Poly, field: &CycField) -> Vec<Poly> {
    if f.deg() <= 1 {
        return vec![f.monic()];
    }
    let alpha = CycNum::zeta(field.conductor());
    let gal = field.galois_indices();
    let mut s: i64 = 0;
    let (g, norm) = loop {
        let shift = alpha.scale(&BigRat::from_integer(BigInt::from(-s)));
        let g = f.shift_by(&shift);
        let mut norm = Poly::one();
        for &k in &gal {
            norm = norm.mul(&g.conj(k));
        }
        debug_assert!(norm.is_rational());
        if norm.gcd(&norm.derivative()).deg() == 0 {
            break (g, norm);
        }
        s = if s > 0 { -s } else { -s + 1 };
    };
    let parts = factor_rational(&norm);
    if parts.len() == 1 {
        return vec![f.monic()];
    }
    let back = alpha.scale(&BigRat::from_integer(BigInt::from(s)));
    let mut out = Vec::new();
    for nf in parts {
        let h = g.gcd(&nf);
        if h.deg() > 0 {
            out.push(h.shift_by(&back));
        }
    }
    out
}
