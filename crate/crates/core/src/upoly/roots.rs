use super::Poly;
use crate::arith::{BigRat, CycField, CycNum};
use crate::error::{Error, Result};
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// `res_x(a, b)` by the Euclidean recurrence.
pub fn resultant(a: &Poly, b: &Poly) -> CycNum {
    if a.is_zero() || b.is_zero() {
        return CycNum::zero();
    }
    let mut a = a.clone();
    let mut b = b.clone();
    let mut acc = CycNum::one();
    loop {
        let da = a.deg();
        let db = b.deg();
        if db == 0 {
            return &acc * &b.lead().pow(da as i64);
        }
        if da == 0 {
            return &acc * &a.lead().pow(db as i64);
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return CycNum::zero();
        }
        let dr = r.deg();
        // res(a, b) = (-1)^(da db) lc(b)^(da - dr) res(b, r)
        let mut f = b.lead().pow((da - dr) as i64);
        if (da * db) % 2 == 1 {
            f = -f;
        }
        acc = &acc * &f;
        a = b;
        b = r;
    }
}

/// `p(z) = res_x(f(x), h(x + z))`, by evaluation at `z = 0..=deg f * deg h`
/// and Newton interpolation.
pub fn resultant_shift(f: &Poly, h: &Poly) -> Poly {
    let d = f.deg() * h.deg();
    let xs: Vec<CycNum> = (0..=d as i64).map(CycNum::from_int).collect();
    let ys: Vec<CycNum> = (0..=d as i64).map(|z| resultant(f, &h.shift(z))).collect();
    interpolate(&xs, &ys)
}

fn interpolate(xs: &[CycNum], ys: &[CycNum]) -> Poly {
    let n = xs.len();
    let mut dd: Vec<CycNum> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = &xs[i] - &xs[i - j];
            dd[i] = num.div(&den).expect("distinct nodes");
        }
    }
    let mut p = Poly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        p = p.mul(&Poly::linear(-&xs[i])).add(&Poly::constant(dd[i].clone()));
    }
    p
}

/// All integer roots of `p`, sorted ascending.
pub fn integer_roots(p: &Poly) -> Result<Vec<i64>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    // an integer is a root iff it is a common root of the rational coordinate polynomials
    let field = CycField::new(p.conductor());
    let mut g = Poly::zero();
    for c in p.components(&field) {
        g = g.gcd(&c);
    }
    if g.is_constant() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut a = g.to_integer_coeffs();
    let mut shift = 0;
    while a[0].is_zero() {
        a.remove(0);
        shift += 1;
    }
    if shift > 0 {
        out.push(0);
    }
    if a.len() > 1 {
        let lead = a.last().unwrap().abs();
        let maxc = a[..a.len() - 1].iter().map(|c| c.abs()).max().unwrap();
        // Cauchy bound
        let bound = BigInt::from(1) + maxc.div_ceil(&lead);
        let cands: Vec<i64> = match bound.to_i64() {
            Some(b) if b <= 4000 => (1..=b).flat_map(|k| [k, -k]).collect(),
            _ => divisor_candidates(&a[0]),
        };
        let gr = Poly::new(a.iter().map(|c| CycNum::from_rat(BigRat::from_integer(c.clone()))).collect());
        for k in cands {
            if gr.eval_int(k).is_zero() {
                out.push(k);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn divisor_candidates(c: &BigInt) -> Vec<i64> {
    let mut divs: Vec<BigInt> = alloc::vec![BigInt::from(1)];
    for (p, e) in crate::arith::intfac::factor(c) {
        let mut next = Vec::new();
        for d in &divs {
            let mut m = d.clone();
            for _ in 0..=e {
                next.push(m.clone());
                m *= &p;
            }
        }
        divs = next;
    }
    divs.iter().filter_map(|d| d.to_i64()).flat_map(|k| [k, -k]).collect()
}

/// `max{k >= 0 : p(k) = 0} + 1`, and `0` if there is no such root.
pub fn z_function(p: &Poly) -> Result<i64> {
    let r = integer_roots(p)?;
    Ok(r.into_iter().filter(|&k| k >= 0).max().map(|k| k + 1).unwrap_or(0))
}
