//! Dense polynomials over `Z/p` for small odd primes (ascending, trimmed).

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigUint;
use num_traits::One;

pub type PolyP = Vec<u64>;

pub fn trim(mut a: PolyP) -> PolyP {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn inv(a: u64, p: u64) -> u64 {
    powu(a, p - 2, p)
}

fn powu(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

pub fn sub(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    let n = a.len().max(b.len());
    let mut r = vec![0; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        r[i] = (x + p - y) % p;
    }
    trim(r)
}

pub fn mul(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + mulm(x, y, p)) % p;
        }
    }
    trim(r)
}

pub fn divrem(a: &PolyP, b: &PolyP, p: u64) -> (PolyP, PolyP) {
    assert!(!b.is_empty(), "division by zero polynomial mod p");
    let mut r = a.clone();
    if r.len() < b.len() {
        return (Vec::new(), trim(r));
    }
    let db = b.len() - 1;
    let li = inv(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = mulm(r[i + db], li, p);
        if c != 0 {
            for j in 0..=db {
                r[i + j] = (r[i + j] + p - mulm(c, b[j], p)) % p;
            }
        }
        q[i] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn rem(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    divrem(a, b, p).1
}

pub fn monic(a: &PolyP, p: u64) -> PolyP {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let li = inv(l, p);
            a.iter().map(|&x| mulm(x, li, p)).collect()
        }
    }
}

pub fn gcd(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

/// Returns `(g, s, t)` with `s a + t b = g`, `g` monic.
pub fn xgcd(a: &PolyP, b: &PolyP, p: u64) -> (PolyP, PolyP, PolyP) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (PolyP, PolyP) = (vec![1], Vec::new());
    let (mut t0, mut t1): (PolyP, PolyP) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    let li = inv(*r0.last().unwrap(), p);
    let sc = |v: &PolyP| trim(v.iter().map(|&x| mulm(x, li, p)).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

pub fn derivative(a: &PolyP, p: u64) -> PolyP {
    trim(a.iter().enumerate().skip(1).map(|(i, &x)| mulm(x, i as u64 % p, p)).collect())
}

pub fn powmod(base: &PolyP, e: &BigUint, m: &PolyP, p: u64) -> PolyP {
    let mut r: PolyP = vec![1];
    let b = rem(base, m, p);
    let bits = e.bits();
    for i in (0..bits).rev() {
        r = rem(&mul(&r, &r, p), m, p);
        if e.bit(i) {
            r = rem(&mul(&r, &b, p), m, p);
        }
    }
    r
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn ddf(f: &PolyP, p: u64) -> Vec<(PolyP, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: PolyP = vec![0, 1];
    let mut h = x.clone();
    let pb = BigUint::from(p);
    let mut d = 1;
    while f.len() - 1 >= 2 * d {
        h = powmod(&h, &pb, &f, p);
        let g = gcd(&sub(&h, &x, p), &f, p);
        if g.len() > 1 {
            out.push((g.clone(), d));
            f = divrem(&f, &g, p).0;
            h = rem(&h, &f, p);
        }
        d += 1;
    }
    if f.len() > 1 {
        let deg = f.len() - 1;
        out.push((f, deg));
    }
    out
}

/// Equal-degree splitting (Cantor-Zassenhaus) with a deterministic generator.
fn edf(f: &PolyP, d: usize, p: u64, seed: &mut u64) -> Vec<PolyP> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) >> 1;
    loop {
        let a: PolyP = trim(
            (0..n)
                .map(|_| {
                    *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    (*seed >> 33) % p
                })
                .collect(),
        );
        if a.len() < 2 {
            continue;
        }
        let b = sub(&powmod(&a, &e, f, p), &vec![1], p);
        let g = gcd(&b, f, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = divrem(f, &g, p).0;
            let mut out = edf(&g, d, p, seed);
            out.extend(edf(&monic(&h, p), d, p, seed));
            return out;
        }
    }
}

/// Monic irreducible factors of a monic squarefree polynomial mod `p`.
pub fn factor_squarefree(f: &PolyP, p: u64) -> Vec<PolyP> {
    let mut seed = 0x9E3779B97F4A7C15u64 ^ p;
    let mut out = Vec::new();
    for (g, d) in ddf(f, p) {
        out.extend(edf(&g, d, p, &mut seed));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_mod7() {
        // x^4 - 1 = (x-1)(x+1)(x^2+1) mod 7
        let f = vec![6, 0, 0, 0, 1];
        let fs = factor_squarefree(&f, 7);
        assert_eq!(fs.len(), 3);
        let mut prod: PolyP = vec![1];
        for g in &fs {
            prod = mul(&prod, g, 7);
        }
        assert_eq!(prod, f);
    }
}
