//! Integer factorization: trial division, then Miller-Rabin and Pollard rho.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const SMALL: u64 = 1 << 12;

/// Prime factorization of `|n|`, `n != 0`, sorted by prime.
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(!n.is_zero());
    let mut n = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let mut p = 2u64;
    while p < SMALL {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        let mut big = Vec::new();
        split(&n, &mut big);
        big.sort();
        for q in big {
            match out.last_mut() {
                Some((r, e)) if *r == q => *e += 1,
                _ => out.push((q, 1)),
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn split(n: &BigInt, out: &mut Vec<BigInt>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(n) {
        out.push(n.clone());
        return;
    }
    let mut c = 1u64;
    loop {
        if let Some(d) = rho(n, c) {
            split(&d, out);
            split(&(n / &d), out);
            return;
        }
        c += 1;
    }
}

fn rho(n: &BigInt, c: u64) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    let c = BigInt::from(c);
    let f = |x: &BigInt| (x * x + &c) % n;
    let mut x = BigInt::from(2);
    let mut y = x.clone();
    let mut d = BigInt::one();
    let mut steps = 0u64;
    while d.is_one() {
        x = f(&x);
        y = f(&f(&y));
        d = (&x - &y).abs().gcd(n);
        steps += 1;
        if steps > 1 << 22 {
            return None;
        }
    }
    if &d == n {
        None
    } else {
        Some(d)
    }
}

pub fn is_probable_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let bp = BigInt::from(p);
        if n == &bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Convenience for tests and small inputs.
pub fn factor_i64(n: i64) -> Vec<(i64, u32)> {
    factor(&BigInt::from(n)).into_iter().map(|(p, e)| (p.to_i64().unwrap(), e)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small() {
        assert_eq!(factor_i64(360), alloc::vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_i64(-97), alloc::vec![(97, 1)]);
        assert_eq!(factor_i64(1), alloc::vec![]);
    }

    #[test]
    fn large_semiprime() {
        let p = BigInt::from(1_000_000_007u64);
        let q = BigInt::from(998_244_353u64);
        let f = factor(&(&p * &q * 4));
        assert_eq!(f, alloc::vec![(BigInt::from(2), 2), (q, 1), (p, 1)]);
    }
}
