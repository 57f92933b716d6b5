//! Fixed-point complex embeddings `zeta_N -> e^{2 pi i k / N}` at arbitrary precision.

use super::{BigRat, CycNum};
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A real number `v / 2^p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed {
    pub v: BigInt,
    pub p: u32,
}

impl Fixed {
    pub fn zero(p: u32) -> Fixed {
        Fixed { v: BigInt::zero(), p }
    }

    pub fn from_int(n: i64, p: u32) -> Fixed {
        Fixed { v: BigInt::from(n) << p, p }
    }

    pub fn from_rat(q: &BigRat, p: u32) -> Fixed {
        Fixed { v: (q.numer() << p) / q.denom(), p }
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed { v: &self.v + &o.v, p: self.p }
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed { v: &self.v - &o.v, p: self.p }
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed { v: (&self.v * &o.v) >> self.p, p: self.p }
    }

    pub fn div(&self, o: &Fixed) -> Fixed {
        Fixed { v: (&self.v << self.p) / &o.v, p: self.p }
    }

    pub fn mul_int(&self, n: i64) -> Fixed {
        Fixed { v: &self.v * n, p: self.p }
    }

    pub fn div_int(&self, n: i64) -> Fixed {
        Fixed { v: &self.v / n, p: self.p }
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative()
    }

    pub fn abs(&self) -> Fixed {
        Fixed { v: self.v.abs(), p: self.p }
    }

    pub fn sqrt(&self) -> Fixed {
        Fixed { v: (&self.v << self.p).sqrt(), p: self.p }
    }

    /// Drops to `q <= p` bits.
    pub fn with_prec(&self, q: u32) -> Fixed {
        if q >= self.p {
            Fixed { v: &self.v << (q - self.p), p: q }
        } else {
            Fixed { v: &self.v >> (self.p - q), p: q }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let shift = self.p.saturating_sub(60);
        let v = (&self.v >> shift).to_f64().unwrap_or(f64::NAN);
        let mut s = 1.0f64;
        for _ in 0..(self.p - shift) {
            s *= 2.0;
        }
        v / s
    }
}

/// `sum_{k>=0} (-1)^k x^{2k+1}/(2k+1)` for small `x = 1/m`.
fn atan_inv(m: i64, p: u32) -> Fixed {
    let mut term = (BigInt::one() << p) / m;
    let m2 = m * m;
    let mut sum = term.clone();
    let mut k: i64 = 1;
    while !term.is_zero() {
        term /= m2;
        let t = &term / (2 * k + 1);
        if k % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        k += 1;
    }
    Fixed { v: sum, p }
}

pub fn pi(p: u32) -> Fixed {
    let g = p + 16;
    let a = atan_inv(5, g).mul_int(16);
    let b = atan_inv(239, g).mul_int(4);
    a.sub(&b).with_prec(p)
}

/// `(cos t, sin t)` for `t = 2 pi num / den`.
pub fn cos_sin_frac(num: i64, den: i64, p: u32) -> (Fixed, Fixed) {
    let g = p + 24;
    let mut r = num.rem_euclid(den);
    // map to (-1/2, 1/2] turns
    if 2 * r > den {
        r -= den;
    }
    let t = pi(g).mul_int(2 * r).div_int(den);
    // Taylor series, |t| <= pi
    let mut c = Fixed::from_int(1, g);
    let mut s = t.clone();
    let t2 = t.mul(&t);
    let mut term_c = Fixed::from_int(1, g);
    let mut term_s = t.clone();
    let mut k: i64 = 1;
    loop {
        term_c = term_c.mul(&t2).div_int((2 * k - 1) * (2 * k));
        term_s = term_s.mul(&t2).div_int((2 * k) * (2 * k + 1));
        if term_c.v.is_zero() && term_s.v.is_zero() {
            break;
        }
        if k % 2 == 1 {
            c = c.sub(&term_c);
            s = s.sub(&term_s);
        } else {
            c = c.add(&term_c);
            s = s.add(&term_s);
        }
        k += 1;
    }
    (c.with_prec(p), s.with_prec(p))
}

/// `2 atanh(z) = ln((1+z)/(1-z))` for `|z| <= 1/3`.
fn two_atanh(z: &Fixed) -> Fixed {
    let z2 = z.mul(z);
    let mut pow = z.clone();
    let mut sum = z.clone();
    let mut k: i64 = 1;
    loop {
        pow = pow.mul(&z2);
        let t = pow.div_int(2 * k + 1);
        if t.v.is_zero() {
            break;
        }
        sum = sum.add(&t);
        k += 1;
    }
    sum.mul_int(2)
}

/// Natural logarithm of a positive fixed-point number.
pub fn ln(x: &Fixed) -> Fixed {
    assert!(x.v.is_positive(), "ln of non-positive value");
    let p = x.p;
    let g = p + 24;
    let xv = x.with_prec(g);
    // x = m * 2^e with m in [1, 2)
    let bits = xv.v.bits() as i64;
    let e = bits - 1 - g as i64;
    let m = if e >= 0 { Fixed { v: &xv.v >> (e as u64), p: g } } else { Fixed { v: &xv.v << ((-e) as u64), p: g } };
    let one = Fixed::from_int(1, g);
    let z = m.sub(&one).div(&m.add(&one));
    let ln_m = two_atanh(&z);
    let third = Fixed::from_int(1, g).div_int(3);
    let ln2 = two_atanh(&third);
    ln_m.add(&ln2.mul_int(e)).with_prec(p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub re: Fixed,
    pub im: Fixed,
}

impl Complex {
    pub fn abs2(&self) -> Fixed {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        Complex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// Value of `a` under `zeta_N -> e^{2 pi i k / N}`.
pub fn embed_conj(a: &CycNum, k: u64, prec: u32) -> Complex {
    let g = prec + 32;
    let n = a.conductor() as i64;
    let mut re = Fixed::zero(g);
    let mut im = Fixed::zero(g);
    for (j, cj) in a.coeffs().iter().enumerate() {
        if cj.is_zero() {
            continue;
        }
        let q = Fixed::from_rat(cj, g);
        if j == 0 {
            re = re.add(&q);
            continue;
        }
        let (c, s) = cos_sin_frac(j as i64 * k as i64, n, g);
        re = re.add(&q.mul(&c));
        im = im.add(&q.mul(&s));
    }
    Complex { re: re.with_prec(prec), im: im.with_prec(prec) }
}

/// The standard embedding `zeta_N -> e^{2 pi i / N}`.
pub fn embed(a: &CycNum, prec: u32) -> Complex {
    embed_conj(a, 1, prec)
}

/// One value per Galois index `k` coprime to `N`.
pub fn embed_conjugates(a: &CycNum, prec: u32) -> Vec<(u64, Complex)> {
    a.field().galois_indices().into_iter().map(|k| (k, embed_conj(a, k, prec))).collect()
}

/// `ln |a|` at the conjugate `k`; `a` must be nonzero.
pub fn log_abs_conj(a: &CycNum, k: u64, prec: u32) -> Fixed {
    let g = prec + 32;
    let z = embed_conj(a, k, g);
    ln(&z.abs2()).div_int(2).with_prec(prec)
}
