use super::{divisors, gcd_u64, lcm_u64, BigRat};
use crate::error::{Error, Result};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `Q(zeta_N)` together with its minimal polynomial `Phi_N`.
#[derive(Clone, Debug)]
pub struct CycField {
    n: u64,
    phi: Arc<Vec<i64>>,
}

impl PartialEq for CycField {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}
impl Eq for CycField {}

impl CycField {
    pub fn new(n: u64) -> CycField {
        assert!(n >= 1, "conductor must be positive");
        CycField { n, phi: Arc::new(cyclotomic_poly(n)) }
    }

    pub fn rationals() -> CycField {
        CycField::new(1)
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Coefficients of `Phi_N`, ascending, monic.
    pub fn min_poly(&self) -> &[i64] {
        &self.phi
    }

    /// `zeta^e` reduced to the power basis, for `0 <= e < N`.
    fn zeta_powers(&self) -> Vec<Vec<i64>> {
        let d = self.degree();
        let n = self.n as usize;
        let mut out = Vec::with_capacity(n.max(1));
        let mut cur = vec![0i64; d];
        cur[0] = 1;
        for _ in 0..n.max(1) {
            out.push(cur.clone());
            // multiply by zeta
            let top = cur[d - 1];
            for i in (1..d).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..d {
                    cur[i] -= top * self.phi[i];
                }
            }
        }
        out
    }

    /// Units of `Z/N`, i.e. the Galois indices.
    pub fn galois_indices(&self) -> Vec<u64> {
        if self.n == 1 {
            return vec![1];
        }
        (1..self.n).filter(|&k| gcd_u64(k, self.n) == 1).collect()
    }
}

fn mobius(mut n: u64) -> i32 {
    let mut r = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            r = -r;
        }
        p += 1;
    }
    if n > 1 {
        r = -r;
    }
    r
}

/// `Phi_n` via the Moebius product of `x^d - 1`.
pub(crate) fn cyclotomic_poly(n: u64) -> Vec<i64> {
    let mut num: Vec<i128> = vec![1];
    let mut den: Vec<i128> = vec![1];
    for d in divisors(n) {
        let m = mobius(n / d);
        if m == 0 {
            continue;
        }
        let mut f = vec![0i128; d as usize + 1];
        f[0] = -1;
        f[d as usize] = 1;
        if m == 1 {
            num = mul_i(&num, &f);
        } else {
            den = mul_i(&den, &f);
        }
    }
    // exact division by the monic den
    let dd = den.len() - 1;
    let mut rem = num;
    let ql = rem.len() - dd;
    let mut q = vec![0i128; ql];
    for i in (0..ql).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for j in 0..=dd {
                rem[i + j] -= c * den[j];
            }
        }
    }
    q.into_iter().map(|c| c as i64).collect()
}

fn mul_i(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut r = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r
}

/// Element of a cyclotomic field, dense in the power basis.
///
/// Results of arithmetic are kept in the smallest cyclotomic field that
/// contains them (conductor never `2 mod 4`), so structural comparison of
/// results is meaningful.  `lift_to` is the one operation that deliberately
/// returns a non-minimal representation.
#[derive(Clone, Debug)]
pub struct CycNum {
    f: CycField,
    c: Vec<BigRat>,
}

impl CycNum {
    pub fn from_rat(q: BigRat) -> CycNum {
        CycNum { f: CycField::rationals(), c: vec![q] }
    }

    pub fn from_int(n: i64) -> CycNum {
        CycNum::from_rat(BigRat::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> CycNum {
        CycNum::from_rat(BigRat::from_integer(n))
    }

    pub fn zero() -> CycNum {
        CycNum::from_int(0)
    }

    pub fn one() -> CycNum {
        CycNum::from_int(1)
    }

    /// Builds an element from power-basis coordinates; reduces and canonicalizes.
    pub fn from_coeffs(field: &CycField, coeffs: Vec<BigRat>) -> CycNum {
        let c = reduce(field, coeffs);
        CycNum { f: field.clone(), c }.canonical()
    }

    /// The primitive root `e^{2 pi i / n}`.
    pub fn zeta(n: u64) -> CycNum {
        assert!(n >= 1);
        if n == 1 {
            return CycNum::one();
        }
        if n % 4 == 2 {
            let m = n / 2;
            return -CycNum::zeta(m).pow(((m + 1) / 2) as i64);
        }
        let f = CycField::new(n);
        let mut c = vec![BigRat::zero(); f.degree()];
        c[1] = BigRat::one();
        CycNum { f, c }
    }

    pub fn field(&self) -> &CycField {
        &self.f
    }

    pub fn conductor(&self) -> u64 {
        self.f.n
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(|x| x.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRat> {
        if self.is_rational() {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Represents `self` in `Q(zeta_N)`, `N = target.conductor()`.
    pub fn lift_to(&self, target: &CycField) -> Result<CycNum> {
        let m = self.f.n;
        let n = target.n;
        if n % m != 0 {
            return Err(Error::NotASubfield { from: m, to: n });
        }
        if m == n {
            return Ok(CycNum { f: target.clone(), c: self.c.clone() });
        }
        let step = (n / m) as usize;
        let pw = target.zeta_powers();
        let mut out = vec![BigRat::zero(); target.degree()];
        for (j, cj) in self.c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let v = &pw[(j * step) % n as usize];
            for (o, vi) in out.iter_mut().zip(v.iter()) {
                if *vi != 0 {
                    *o += cj * BigRat::from_integer(BigInt::from(*vi));
                }
            }
        }
        Ok(CycNum { f: target.clone(), c: out })
    }

    fn lift_unchecked(&self, target: &CycField) -> CycNum {
        self.lift_to(target).expect("conductor divides target")
    }

    fn common(a: &CycNum, b: &CycNum) -> (CycNum, CycNum) {
        if a.f.n == b.f.n {
            return (a.clone(), b.clone());
        }
        let l = CycField::new(lcm_u64(a.f.n, b.f.n));
        (a.lift_unchecked(&l), b.lift_unchecked(&l))
    }

    /// Galois conjugate `zeta -> zeta^k`, `gcd(k, N) = 1`.
    pub fn conj(&self, k: u64) -> CycNum {
        let n = self.f.n;
        if n == 1 {
            return self.clone();
        }
        let pw = self.f.zeta_powers();
        let mut out = vec![BigRat::zero(); self.f.degree()];
        for (j, cj) in self.c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let v = &pw[((j as u64 * k) % n) as usize];
            for (o, vi) in out.iter_mut().zip(v.iter()) {
                if *vi != 0 {
                    *o += cj * BigRat::from_integer(BigInt::from(*vi));
                }
            }
        }
        CycNum { f: self.f.clone(), c: out }
    }

    /// Moves the element into the smallest cyclotomic field containing it.
    pub fn canonical(self) -> CycNum {
        if self.is_rational() {
            if self.f.n == 1 {
                return self;
            }
            return CycNum::from_rat(self.c[0].clone());
        }
        let n = self.f.n;
        if n % 4 == 2 {
            // Q(zeta_N) = Q(zeta_{N/2}); rewrite through zeta_N = -zeta_{N/2}^{(N/2+1)/2}
            let m = n / 2;
            let z = CycNum::zeta(n);
            let mut acc = CycNum::zero();
            let mut p = CycNum::one();
            for cj in self.c.iter() {
                if !cj.is_zero() {
                    acc = acc + p.scale(cj);
                }
                p = &p * &z;
            }
            debug_assert!(acc.f.n <= m);
            return acc;
        }
        let pw = self.f.zeta_powers();
        for m in divisors(n) {
            if m == 1 || m == n || m % 4 == 2 {
                continue;
            }
            let fixed = (1..n)
                .filter(|&k| k % m == 1 && gcd_u64(k, n) == 1 && k != 1)
                .all(|k| self.conj(k).c == self.c);
            if fixed {
                let sub = CycField::new(m);
                let step = (n / m) as usize;
                let basis: Vec<&Vec<i64>> = (0..sub.degree()).map(|i| &pw[i * step]).collect();
                let x = solve_in_basis(&basis, &self.c);
                return CycNum { f: sub, c: x };
            }
        }
        self
    }

    pub fn scale(&self, q: &BigRat) -> CycNum {
        if q.is_zero() {
            return CycNum::zero();
        }
        CycNum { f: self.f.clone(), c: self.c.iter().map(|x| x * q).collect() }
    }

    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(CycNum::from_rat(q.recip()));
        }
        // extended Euclid of a(x) against Phi_N over Q
        let phi: Vec<BigRat> =
            self.f.phi.iter().map(|&v| BigRat::from_integer(BigInt::from(v))).collect();
        let a = trim(self.c.clone());
        let (g, s) = xgcd_left(&a, &phi);
        debug_assert!(g.len() == 1);
        let ginv = g[0].recip();
        let s: Vec<BigRat> = s.into_iter().map(|x| x * &ginv).collect();
        Ok(CycNum::from_coeffs(&self.f, s))
    }

    pub fn div(&self, other: &CycNum) -> Result<CycNum> {
        Ok(self * &other.inv()?)
    }

    /// Integer power; panics on `0^negative` (use `try_pow`).
    pub fn pow(&self, e: i64) -> CycNum {
        self.try_pow(e).expect("inverse of zero")
    }

    pub fn try_pow(&self, e: i64) -> Result<CycNum> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = CycNum::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Field norm down to `Q`.
    pub fn norm(&self) -> BigRat {
        if let Some(q) = self.as_rational() {
            return q;
        }
        let mut acc = CycNum::one();
        for k in self.f.galois_indices() {
            acc = &acc * &self.conj(k);
        }
        acc.as_rational().expect("norm is rational")
    }

    /// Multiplicative order: `min{n > 0 : a^n = 1}`, or 0 if `a` is not a root of unity.
    pub fn order_of(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let t = lcm_u64(2, self.f.n);
        if !self.pow(t as i64).is_one() {
            return Ok(0);
        }
        for d in divisors(t) {
            if self.pow(d as i64).is_one() {
                return Ok(d);
            }
        }
        Ok(t)
    }

    /// `sqrt(d)` for squarefree `d >= 2`, the positive real root, via Gauss sums.
    pub fn sqrt_embed(d: u64) -> Result<CycNum> {
        if d < 2 || !is_squarefree(d) {
            return Err(Error::NotSquarefree(d));
        }
        let mut acc = CycNum::one();
        let mut rest = d;
        let mut p = 2;
        while rest > 1 {
            if rest % p == 0 {
                rest /= p;
                acc = &acc * &sqrt_prime(p);
            }
            p += 1;
        }
        Ok(acc)
    }

    /// The unique representative `q * w` with `q` rational and `w` having
    /// primitive integral coordinates whose first nonzero entry is positive.
    pub fn split_rational(&self) -> (BigRat, CycNum) {
        if let Some(q) = self.as_rational() {
            return (q, CycNum::one());
        }
        let mut den = BigInt::one();
        for x in &self.c {
            den = den.lcm(x.denom());
        }
        let ints: Vec<BigInt> = self.c.iter().map(|x| (x * BigRat::from_integer(den.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = g.gcd(x);
        }
        let first_neg = ints.iter().find(|x| !x.is_zero()).map(|x| x.is_negative()).unwrap_or(false);
        if first_neg {
            g = -g;
        }
        let w: Vec<BigRat> = ints.iter().map(|x| BigRat::from_integer(x / &g)).collect();
        (BigRat::new(g, den), CycNum { f: self.f.clone(), c: w })
    }
}

fn is_squarefree(mut d: u64) -> bool {
    let mut p = 2;
    while p * p <= d {
        if d % (p * p) == 0 {
            return false;
        }
        if d % p == 0 {
            d /= p;
        }
        p += 1;
    }
    true
}

fn sqrt_prime(p: u64) -> CycNum {
    if p == 2 {
        let z = CycNum::zeta(8);
        return &z + &z.pow(7);
    }
    // quadratic Gauss sum g = sum (a/p) zeta_p^a, g^2 = (-1)^((p-1)/2) p
    let z = CycNum::zeta(p);
    let mut g = CycNum::zero();
    for a in 1..p {
        let leg = legendre(a, p);
        g = g + z.pow(a as i64).scale(&BigRat::from_integer(BigInt::from(leg)));
    }
    if p % 4 == 1 {
        g
    } else {
        // g = i sqrt(p)
        &g * &(-CycNum::zeta(4))
    }
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

fn trim(mut v: Vec<BigRat>) -> Vec<BigRat> {
    while v.len() > 1 && v.last().map(|x| x.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn reduce(f: &CycField, mut v: Vec<BigRat>) -> Vec<BigRat> {
    let d = f.degree();
    let phi = &f.phi;
    if v.len() > d {
        for i in (d..v.len()).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = core::mem::replace(&mut v[i], BigRat::zero());
            for j in 0..d {
                if phi[j] != 0 {
                    v[i - d + j] -= &c * BigRat::from_integer(BigInt::from(phi[j]));
                }
            }
        }
    }
    v.resize(d, BigRat::zero());
    v
}

/// Returns `(g, s)` with `s*a = g (mod b)`; polynomials over Q, ascending.
fn xgcd_left(a: &[BigRat], b: &[BigRat]) -> (Vec<BigRat>, Vec<BigRat>) {
    let mut r0 = trim(b.to_vec());
    let mut r1 = trim(a.to_vec());
    let mut s0: Vec<BigRat> = vec![BigRat::zero()];
    let mut s1: Vec<BigRat> = vec![BigRat::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = pdivrem(&r0, &r1);
        let s2 = psub(&s0, &pmul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    (r0, s0)
}

fn pmul(a: &[BigRat], b: &[BigRat]) -> Vec<BigRat> {
    let mut r = vec![BigRat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim(r)
}

fn psub(a: &[BigRat], b: &[BigRat]) -> Vec<BigRat> {
    let n = a.len().max(b.len());
    let mut r = vec![BigRat::zero(); n];
    for (i, x) in a.iter().enumerate() {
        r[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        r[i] -= x;
    }
    trim(r)
}

fn pdivrem(a: &[BigRat], b: &[BigRat]) -> (Vec<BigRat>, Vec<BigRat>) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![BigRat::zero()], trim(r));
    }
    let lead = b[db].clone();
    let mut q = vec![BigRat::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lead;
        if !c.is_zero() {
            for j in 0..=db {
                r[i + j] -= &c * &b[j];
            }
        }
        q[i] = c;
    }
    r.truncate(db.max(1));
    (trim(q), trim(r))
}

/// Solves `sum x_i basis_i = target` (consistent system, integer basis vectors).
fn solve_in_basis(basis: &[&Vec<i64>], target: &[BigRat]) -> Vec<BigRat> {
    let rows = target.len();
    let cols = basis.len();
    let mut m: Vec<Vec<BigRat>> = (0..rows)
        .map(|r| {
            let mut row: Vec<BigRat> =
                (0..cols).map(|c| BigRat::from_integer(BigInt::from(basis[c][r]))).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut piv_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        piv_cols.push(c);
        r += 1;
    }
    let mut x = vec![BigRat::zero(); cols];
    for (i, &c) in piv_cols.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    x
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.f.n == other.f.n {
            return self.c == other.c;
        }
        let (a, b) = CycNum::common(self, other);
        a.c == b.c
    }
}
impl Eq for CycNum {}

impl PartialOrd for CycNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycNum {
    /// Total order on canonical representations: conductor, then coordinates.
    fn cmp(&self, other: &Self) -> Ordering {
        if self.f.n == other.f.n && self.c == other.c {
            return Ordering::Equal;
        }
        let a = self.clone().canonical();
        let b = other.clone().canonical();
        a.f.n.cmp(&b.f.n).then_with(|| a.c.cmp(&b.c))
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        if self.f.n == rhs.f.n {
            let c = self.c.iter().zip(rhs.c.iter()).map(|(x, y)| x + y).collect();
            return CycNum { f: self.f.clone(), c }.canonical();
        }
        let (a, b) = CycNum::common(self, rhs);
        &a + &b
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        if let Some(q) = self.as_rational() {
            return rhs.scale(&q);
        }
        if let Some(q) = rhs.as_rational() {
            return self.scale(&q);
        }
        if self.f.n == rhs.f.n {
            let d = self.f.degree();
            let mut v = vec![BigRat::zero(); 2 * d - 1];
            for (i, x) in self.c.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in rhs.c.iter().enumerate() {
                    if !y.is_zero() {
                        v[i + j] += x * y;
                    }
                }
            }
            let c = reduce(&self.f, v);
            return CycNum { f: self.f.clone(), c }.canonical();
        }
        let (a, b) = CycNum::common(self, rhs);
        &a * &b
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { f: self.f.clone(), c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl Add for CycNum {
    type Output = CycNum;
    fn add(self, rhs: CycNum) -> CycNum {
        &self + &rhs
    }
}

impl Sub for CycNum {
    type Output = CycNum;
    fn sub(self, rhs: CycNum) -> CycNum {
        &self - &rhs
    }
}

impl Mul for CycNum {
    type Output = CycNum;
    fn mul(self, rhs: CycNum) -> CycNum {
        &self * &rhs
    }
}

fn fmt_rat(q: &BigRat) -> alloc::string::String {
    use alloc::format;
    if q.is_integer() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl CycNum {
    /// Sign and body for elements that print as a single product of atoms:
    /// rationals, `c*zeta(N)^j`, `c*sqrt(d)` and `c*sqrt(d)*zeta(4)`.
    pub fn atom_text(&self) -> Option<(bool, alloc::string::String)> {
        use alloc::format;
        use alloc::string::ToString;
        let with_coeff = |c: &BigRat, body: alloc::string::String| {
            if c.is_one() {
                body
            } else {
                format!("{}*{}", fmt_rat(c), body)
            }
        };
        if let Some(q) = self.as_rational() {
            return Some((q.is_negative(), fmt_rat(&q.abs())));
        }
        let nz: Vec<usize> = (0..self.c.len()).filter(|&j| !self.c[j].is_zero()).collect();
        if nz.len() == 1 {
            let j = nz[0];
            let c = &self.c[j];
            let z = if j == 1 { format!("zeta({})", self.f.n) } else { format!("zeta({})^{}", self.f.n, j) };
            return Some((c.is_negative(), with_coeff(&c.abs(), z)));
        }
        let sq = (self * self).as_rational()?;
        let t = sq.numer() * sq.denom();
        let mut m = BigInt::one();
        let mut d = BigInt::one();
        for (p, e) in super::intfac::factor(&t) {
            m *= num_traits::pow(p.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                d *= p;
            }
        }
        let c = BigRat::new(m, sq.denom().clone());
        let d = d.to_u64()?;
        let (base, body) = if sq.is_negative() {
            if d == 1 {
                (CycNum::zeta(4), "zeta(4)".to_string())
            } else {
                (&CycNum::sqrt_embed(d).ok()? * &CycNum::zeta(4), format!("sqrt({d})*zeta(4)"))
            }
        } else {
            (CycNum::sqrt_embed(d).ok()?, format!("sqrt({d})"))
        };
        let pos = base.scale(&c);
        if &pos == self {
            Some((false, with_coeff(&c, body)))
        } else {
            debug_assert!(-pos == *self);
            Some((true, with_coeff(&c, body)))
        }
    }
}

impl fmt::Display for CycNum {
    /// Prints in the input grammar, e.g. `2*sqrt(3)` or `1/2 - 1/2*zeta(4)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((neg, body)) = self.atom_text() {
            return write!(f, "{}{}", if neg { "-" } else { "" }, body);
        }
        let n = self.f.n;
        let mut first = true;
        for (j, cj) in self.c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let neg = cj.is_negative();
            let a = cj.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            if j == 0 {
                write!(f, "{}", fmt_rat(&a))?;
                continue;
            }
            if !a.is_one() {
                write!(f, "{}*", fmt_rat(&a))?;
            }
            if j == 1 {
                write!(f, "zeta({n})")?;
            } else {
                write!(f, "zeta({n})^{j}")?;
            }
        }
        Ok(())
    }
}
