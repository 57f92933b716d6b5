use crate::arith::{lcm_u64, BigRat, CycField, CycNum};
use crate::error::{Error, Result};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_traits::One;

/// Dense univariate polynomial over `Q(zeta_N)`, ascending coefficients.
/// The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Poly {
    c: Vec<CycNum>,
}

impl Poly {
    pub fn new(mut c: Vec<CycNum>) -> Poly {
        while c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Poly {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(CycNum::one())
    }

    pub fn constant(a: CycNum) -> Poly {
        Poly::new(vec![a])
    }

    pub fn x() -> Poly {
        Poly::new(vec![CycNum::zero(), CycNum::one()])
    }

    /// `x + a`.
    pub fn linear(a: CycNum) -> Poly {
        Poly::new(vec![a, CycNum::one()])
    }

    pub fn from_ints(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| CycNum::from_int(v)).collect())
    }

    pub fn from_rats(c: &[BigRat]) -> Poly {
        Poly::new(c.iter().map(|v| CycNum::from_rat(v.clone())).collect())
    }

    pub fn coeffs(&self) -> &[CycNum] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> CycNum {
        self.c.get(i).cloned().unwrap_or_else(CycNum::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> CycNum {
        self.c.last().cloned().unwrap_or_else(CycNum::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().all(|a| a.is_rational())
    }

    /// Least common conductor of the coefficients.
    pub fn conductor(&self) -> u64 {
        self.c.iter().fold(1, |acc, a| lcm_u64(acc, a.conductor()))
    }

    pub fn scale(&self, a: &CycNum) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.lead().inv().expect("nonzero lead");
        self.scale(&inv)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut r = vec![CycNum::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    r[i + j] = &r[i + j] + &(a * b);
                }
            }
        }
        Poly::new(r)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.c.len() < d.c.len() {
            return Ok((Poly::zero(), self.clone()));
        }
        let dd = d.c.len() - 1;
        let inv = d.lead().inv()?;
        let mut r = self.c.clone();
        let mut q = vec![CycNum::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &inv;
            if !c.is_zero() {
                for j in 0..=dd {
                    if !d.c[j].is_zero() {
                        r[i + j] = &r[i + j] - &(&c * &d.c[j]);
                    }
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(q), Poly::new(r)))
    }

    /// Exact quotient; panics in debug builds if the remainder is nonzero.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).expect("nonzero divisor").1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        if self.c.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a.scale(&BigRat::from_integer(BigInt::from(i))))
                .collect(),
        )
    }

    pub fn eval(&self, x: &CycNum) -> CycNum {
        let mut acc = CycNum::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * x) + a;
        }
        acc
    }

    pub fn eval_int(&self, n: i64) -> CycNum {
        let x = BigRat::from_integer(BigInt::from(n));
        let mut acc = CycNum::zero();
        for a in self.c.iter().rev() {
            acc = &acc.scale(&x) + a;
        }
        acc
    }

    /// `p(x + a)`.
    pub fn shift_by(&self, a: &CycNum) -> Poly {
        let lin = Poly::linear(a.clone());
        let mut acc = Poly::zero();
        for c in self.c.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// `p(x + k)`.
    pub fn shift(&self, k: i64) -> Poly {
        if k == 0 {
            return self.clone();
        }
        self.shift_by(&CycNum::from_int(k))
    }

    /// Applies the Galois automorphism `zeta -> zeta^k` to every coefficient.
    pub fn conj(&self, k: u64) -> Poly {
        Poly::new(self.c.iter().map(|a| a.conj(k)).collect())
    }

    /// Coordinates in `Q(zeta_N)`: one rational polynomial per power-basis index.
    pub fn components(&self, field: &CycField) -> Vec<Poly> {
        let d = field.degree();
        let mut out = vec![Vec::with_capacity(self.c.len()); d];
        for a in &self.c {
            let l = a.lift_to(field).expect("coefficient field divides target");
            for (j, v) in l.coeffs().iter().enumerate() {
                out[j].push(CycNum::from_rat(v.clone()));
            }
        }
        out.into_iter().map(Poly::new).collect()
    }

    /// Integer coefficients of `m * p` for the least positive `m` (rational polynomials only).
    pub fn to_integer_coeffs(&self) -> Vec<BigInt> {
        let mut den = BigInt::one();
        for a in &self.c {
            let q = a.as_rational().expect("rational polynomial");
            den = num_integer::Integer::lcm(&den, q.denom());
        }
        self.c
            .iter()
            .map(|a| (a.as_rational().unwrap() * BigRat::from_integer(den.clone())).to_integer())
            .collect()
    }

    /// Renders the polynomial in variable `var` using the input grammar.
    pub fn to_text(&self, var: &str) -> String {
        use alloc::format;
        use alloc::string::ToString;
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for i in (0..self.c.len()).rev() {
            let a = &self.c[i];
            if a.is_zero() {
                continue;
            }
            let mon = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let (neg, body) = coeff_text(a);
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if mon.is_empty() {
                s.push_str(&body);
            } else if body == "1" {
                s.push_str(&mon);
            } else {
                s.push_str(&body);
                s.push('*');
                s.push_str(&mon);
            }
        }
        s
    }
}

/// Sign-separated rendering of a coefficient, parenthesized when it is a sum.
pub(crate) fn coeff_text(a: &CycNum) -> (bool, String) {
    use alloc::format;
    match a.atom_text() {
        Some(t) => t,
        None => (false, format!("({a})")),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("x"))
    }
}
