use super::Poly;
use crate::arith::{BigRat, CycNum};
use crate::error::{Error, Result};
use alloc::format;
use alloc::string::String;
use core::fmt;

/// Reduced quotient `num / den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFun::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.div_exact(&g), den.div_exact(&g)) };
        let l = den.lead().inv()?;
        Ok(RatFun { num: num.scale(&l), den: den.scale(&l) })
    }

    pub fn from_poly(p: Poly) -> RatFun {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn constant(a: CycNum) -> RatFun {
        RatFun::from_poly(Poly::constant(a))
    }

    pub fn from_int(n: i64) -> RatFun {
        RatFun::constant(CycNum::from_int(n))
    }

    pub fn from_rat(q: BigRat) -> RatFun {
        RatFun::constant(CycNum::from_rat(q))
    }

    pub fn x() -> RatFun {
        RatFun::from_poly(Poly::x())
    }

    pub fn zero() -> RatFun {
        RatFun { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> RatFun {
        RatFun::from_poly(Poly::one())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<CycNum> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn conductor(&self) -> u64 {
        crate::arith::lcm_u64(self.num.conductor(), self.den.conductor())
    }

    pub fn add(&self, o: &RatFun) -> RatFun {
        if self.den == o.den {
            return RatFun::new(self.num.add(&o.num), self.den.clone()).expect("nonzero den");
        }
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        RatFun::new(n, self.den.mul(&o.den)).expect("nonzero den")
    }

    pub fn sub(&self, o: &RatFun) -> RatFun {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFun) -> RatFun {
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        RatFun::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero den")
    }

    pub fn scale(&self, a: &CycNum) -> RatFun {
        if a.is_zero() {
            return RatFun::zero();
        }
        RatFun { num: self.num.scale(a), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<RatFun> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFun) -> Result<RatFun> {
        Ok(self.mul(&o.inv()?))
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> Result<RatFun> {
        let (n, d) = if e >= 0 { (&self.num, &self.den) } else {
            if self.is_zero() {
                return Err(Error::DivisionByZero);
            }
            (&self.den, &self.num)
        };
        let k = e.unsigned_abs() as u32;
        RatFun::new(n.pow(k), d.pow(k))
    }

    /// `f(x + k)`.
    pub fn shift(&self, k: i64) -> RatFun {
        if k == 0 {
            return self.clone();
        }
        // shifting preserves coprimality and the leading coefficient
        RatFun { num: self.num.shift(k), den: self.den.shift(k) }
    }

    pub fn conj(&self, k: u64) -> RatFun {
        RatFun::new(self.num.conj(k), self.den.conj(k)).expect("nonzero den")
    }

    /// Value at the integer `n`, `0` when the denominator vanishes there.
    pub fn eval_at(&self, n: i64) -> CycNum {
        self.try_eval_at(n).unwrap_or_else(CycNum::zero)
    }

    /// Value at `n`, or `None` at a pole.
    pub fn try_eval_at(&self, n: i64) -> Option<CycNum> {
        let d = self.den.eval_int(n);
        if d.is_zero() {
            return None;
        }
        let v = self.num.eval_int(n);
        if self.den.is_one() {
            return Some(v);
        }
        Some(v.div(&d).expect("nonzero"))
    }

    /// Text in the input grammar, variable `var`; safe to embed as a factor
    /// when `paren` is set.
    pub fn to_text(&self, var: &str, paren: bool) -> String {
        if self.den.is_one() {
            let t = self.num.to_text(var);
            let simple = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1
                && !t.contains(' ')
                && !t.contains('/')
                && !t.starts_with('-');
            if paren && !simple && !enclosed(&t) {
                return format!("({t})");
            }
            return t;
        }
        let n = self.num.to_text(var);
        let d = self.den.to_text(var);
        let t = format!("({n})/({d})");
        if paren {
            format!("({t})")
        } else {
            t
        }
    }
}

/// Whether `t` is one parenthesized group.
fn enclosed(t: &str) -> bool {
    if !t.starts_with('(') {
        return false;
    }
    let mut depth = 0;
    for (i, c) in t.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return i == t.len() - 1;
                }
            }
            _ => {}
        }
    }
    false
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("x", false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn shift_and_eval() {
        let f = RatFun::from_poly(Poly::from_ints(&[-2, 1]));
        assert_eq!(f.shift(1), RatFun::from_poly(Poly::from_ints(&[-1, 1])));
        let g = RatFun::new(Poly::one(), Poly::from_ints(&[-3, 1])).unwrap();
        assert_eq!(g.eval_at(3), CycNum::zero());
        let h = RatFun::new(Poly::from_ints(&[1, 1]), Poly::from_ints(&[2])).unwrap();
        assert_eq!(h.eval_at(5), CycNum::from_int(3));
    }

    #[test]
    fn normal_form() {
        let a = RatFun::new(Poly::from_ints(&[-1, 0, 1]), Poly::from_ints(&[2, 2])).unwrap();
        assert_eq!(a.num(), &Poly::from_rats(&[rat(-1, 2), rat(1, 2)]));
        assert_eq!(a.den(), &Poly::one());
        let b = a.inv().unwrap().mul(&a);
        assert!(b.is_one());
        assert!(a.sub(&a).is_zero());
    }
}
