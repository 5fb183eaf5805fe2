//! Capped-precision binary floats over big integers.
//!
//! The Umemura jet recurrences mix values whose magnitudes span thousands of
//! binary orders while their ratios stay O(1). Exact rationals make those
//! chains quadratically expensive; f64 overflows and loses the ratio. This
//! keeps a mantissa of at most P bits with an unbounded exponent: all the
//! range of a rational, fixed op cost, and enough guard bits that the final
//! double-precision ratios come out clean. Rounding is by truncation.

use crate::exact::{CRat, Rat};
use crate::C64;
use num::bigint::BigInt;
use num::{BigUint, Signed, Zero};

#[derive(Debug, Clone)]
pub struct BigFloat {
    neg: bool,
    mant: BigUint,
    exp: i64,
    prec: u32,
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            neg: false,
            mant: BigUint::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        let neg = v < 0;
        let mant = BigUint::from(v.unsigned_abs());
        BigFloat {
            neg,
            mant,
            exp: 0,
            prec,
        }
        .normalized()
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        BigFloat {
            neg: v.is_negative(),
            mant: v.magnitude().clone(),
            exp: 0,
            prec,
        }
        .normalized()
    }

    pub fn from_rat(r: &Rat, prec: u32) -> Self {
        let num = Self::from_bigint(r.numer(), prec + 64);
        let den = Self::from_bigint(r.denom(), prec + 64);
        let mut q = num.div(&den);
        q.prec = prec;
        q.normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.neg = false;
            self.exp = 0;
            return self;
        }
        let bits = self.mant.bits();
        if bits > self.prec as u64 {
            let drop = bits - self.prec as u64;
            self.mant >>= drop as usize;
            self.exp += drop as i64;
        }
        self
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        if !out.is_zero() {
            out.neg = !out.neg;
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let prec = self.prec.max(rhs.prec);
        // align exponents; drop a summand entirely below the other's window
        let (hi, lo) = if self.exp >= rhs.exp {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let shift = (hi.exp - lo.exp) as u64;
        if shift > prec as u64 + hi.mant.bits() + 4 {
            return hi.clone();
        }
        let hm = BigInt::from_biguint(sign_of(hi.neg), hi.mant.clone()) << (shift as usize);
        let lm = BigInt::from_biguint(sign_of(lo.neg), lo.mant.clone());
        let sum = hm + lm;
        BigFloat {
            neg: sum.is_negative(),
            mant: sum.magnitude().clone(),
            exp: lo.exp,
            prec,
        }
        .normalized()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() || rhs.is_zero() {
            return BigFloat::zero(prec);
        }
        BigFloat {
            neg: self.neg != rhs.neg,
            mant: &self.mant * &rhs.mant,
            exp: self.exp + rhs.exp,
            prec,
        }
        .normalized()
    }

    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "BigFloat division by zero");
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return BigFloat::zero(prec);
        }
        // scale numerator so the integer quotient carries prec + guard bits
        let scale = prec as u64 + 8 + rhs.mant.bits();
        let num = &self.mant << (scale as usize);
        let q = num / &rhs.mant;
        BigFloat {
            neg: self.neg != rhs.neg,
            mant: q,
            exp: self.exp - rhs.exp - scale as i64,
            prec,
        }
        .normalized()
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (top, shift) = if bits > 53 {
            let s = (bits - 53) as usize;
            ((&self.mant >> s).to_u64_digits()[0], s as i64)
        } else {
            (self.mant.to_u64_digits()[0], 0)
        };
        let e = self.exp + shift;
        let sgn = if self.neg { -1.0 } else { 1.0 };
        if e > 1100 {
            return sgn * f64::INFINITY;
        }
        if e < -1150 {
            return 0.0;
        }
        let h = e / 2;
        sgn * (top as f64 * (h as f64).exp2()) * ((e - h) as f64).exp2()
    }

    /// log2 of the absolute value; -inf for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits();
        if bits <= 53 {
            (self.mant.to_u64_digits()[0] as f64).log2() + self.exp as f64
        } else {
            let s = (bits - 53) as usize;
            let top = (&self.mant >> s).to_u64_digits()[0] as f64;
            top.log2() + s as f64 + self.exp as f64
        }
    }
}

fn sign_of(neg: bool) -> num::bigint::Sign {
    if neg {
        num::bigint::Sign::Minus
    } else {
        num::bigint::Sign::Plus
    }
}

/// Complex number over BigFloat.
#[derive(Debug, Clone)]
pub struct CBig {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl CBig {
    pub fn zero(prec: u32) -> Self {
        CBig {
            re: BigFloat::zero(prec),
            im: BigFloat::zero(prec),
        }
    }

    pub fn from_re(re: BigFloat) -> Self {
        let prec = re.prec;
        CBig {
            re,
            im: BigFloat::zero(prec),
        }
    }

    pub fn from_crat(z: &CRat, prec: u32) -> Self {
        CBig {
            re: BigFloat::from_rat(&z.re, prec),
            im: BigFloat::from_rat(&z.im, prec),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        CBig {
            re: self.re.add(&rhs.re),
            im: self.im.add(&rhs.im),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        CBig {
            re: self.re.sub(&rhs.re),
            im: self.im.sub(&rhs.im),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        CBig {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }

    pub fn mul_f(&self, rhs: &BigFloat) -> Self {
        CBig {
            re: self.re.mul(rhs),
            im: self.im.mul(rhs),
        }
    }

    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "CBig division by zero");
        let d = rhs.re.mul(&rhs.re).add(&rhs.im.mul(&rhs.im));
        CBig {
            re: self.re.mul(&rhs.re).add(&self.im.mul(&rhs.im)).div(&d),
            im: self.im.mul(&rhs.re).sub(&self.re.mul(&rhs.im)).div(&d),
        }
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    const P: u32 = 256;

    #[test]
    fn arithmetic_matches_f64_on_moderate_values() {
        let a = BigFloat::from_rat(&rat(355, 113), P);
        let b = BigFloat::from_rat(&rat(-7, 3), P);
        assert!((a.add(&b).to_f64() - (355.0 / 113.0 - 7.0 / 3.0)).abs() < 1e-14);
        assert!((a.mul(&b).to_f64() - (355.0 / 113.0) * (-7.0 / 3.0)).abs() < 1e-14);
        assert!((a.div(&b).to_f64() - (355.0 / 113.0) / (-7.0 / 3.0)).abs() < 1e-14);
        assert!((a.sub(&a)).is_zero());
    }

    #[test]
    fn huge_dynamic_range_ratio_survives() {
        // (2^5000 * 3) / 2^5000 = 3 exactly representable through the ratio
        let two = BigFloat::from_i64(2, P);
        let mut big = BigFloat::from_i64(3, P);
        for _ in 0..5000 {
            big = big.mul(&two);
        }
        let mut den = BigFloat::from_i64(1, P);
        for _ in 0..5000 {
            den = den.mul(&two);
        }
        assert!((big.div(&den).to_f64() - 3.0).abs() < 1e-15);
        assert!(big.to_f64().is_infinite()); // out of f64 range on its own
    }

    #[test]
    fn complex_field_ops() {
        let z = CBig::from_crat(&CRat::new(rat(1, 2), rat(1, 3)), P);
        let w = CBig::from_crat(&CRat::new(rat(-2, 5), rat(4, 7)), P);
        let back = z.mul(&w).div(&w);
        assert!((back.to_c64() - z.to_c64()).norm() < 1e-60);
        let exact = CRat::new(rat(1, 2), rat(1, 3))
            .mul(&CRat::new(rat(-2, 5), rat(4, 7)))
            .to_c64();
        assert!((z.mul(&w).to_c64() - exact).norm() < 1e-15);
    }

    #[test]
    fn precision_cap_is_enforced() {
        let mut x = BigFloat::from_i64(1, 64);
        let three = BigFloat::from_i64(3, 64);
        for _ in 0..100 {
            x = x.div(&three).mul(&three);
        }
        // truncation error stays around 2^-64 per op, far below 1e-12
        assert!((x.to_f64() - 1.0).abs() < 1e-12);
    }
}
