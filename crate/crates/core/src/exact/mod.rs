//! Exact arithmetic backbone: big-integer rationals, Gaussian rationals,
//! univariate polynomials and rational functions over Q.
//!
//! The parameter `m` is always a fixed rational per computation; nothing here
//! is symbolic in `m`. All values are immutable after construction and safe
//! to share across threads.

mod poly;
mod ratfun;

pub use poly::{horner as poly_horner, RatPoly};
pub use ratfun::RatFun;

use crate::C64;
use num::bigint::{BigInt, Sign};
use num::{BigRational, One, ToPrimitive, Zero};

/// Exact rational scalar. `num::BigRational` already maintains the invariants
/// we need: reduced to lowest terms, denominator positive.
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parse "p/q" or "p" into a rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(p))
        }
    }
}

/// Render as "p/q", or "p" when the denominator is one.
pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Mantissa in [1, 2) and binary exponent of a nonzero big integer's absolute
/// value, so that |x| = mantissa * 2^exp without overflow at any size.
fn big_mantissa_exp(x: &BigInt) -> (f64, i64) {
    let mag = x.magnitude();
    let bits = mag.bits();
    debug_assert!(bits > 0);
    if bits <= 53 {
        let v = mag.to_f64().unwrap();
        let e = v.log2().floor() as i64;
        return (v / (e as f64).exp2(), e);
    }
    let shift = (bits - 53) as usize;
    let top = (mag >> shift).to_f64().unwrap();
    let e = top.log2().floor() as i64 + shift as i64;
    (top / top.log2().floor().exp2(), e)
}

/// Rational -> f64 that cannot overflow internally, saturating only in the
/// final exponent. Needed because Umemura coefficients overflow f64 long
/// before their normalized ratios do.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let (mn, en) = big_mantissa_exp(r.numer());
    let (md, ed) = big_mantissa_exp(r.denom());
    let sign = if r.numer().sign() == Sign::Minus {
        -1.0
    } else {
        1.0
    };
    let e = en - ed;
    if e > 1100 {
        return sign * f64::INFINITY;
    }
    if e < -1150 {
        return 0.0;
    }
    let h = e / 2;
    sign * ((mn / md) * (h as f64).exp2()) * ((e - h) as f64).exp2()
}

/// ln |r| computed from bit lengths; finite for rationals of any size.
pub fn rat_ln_abs(r: &Rat) -> f64 {
    assert!(!r.is_zero(), "ln|0| requested");
    let (mn, en) = big_mantissa_exp(r.numer());
    let (md, ed) = big_mantissa_exp(r.denom());
    mn.ln() - md.ln() + (en - ed) as f64 * std::f64::consts::LN_2
}

pub fn rat_from_f64_exact(x: f64) -> Option<Rat> {
    BigRational::from_float(x)
}

/// Is r = k + 1/2 for integer k?
pub fn is_half_integer(r: &Rat) -> bool {
    *r.denom() == BigInt::from(2)
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Gaussian rational: exact complex number with rational real and imaginary
/// parts. Used to evaluate enormous exact polynomials at complex points
/// without any floating-point conditioning loss.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CRat {
    pub re: Rat,
    pub im: Rat,
}

impl CRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        CRat { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        CRat {
            re,
            im: Rat::zero(),
        }
    }

    pub fn zero() -> Self {
        CRat::new(Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        CRat::new(Rat::one(), Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, rhs: &CRat) -> CRat {
        CRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }

    pub fn sub(&self, rhs: &CRat) -> CRat {
        CRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }

    pub fn mul(&self, rhs: &CRat) -> CRat {
        CRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }

    pub fn mul_rat(&self, rhs: &Rat) -> CRat {
        CRat::new(&self.re * rhs, &self.im * rhs)
    }

    pub fn div(&self, rhs: &CRat) -> CRat {
        let d = &rhs.re * &rhs.re + &rhs.im * &rhs.im;
        assert!(!d.is_zero(), "division by zero Gaussian rational");
        CRat::new(
            (&self.re * &rhs.re + &self.im * &rhs.im) / &d,
            (&self.im * &rhs.re - &self.re * &rhs.im) / &d,
        )
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        assert_eq!(parse_rat("1/4").unwrap(), rat(1, 4));
        assert_eq!(parse_rat("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("7").unwrap(), rat_int(7));
        assert!(parse_rat("1/0").is_none());
        assert_eq!(rat_string(&rat(-1, 2)), "-1/2");
        assert_eq!(rat_string(&rat_int(5)), "5");
    }

    #[test]
    fn f64_conversion_handles_huge_values() {
        let big = Rat::new(BigInt::from(3) << 400, BigInt::from(1) << 399);
        assert!((rat_to_f64(&big) - 6.0).abs() < 1e-14);
        let huge = Rat::new(BigInt::from(1) << 5000, BigInt::one());
        assert!(rat_to_f64(&huge).is_infinite());
        let ln = rat_ln_abs(&huge);
        assert!((ln - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn gaussian_rational_field_ops() {
        let z = CRat::new(rat(1, 2), rat(1, 3));
        let w = CRat::new(rat(-2, 5), rat(4, 7));
        let prod = z.mul(&w);
        let back = prod.div(&w);
        assert_eq!(back, z);
        assert_eq!(z.sub(&z), CRat::zero());
    }

    #[test]
    fn half_integer_detection() {
        assert!(is_half_integer(&rat(3, 2)));
        assert!(is_half_integer(&rat(-1, 2)));
        assert!(!is_half_integer(&rat(1, 4)));
        assert!(!is_half_integer(&rat_int(2)));
    }
}
