//! Rational functions over Q in canonical form: monic denominator, numerator
//! and denominator coprime.

use super::poly::{horner, RatPoly};
use super::{rat_to_f64, CRat, Rat};
use crate::error::{Error, Result};
use crate::C64;
use num::{One, Zero};

/// Relative threshold under which a denominator value counts as a pole.
pub const POLE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFun {
    num: RatPoly,
    den: RatPoly,
}

impl RatFun {
    /// Build and reduce to canonical form. A cheap modular certificate skips
    /// the remainder-sequence gcd whenever the parts are already coprime,
    /// which is the common case in composite expressions.
    pub fn new(num: RatPoly, den: RatPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFun {
                num: RatPoly::zero(),
                den: RatPoly::one(),
            };
        }
        if den.degree() == Some(0) || num.coprime_certificate(&den) {
            return Self::from_coprime(num, den);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        Self::from_coprime(num, den)
    }

    /// Wrap parts without any reduction; only the denominator is normalized
    /// to monic. Intended for cross-multiplication comparisons where
    /// canonical form is irrelevant.
    pub fn unreduced(num: RatPoly, den: RatPoly) -> Self {
        Self::from_coprime(num, den)
    }

    /// Skip the gcd when the caller already knows the parts are coprime.
    /// Only normalizes the denominator to monic.
    pub fn from_coprime(num: RatPoly, den: RatPoly) -> Self {
        let lead = den.leading().expect("zero denominator").clone();
        if lead.is_one() {
            RatFun { num, den }
        } else {
            let inv = lead.recip();
            RatFun {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(p: RatPoly) -> Self {
        RatFun {
            num: p,
            den: RatPoly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(RatPoly::constant(c))
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn zero() -> Self {
        Self::constant(Rat::zero())
    }

    pub fn num(&self) -> &RatPoly {
        &self.num
    }

    pub fn den(&self) -> &RatPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, rhs: &RatFun) -> RatFun {
        RatFun::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn sub(&self, rhs: &RatFun) -> RatFun {
        RatFun::new(
            self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn mul(&self, rhs: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn div(&self, rhs: &RatFun) -> RatFun {
        assert!(!rhs.is_zero(), "division by zero rational function");
        RatFun::new(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> RatFun {
        assert!(!self.is_zero(), "reciprocal of zero");
        RatFun::new(self.den.clone(), self.num.clone())
    }

    /// Quotient-rule derivative, reduced.
    pub fn derivative(&self) -> RatFun {
        let n = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        RatFun::new(n, self.den.mul(&self.den))
    }

    /// Equality as rational functions by cross-multiplication; reduced form
    /// is not required on either side.
    pub fn equals_cross(&self, rhs: &RatFun) -> bool {
        self.num.mul(&rhs.den) == rhs.num.mul(&self.den)
    }

    /// Exact rational evaluation. None if the denominator vanishes.
    pub fn eval_rat(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval_rat(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_rat(x) / d)
    }

    /// Exact Gaussian-rational evaluation. None at exact poles.
    pub fn eval_crat(&self, z: &CRat) -> Option<CRat> {
        let d = self.den.eval_crat(z);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_crat(z).div(&d))
    }

    /// Float evaluation through normalized coefficients. Numerator and
    /// denominator are each scaled by their constant term (or leading
    /// coefficient) before Horner evaluation, so ratio values stay
    /// well-conditioned even when raw coefficients overflow f64.
    pub fn eval(&self, z: C64) -> Result<C64> {
        if self.num.is_zero() {
            return Ok(C64::new(0.0, 0.0));
        }
        let (ns, ncoeffs) = self.num.normalized_float();
        let (ds, dcoeffs) = self.den.normalized_float();
        let dval = horner(&dcoeffs, z);
        let dscale = dcoeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let threshold = POLE_THRESHOLD * dscale;
        if dval.norm() < threshold {
            return Err(Error::PoleHit {
                abs_den: dval.norm(),
                threshold,
            });
        }
        let nval = horner(&ncoeffs, z);
        let scale = rat_to_f64(&(ns / ds));
        Ok(nval / dval * scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    /// u_1(x; m) = (8x + 4m - 2)/(8x + 4m + 2)
    fn u1(m: Rat) -> RatFun {
        let num = RatPoly::new(vec![rat_int(4) * &m - rat_int(2), rat_int(8)]);
        let den = RatPoly::new(vec![rat_int(4) * &m + rat_int(2), rat_int(8)]);
        RatFun::new(num, den)
    }

    #[test]
    fn eval_u1_at_origin() {
        // m = 1/4: u_1(0) = (-1)/3
        let f = u1(rat(1, 4));
        let v = f.eval(C64::new(0.0, 0.0)).unwrap();
        assert!((v.re + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(f.eval_rat(&rat_int(0)).unwrap(), rat(-1, 3));
    }

    #[test]
    fn eval_constant_one() {
        let one = RatFun::one();
        let v = one.eval(C64::new(0.37, -1.2)).unwrap();
        assert_eq!(v, C64::new(1.0, 0.0));
    }

    #[test]
    fn pole_is_reported() {
        // denominator root of u_1: x = -(2m+1)/4
        let m = rat(1, 4);
        let f = u1(m.clone());
        let x = -(rat_int(2) * &m + rat_int(1)) / rat_int(4);
        match f.eval(C64::new(rat_to_f64(&x), 0.0)) {
            Err(Error::PoleHit { .. }) => {}
            other => panic!("expected PoleHit, got {other:?}"),
        }
        assert!(f.eval_rat(&x).is_none());
    }

    #[test]
    fn canonical_form_reduces() {
        // (x^2 - 1)/(x - 1) reduces to x + 1
        let num = RatPoly::new(vec![rat_int(-1), rat_int(0), rat_int(1)]);
        let den = RatPoly::new(vec![rat_int(-1), rat_int(1)]);
        let f = RatFun::new(num, den);
        assert_eq!(f.num().coeffs(), &[rat_int(1), rat_int(1)]);
        assert_eq!(f.den().coeffs(), &[rat_int(1)]);
    }

    #[test]
    fn float_eval_matches_exact_eval_on_random_rationals() {
        let f = u1(rat(1, 3));
        let mut checked = 0;
        for n in -25i64..25 {
            let x = rat(3 * n + 1, 17);
            if let Some(exact) = f.eval_rat(&x) {
                let approx = f.eval(C64::new(rat_to_f64(&x), 0.0)).unwrap();
                let e = rat_to_f64(&exact);
                assert!(
                    (approx.re - e).abs() <= 1e-13 * e.abs().max(1.0),
                    "mismatch at {x}"
                );
                checked += 1;
            }
        }
        assert_equals_or_more(checked, 50);
    }

    fn assert_equals_or_more(got: usize, want: usize) {
        assert!(got >= want, "only {got} points checked, wanted {want}");
    }
}
