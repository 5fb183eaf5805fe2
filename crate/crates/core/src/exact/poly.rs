//! Dense univariate polynomials over Q with exact division.
//!
//! Coefficient index equals degree; trailing zeros are stripped, so the zero
//! polynomial is the empty coefficient list and the leading coefficient is
//! nonzero otherwise.

use super::{rat_to_f64, CRat, Rat};
use crate::error::{Error, Result};
use crate::C64;
use num::bigint::BigInt;
use num::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        RatPoly::new(vec![c])
    }

    /// The monomial c * x^k.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        RatPoly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(0)
    }

    pub fn add(&self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + rhs.coeff(k));
        }
        RatPoly::new(out)
    }

    pub fn sub(&self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - rhs.coeff(k));
        }
        RatPoly::new(out)
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        RatPoly::new(out)
    }

    pub fn scale(&self, c: &Rat) -> RatPoly {
        if c.is_zero() {
            return RatPoly::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Formal derivative.
    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c * Rat::from_integer(BigInt::from(k)));
        }
        RatPoly::new(out)
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.coeffs.len() < divisor.coeffs.len() {
            return (RatPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dlen = divisor.coeffs.len();
        let lead = divisor.leading().unwrap();
        let qlen = rem.len() - dlen + 1;
        let mut quo = vec![Rat::zero(); qlen];
        for qi in (0..qlen).rev() {
            let c = &rem[qi + dlen - 1] / lead;
            if !c.is_zero() {
                for (di, d) in divisor.coeffs.iter().enumerate() {
                    rem[qi + di] -= &c * d;
                }
            }
            quo[qi] = c;
        }
        rem.truncate(dlen - 1);
        (RatPoly::new(quo), RatPoly::new(rem))
    }

    /// Exact division: returns r with divisor * r = self, or `NonDivisible`.
    pub fn div_exact(&self, divisor: &RatPoly) -> Result<RatPoly> {
        let (q, r) = self.div_rem(divisor);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NonDivisible(format!(
                "remainder of degree {:?}",
                r.degree()
            )))
        }
    }

    /// Monic gcd via the primitive polynomial remainder sequence over Z.
    /// Keeps intermediate coefficients near-minimal, which matters for the
    /// Umemura-scale operands.
    pub fn gcd(&self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() {
            return rhs.monic();
        }
        if rhs.is_zero() {
            return self.monic();
        }
        let mut a = self.to_primitive_int();
        let mut b = rhs.to_primitive_int();
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            if b.iter().all(|c| c.is_zero()) {
                let p = RatPoly::new(a.into_iter().map(Rat::from_integer).collect());
                return p.monic();
            }
            let r = pseudo_rem(&a, &b);
            a = b;
            b = primitive_part(r);
        }
    }

    /// Leading coefficient scaled to one.
    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            None => RatPoly::zero(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    /// Clear denominators and divide by integer content; drops the overall
    /// scalar, which gcd computations do not care about.
    fn to_primitive_int(&self) -> Vec<BigInt> {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = num::integer::lcm(den, c.denom().clone());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        primitive_part(ints)
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact evaluation at a Gaussian rational point. This is how the huge
    /// Umemura polynomials are evaluated at complex arguments: no rounding
    /// happens until the final conversion of the value.
    pub fn eval_crat(&self, z: &CRat) -> CRat {
        let mut acc = CRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z);
            acc.re += c;
        }
        acc
    }

    /// Normalized float image: scale = p(0) if nonzero, else the leading
    /// coefficient; returned coefficients are p/scale as f64, so the constant
    /// term maps to exactly 1.0 whenever p(0) != 0.
    pub fn normalized_float(&self) -> (Rat, Vec<f64>) {
        assert!(!self.is_zero(), "cannot normalize the zero polynomial");
        let c0 = self.constant_term();
        let scale = if c0.is_zero() {
            self.leading().unwrap().clone()
        } else {
            c0
        };
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| rat_to_f64(&(c / &scale)))
            .collect();
        (scale, coeffs)
    }

    /// Float evaluation of the normalized polynomial (value of p/scale).
    pub fn eval_normalized(&self, z: C64) -> C64 {
        let (_, coeffs) = self.normalized_float();
        horner(&coeffs, z)
    }

    /// Is gcd(self, rhs) constant? Certified by a gcd over Z_p: a degree-zero
    /// gcd mod p bounds the true gcd degree from above, so the answer `true`
    /// is rigorous. Returns `false` (unknown) if every trial prime degenerates.
    pub fn coprime_certificate(&self, rhs: &RatPoly) -> bool {
        if self.is_zero() || rhs.is_zero() {
            return false;
        }
        const PRIMES: [u64; 4] = [
            4611686018427388039,
            4611686018427387847,
            2305843009213693951,
            1152921504606846883,
        ];
        let a_int = self.to_primitive_int();
        let b_int = rhs.to_primitive_int();
        for &p in &PRIMES {
            let a = reduce_mod(&a_int, p);
            let b = reduce_mod(&b_int, p);
            // leading coefficient must survive reduction for the degree bound
            if a.len() != a_int.len() || b.len() != b_int.len() {
                continue;
            }
            if let Some(g) = gcd_mod(a, b, p) {
                if g == 0 {
                    return true;
                }
                return false;
            }
        }
        false
    }
}

pub fn horner(coeffs: &[f64], z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Pseudo-remainder of integer polynomials: lead(b)^(da-db+1) * a mod b.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    while rem.len() > db && !rem.iter().all(|c| c.is_zero()) {
        while rem.last().map_or(false, |c| c.is_zero()) {
            rem.pop();
        }
        if rem.len() <= db {
            break;
        }
        let shift = rem.len() - 1 - db;
        let top = rem.last().unwrap().clone();
        for c in rem.iter_mut() {
            *c *= lead;
        }
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] -= &top * bc;
        }
        rem.pop();
    }
    rem
}

fn primitive_part(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    if v.is_empty() {
        return v;
    }
    let mut g = BigInt::zero();
    for c in &v {
        g = num::integer::gcd(g, c.abs());
        if g.is_one() {
            return v;
        }
    }
    for c in v.iter_mut() {
        *c = &*c / &g;
    }
    v
}

fn reduce_mod(v: &[BigInt], p: u64) -> Vec<u64> {
    use num::ToPrimitive;
    let bp = BigInt::from(p);
    let mut out: Vec<u64> = v
        .iter()
        .map(|c| (((c % &bp) + &bp) % &bp).to_u64().unwrap())
        .collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    // extended Euclid
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(((t % p as i128 + p as i128) % p as i128) as u64)
}

/// Degree of gcd over Z_p, or None if a leading-coefficient inversion fails.
fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Option<usize> {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let lead_inv = inv_mod(*b.last().unwrap(), p)?;
        let db = b.len() - 1;
        while a.len() > db {
            while a.last() == Some(&0) {
                a.pop();
            }
            if a.len() <= db {
                break;
            }
            let shift = a.len() - 1 - db;
            let c = mul_mod(*a.last().unwrap(), lead_inv, p);
            for (i, &bc) in b.iter().enumerate() {
                let sub = mul_mod(c, bc, p);
                let idx = shift + i;
                a[idx] = (a[idx] + p - sub) % p;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    while a.last() == Some(&0) {
        a.pop();
    }
    a.len().checked_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use proptest::prelude::*;

    fn p(coeffs: &[i64]) -> RatPoly {
        RatPoly::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn mul_basics() {
        // (1+x)(1-x) = 1 - x^2
        assert_eq!(p(&[1, 1]).mul(&p(&[1, -1])), p(&[1, 0, -1]));
        assert_eq!(RatPoly::zero().mul(&p(&[3, 2, 1])), RatPoly::zero());
        // (4x+1)^2 = 16x^2 + 8x + 1  (s_1 term at m = 0, doubled)
        assert_eq!(p(&[1, 4]).mul(&p(&[1, 4])), p(&[1, 8, 16]));
    }

    #[test]
    fn div_exact_basics() {
        assert_eq!(
            p(&[1, 0, -1]).div_exact(&p(&[1, -1])).unwrap(),
            p(&[1, 1])
        );
        let q = p(&[7, -3, 2]);
        assert_eq!(q.div_exact(&RatPoly::one()).unwrap(), q);
        // (x^2+x)/(x+2) leaves remainder 2
        match p(&[0, 1, 1]).div_exact(&p(&[2, 1])) {
            Err(crate::Error::NonDivisible(_)) => {}
            other => panic!("expected NonDivisible, got {other:?}"),
        }
    }

    #[test]
    fn derivative_basics() {
        assert_eq!(RatPoly::one().derivative(), RatPoly::zero());
        assert_eq!(p(&[0, 0, 0, 1]).derivative(), p(&[0, 0, 3]));
        // d/dx (4x + 2m + 1) = 4 for numeric m
        let s1_doubled = RatPoly::new(vec![rat(3, 2), rat_int(4)]);
        assert_eq!(s1_doubled.derivative(), p(&[4]));
    }

    #[test]
    fn normalized_float_rules() {
        let (scale, coeffs) = p(&[2, 4]).normalized_float();
        assert_eq!(scale, rat_int(2));
        assert_eq!(coeffs, vec![1.0, 2.0]);
        // zero constant term falls back to the leading coefficient
        let (scale, coeffs) = p(&[0, 1]).normalized_float();
        assert_eq!(scale, rat_int(1));
        assert_eq!(coeffs, vec![0.0, 1.0]);
        // s_1 = (4x + 2m + 1)/2 at m = 1/4: scale 3/4, coeffs [1, 8/3]
        let s1 = RatPoly::new(vec![rat(3, 4), rat_int(2)]);
        let (scale, coeffs) = s1.normalized_float();
        assert_eq!(scale, rat(3, 4));
        assert_eq!(coeffs[0], 1.0);
        assert!((coeffs[1] - 8.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn gcd_finds_common_factor() {
        let a = p(&[1, 1]).mul(&p(&[2, 0, 1]));
        let b = p(&[1, 1]).mul(&p(&[-3, 1]));
        assert_eq!(a.gcd(&b), p(&[1, 1]).monic());
        assert!(!a.coprime_certificate(&b));
        assert!(p(&[2, 0, 1]).coprime_certificate(&p(&[-3, 1])));
    }

    #[test]
    fn eval_crat_matches_float_on_small_input() {
        let q = RatPoly::new(vec![rat(1, 3), rat(-2, 7), rat_int(5)]);
        let z = CRat::new(rat(1, 2), rat(-3, 5));
        let exact = q.eval_crat(&z).to_c64();
        let (scale, coeffs) = q.normalized_float();
        let approx = horner(&coeffs, z.to_c64()) * rat_to_f64(&scale);
        assert!((exact - approx).norm() < 1e-13 * exact.norm());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn mul_then_div_exact_roundtrip(
            a in proptest::collection::vec(-20i64..20, 1..21),
            b in proptest::collection::vec(-20i64..20, 1..21),
        ) {
            let pa = p(&a);
            let pb = p(&b);
            prop_assume!(!pb.is_zero());
            let prod = pa.mul(&pb);
            let q = prod.div_exact(&pb).unwrap();
            prop_assert_eq!(q, pa);
        }

        #[test]
        fn float_eval_tracks_exact_eval(
            a in proptest::collection::vec((-50i64..50, 1i64..9), 1..12),
            xn in -30i64..30,
            xd in 1i64..17,
        ) {
            let poly = RatPoly::new(a.iter().map(|&(n, d)| rat(n, d)).collect());
            prop_assume!(!poly.is_zero());
            let x = rat(xn, xd);
            let exact = rat_to_f64(&poly.eval_rat(&x));
            let (scale, coeffs) = poly.normalized_float();
            let approx = horner(&coeffs, C64::new(rat_to_f64(&x), 0.0))
                * rat_to_f64(&scale);
            let bound = 1e-13 * exact.abs().max(1.0);
            prop_assert!((approx.re - exact).abs() <= bound);
        }
    }
}
