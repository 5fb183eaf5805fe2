//! Umemura polynomials: the bilinear recurrence with exact division, closed
//! forms at the origin, rational-solution values at zero by three routes, the
//! 2j-k moment-determinant identity, and a jet engine for evaluating huge
//! indices at a point.
//!
//! The recurrence runs over scaled integers: for fixed m = a/b every
//! coefficient of every s_n lies in Z[1/(2b)], so one shared power of 2b
//! replaces per-coefficient rational normalization. That turns the extension
//! into plain big-integer convolutions.

use crate::error::{Error, Result};
use crate::exact::{is_half_integer, rat, rat_int, CRat, RatFun, RatPoly, Rat};
use crate::hifloat::{BigFloat, CBig};
use crate::specfun::{dfact_product, gamma_checked};
use crate::C64;
use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

/// Polynomial with coefficients c_k / base^shift.
#[derive(Debug, Clone)]
struct SPoly {
    c: Vec<BigInt>,
    shift: u32,
}

impl SPoly {
    fn one() -> Self {
        SPoly {
            c: vec![BigInt::one()],
            shift: 0,
        }
    }

    fn trim(&mut self) {
        while self.c.last().map_or(false, |x| x.is_zero()) {
            self.c.pop();
        }
    }

    fn mul(&self, rhs: &SPoly) -> SPoly {
        if self.c.is_empty() || rhs.c.is_empty() {
            return SPoly {
                c: Vec::new(),
                shift: 0,
            };
        }
        let mut out = vec![BigInt::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        SPoly {
            c: out,
            shift: self.shift + rhs.shift,
        }
    }

    fn sub(&self, rhs: &SPoly, base: &BigInt) -> SPoly {
        let shift = self.shift.max(rhs.shift);
        let fa = base.pow(shift - self.shift);
        let fb = base.pow(shift - rhs.shift);
        let n = self.c.len().max(rhs.c.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.c.get(k).map(|v| v * &fa).unwrap_or_else(BigInt::zero);
            let b = rhs.c.get(k).map(|v| v * &fb).unwrap_or_else(BigInt::zero);
            out.push(a - b);
        }
        let mut s = SPoly { c: out, shift };
        s.trim();
        s
    }

    fn derivative(&self) -> SPoly {
        if self.c.len() <= 1 {
            return SPoly {
                c: Vec::new(),
                shift: 0,
            };
        }
        SPoly {
            c: self
                .c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, v)| v * BigInt::from(k))
                .collect(),
            shift: self.shift,
        }
    }

    fn mul_x(&self) -> SPoly {
        if self.c.is_empty() {
            return self.clone();
        }
        let mut c = Vec::with_capacity(self.c.len() + 1);
        c.push(BigInt::zero());
        c.extend(self.c.iter().cloned());
        SPoly {
            c,
            shift: self.shift,
        }
    }

    /// Divide out common powers of the base to keep integers small.
    fn reduce(&mut self, base: &BigInt) {
        while self.shift > 0 {
            if self.c.iter().all(|v| (v % base).is_zero()) {
                for v in self.c.iter_mut() {
                    *v = &*v / base;
                }
                self.shift -= 1;
            } else {
                break;
            }
        }
    }

    /// Exact division within Z[1/base]; `NonDivisible` if the quotient does
    /// not exist there.
    fn div_exact(&self, rhs: &SPoly, base: &BigInt) -> Result<SPoly> {
        assert!(!rhs.c.is_empty(), "division by zero polynomial");
        if self.c.is_empty() {
            return Ok(SPoly {
                c: Vec::new(),
                shift: 0,
            });
        }
        if self.c.len() < rhs.c.len() {
            return Err(Error::NonDivisible("degree too small".into()));
        }
        let dlen = rhs.c.len();
        let lead = &rhs.c[dlen - 1];
        let mut rem = self.c.clone();
        let mut extra: u32 = 0;
        let qlen = rem.len() - dlen + 1;
        let mut quo = vec![BigInt::zero(); qlen];
        for qi in (0..qlen).rev() {
            let top = rem[qi + dlen - 1].clone();
            let (mut num, j) = divide_smooth(&top, lead, base)?;
            if j > 0 {
                let f = base.pow(j);
                for v in rem.iter_mut() {
                    *v *= &f;
                }
                for v in quo.iter_mut() {
                    *v *= &f;
                }
                extra += j;
                num = &rem[qi + dlen - 1] / lead;
            }
            if !num.is_zero() {
                for (di, dvc) in rhs.c.iter().enumerate() {
                    rem[qi + di] -= &num * dvc;
                }
            }
            quo[qi] = num;
        }
        if rem[..dlen - 1].iter().any(|v| !v.is_zero()) {
            return Err(Error::NonDivisible("nonzero remainder".into()));
        }
        let shift_i = self.shift as i64 + extra as i64 - rhs.shift as i64;
        let mut out = if shift_i >= 0 {
            SPoly {
                c: quo,
                shift: shift_i as u32,
            }
        } else {
            let f = base.pow((-shift_i) as u32);
            SPoly {
                c: quo.into_iter().map(|v| v * &f).collect(),
                shift: 0,
            }
        };
        out.trim();
        out.reduce(base);
        Ok(out)
    }

    fn to_ratpoly(&self, base: &BigInt) -> RatPoly {
        let den = base.pow(self.shift);
        RatPoly::new(
            self.c
                .iter()
                .map(|v| Rat::new(v.clone(), den.clone()))
                .collect(),
        )
    }
}

/// top / lead as num / base^j with j minimal; error if the reduced
/// denominator has a prime factor outside base.
fn divide_smooth(top: &BigInt, lead: &BigInt, base: &BigInt) -> Result<(BigInt, u32)> {
    if top.is_zero() {
        return Ok((BigInt::zero(), 0));
    }
    let g = top.gcd(lead);
    let mut num = top / &g;
    let mut den = lead / &g;
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    let mut j = 0u32;
    while !den.is_one() {
        let gg = den.gcd(base);
        if gg.is_one() {
            return Err(Error::NonDivisible(format!(
                "denominator {den} is not smooth over the base"
            )));
        }
        num *= base / &gg;
        den /= &gg;
        j += 1;
        if j > 1_000_000 {
            return Err(Error::NonDivisible("runaway base exponent".into()));
        }
    }
    Ok((num, j))
}

/// The sequence s_{-1}, s_0, s_1, ... for a fixed rational m.
/// Entries are produced by exact division; a division failure would falsify
/// polynomiality of the recurrence and is reported as `NonDivisible`.
pub struct UmemuraSequence {
    m: Rat,
    base: BigInt,
    scaled: Vec<SPoly>, // scaled[k] = s_{k-1}
    polys: Vec<RatPoly>,
}

impl UmemuraSequence {
    pub fn new(m: Rat) -> Self {
        let base = m.denom() * BigInt::from(2);
        UmemuraSequence {
            m,
            base,
            scaled: vec![SPoly::one(), SPoly::one()],
            polys: vec![RatPoly::one(), RatPoly::one()],
        }
    }

    pub fn m(&self) -> &Rat {
        &self.m
    }

    /// Largest index n with s_n available.
    pub fn max_index(&self) -> i64 {
        self.polys.len() as i64 - 2
    }

    pub fn s(&self, n: i64) -> &RatPoly {
        assert!(n >= -1 && n <= self.max_index(), "index {n} not computed");
        &self.polys[(n + 1) as usize]
    }

    /// Extend through index `up_to` with
    /// s_{n+1} = [(4x+2m+1) s_n^2 - s_n' s_n - x (s_n'' s_n - (s_n')^2)] / (2 s_{n-1}).
    pub fn extend(&mut self, up_to: i64) -> Result<()> {
        // (4x + 2m + 1) over the base 2b: [2(2a + b), 8b] / base
        let a = self.m.numer().clone();
        let b = self.m.denom().clone();
        let linear = SPoly {
            c: vec![
                (BigInt::from(2) * &a + &b) * BigInt::from(2),
                BigInt::from(8) * &b,
            ],
            shift: 1,
        };
        while self.max_index() < up_to {
            let k = self.scaled.len();
            let sn = &self.scaled[k - 1];
            let snm1 = &self.scaled[k - 2];
            let d1 = sn.derivative();
            let d2 = d1.derivative();
            let sq = sn.mul(sn);
            let numerator = linear
                .mul(&sq)
                .sub(&d1.mul(sn), &self.base)
                .sub(&d2.mul(sn).sub(&d1.mul(&d1), &self.base).mul_x(), &self.base);
            let divisor = SPoly {
                c: snm1.c.iter().map(|v| v * BigInt::from(2)).collect(),
                shift: snm1.shift,
            };
            let next = numerator.div_exact(&divisor, &self.base)?;
            self.polys.push(next.to_ratpoly(&self.base));
            self.scaled.push(next);
        }
        Ok(())
    }

    /// s_n(0; m), exact.
    pub fn value_at_zero(&self, n: i64) -> Rat {
        self.s(n).constant_term()
    }
}

/// phi_n(y) = s_n(0; m) with y = m + 1/2, by the product closed forms.
/// Defined for every y; only multiplications are involved.
pub fn phi_closed(n: i64, y: &Rat) -> Rat {
    assert!(n >= -1);
    if n <= 0 {
        return Rat::one();
    }
    let y2 = y * y;
    if n % 2 == 0 {
        let k = (n / 2) as u64;
        let mut acc = y.pow(k as i32) * (&y2 - Rat::one()).pow(k as i32);
        for j in 1..k {
            let e = (k - j) as i32;
            let even_f = &y2 - rat_int((2 * j as i64) * (2 * j as i64));
            let odd_f = &y2 - rat_int((2 * j as i64 + 1) * (2 * j as i64 + 1));
            acc *= even_f.pow(e) * odd_f.pow(e);
        }
        acc
    } else {
        // phi_{2k+1} = phi_{2k} * y * prod_{j=1}^{k} (y^2 - (2j)^2)
        let k = (n - 1) / 2;
        let mut acc = phi_closed(2 * k, y) * y;
        for j in 1..=k {
            acc *= &y2 - rat_int((2 * j) * (2 * j));
        }
        acc
    }
}

/// u_n(0; m) by the exact finite products. `HalfIntegerM` when a denominator
/// factor vanishes.
pub fn un_zero_product(n: i64, m: &Rat) -> Result<Rat> {
    assert!(n >= 0);
    if is_half_integer(m) {
        return Err(Error::HalfIntegerM);
    }
    let a = m - rat(1, 2);
    let b = m + rat(1, 2);
    let (a2, b2) = (&a * &a, &b * &b);
    let mut acc = Rat::one();
    if n % 2 == 0 {
        for j in 1..=(n / 2) {
            let f = rat_int((2 * j - 1) * (2 * j - 1));
            acc *= (&a2 - &f) / (&b2 - &f);
        }
    } else {
        acc = &a / &b;
        for j in 1..=((n - 1) / 2) {
            let f = rat_int(4 * j * j);
            acc *= (&a2 - &f) / (&b2 - &f);
        }
    }
    Ok(acc)
}

/// u_n(0; m) by the Gamma closed form
/// Gamma(1/4 - m/2 - n/2) Gamma(3/4 - m/2 + n/2)
/// / [Gamma(1/4 - m/2 + n/2) Gamma(3/4 - m/2 - n/2)].
pub fn un_zero_gamma(n: i64, m: C64) -> Result<C64> {
    let half_n = 0.5 * n as f64;
    let a = C64::new(0.25, 0.0) - 0.5 * m;
    let b = C64::new(0.75, 0.0) - 0.5 * m;
    let g1 = gamma_checked(a - half_n)?;
    let g2 = gamma_checked(b + half_n)?;
    let g3 = gamma_checked(a + half_n)?;
    let g4 = gamma_checked(b - half_n)?;
    Ok(g1 * g2 / (g3 * g4))
}

/// Generalized binomial coefficient binom(y, i) over the rationals.
fn binom_rat(y: &Rat, i: u64) -> Rat {
    let mut acc = Rat::one();
    for t in 0..i {
        acc *= (y - rat_int(t as i64)) / rat_int((t + 1) as i64);
    }
    acc
}

/// Reduced moment c_k(x, m): the y^k Taylor coefficient of
/// (1 + y/2)^(m + 1/2) e^(x y), so that the raw moment is 2^(m+1/2) c_k.
/// Zero for k < 0.
pub fn laguerre_moment(k: i64, x: &Rat, m: &Rat) -> Rat {
    if k < 0 {
        return Rat::zero();
    }
    let y = m + rat(1, 2);
    let mut xpow = Rat::one(); // x^j / j!
    let mut acc = Rat::zero();
    for j in 0..=(k as u64) {
        if j > 0 {
            xpow = xpow * x / rat_int(j as i64);
        }
        let i = (k as u64) - j;
        let two_pow = Rat::new(BigInt::one(), BigInt::from(1u64) << i);
        acc += binom_rat(&y, i) * two_pow * &xpow;
    }
    acc
}

/// Exact determinant of a square rational matrix by Gaussian elimination.
pub fn det_rat(mut a: Vec<Vec<Rat>>) -> Rat {
    let n = a.len();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let sub = &f * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// Exact determinant over Gaussian rationals.
pub fn det_crat(mut a: Vec<Vec<CRat>>) -> CRat {
    let n = a.len();
    let mut det = CRat::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return CRat::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = CRat::zero().sub(&det);
        }
        let p = a[col][col].clone();
        det = det.mul(&p);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].div(&p);
            for c in col..n {
                let sub = f.mul(&a[col][c]);
                a[r][c] = a[r][c].sub(&sub);
            }
        }
    }
    det
}

/// Residual of the moment-determinant identity:
/// s_n(x; m) - prod_{l=1}^n (2l-1)!! * 2^E * det(c_{2j-k})_{j,k=1..n}.
///
/// The raw identity carries the scalar 2^(m+1/2) in every moment; factoring
/// it out leaves the combined exponent E = n^2/2 - mn + n(m + 1/2)
/// = n(n+1)/2, an integer for every m, so the whole check runs in exact
/// rational arithmetic. (The sign of the mn term is fixed against a direct
/// Laguerre-determinant oracle at n = 1, 2, 3; see the tests.)
pub fn wronskian_2jk_check(n: i64, x: &Rat, m: &Rat) -> Result<Rat> {
    assert!(n >= 0);
    if n == 0 {
        return Ok(Rat::zero()); // empty determinant = 1 and s_0 = 1
    }
    let mut seq = UmemuraSequence::new(m.clone());
    seq.extend(n)?;
    let sn = seq.s(n).eval_rat(x);

    let nn = n as usize;
    let mut mat = vec![vec![Rat::zero(); nn]; nn];
    for j in 1..=nn {
        for k in 1..=nn {
            mat[j - 1][k - 1] = laguerre_moment(2 * j as i64 - k as i64, x, m);
        }
    }
    let det = det_rat(mat);
    let e = n * (n + 1) / 2;
    let prefactor = Rat::from_integer(dfact_product(n as u64))
        * Rat::from_integer(BigInt::one() << (e as usize));
    Ok(sn - prefactor * det)
}

/// The bare moment determinant D_n(x; m) = det(w_{2j-k}) in reduced form at a
/// Gaussian-rational point: returns det(c_{2j-k}(x)) together with the
/// exponent n(m+1/2) of the factored power of two.
pub fn moment_det_reduced(n: i64, x: &CRat, m: &Rat) -> (CRat, Rat) {
    assert!(n >= 1);
    let nn = n as usize;
    // moments as polynomials in x evaluated at the Gaussian point
    let mut mat = vec![vec![CRat::zero(); nn]; nn];
    for j in 1..=nn {
        for k in 1..=nn {
            let kk = 2 * j as i64 - k as i64;
            mat[j - 1][k - 1] = moment_at_crat(kk, x, m);
        }
    }
    let exponent = rat_int(n) * (m + rat(1, 2));
    (det_crat(mat), exponent)
}

fn moment_at_crat(k: i64, x: &CRat, m: &Rat) -> CRat {
    if k < 0 {
        return CRat::zero();
    }
    let y = m + rat(1, 2);
    let mut xpow = CRat::one();
    let mut acc = CRat::zero();
    for j in 0..=(k as u64) {
        if j > 0 {
            xpow = xpow.mul(x).mul_rat(&rat(1, j as i64));
        }
        let i = (k as u64) - j;
        let two_pow = Rat::new(BigInt::one(), BigInt::from(1u64) << i);
        let w = binom_rat(&y, i) * two_pow;
        acc = acc.add(&xpow.mul_rat(&w));
    }
    acc
}

/// u_n as the reduced ratio s_n(x;m-1) s_{n-1}(x;m) / (s_n(x;m) s_{n-1}(x;m-1)).
pub fn rational_un_from_ratio(n: i64, m: &Rat) -> Result<RatFun> {
    assert!(n >= 0);
    let mut seq_m = UmemuraSequence::new(m.clone());
    let mut seq_m1 = UmemuraSequence::new(m - Rat::one());
    seq_m.extend(n)?;
    seq_m1.extend(n)?;
    let num = seq_m1.s(n).mul(seq_m.s(n - 1));
    let den = seq_m.s(n).mul(seq_m1.s(n - 1));
    Ok(RatFun::new(num, den))
}

/// Values s_k(x0; m) for k = -1..=n_max as capped-precision complex floats,
/// by running the recurrence on truncated Taylor jets at x0. The jet order
/// shrinks as k grows (s_k only needs n_max - k + 2 derivatives downstream),
/// keeping the total cost at O(n_max^3) float operations regardless of how
/// large the exact coefficients would be.
pub fn jet_values_at(m: &Rat, x0: &CRat, n_max: i64, prec: u32) -> Vec<CBig> {
    assert!(n_max >= 0);
    let n = n_max as usize;
    // s_j must stay valid through order 2(n - j): producing s_{j+1} costs two
    // derivative orders. Entry budget for s_{-1}, s_0 is therefore 2n + 3.
    let full = 2 * n + 3;
    let zero = || CBig::zero(prec);
    let mut jets: Vec<Vec<CBig>> = Vec::with_capacity(n + 2);
    let mut one_jet = vec![zero(); full];
    one_jet[0] = CBig::from_re(BigFloat::from_i64(1, prec));
    jets.push(one_jet.clone()); // s_{-1}
    jets.push(one_jet); // s_0

    // linear factor 4x + 2m + 1 as a jet at x0
    let x0b = CBig::from_crat(x0, prec);
    let two_m1 = BigFloat::from_rat(&(rat_int(2) * m + rat_int(1)), prec);
    let four = BigFloat::from_i64(4, prec);
    let mut lin = vec![zero(); full];
    lin[0] = x0b.mul_f(&four).add(&CBig::from_re(two_m1));
    lin[1] = CBig::from_re(four);
    // x as a jet
    let mut xj = vec![zero(); full];
    xj[0] = x0b;
    xj[1] = CBig::from_re(BigFloat::from_i64(1, prec));

    let half = BigFloat::from_rat(&rat(1, 2), prec);
    for k in 0..n {
        // s_{k+1} carries entries through order 2(n-k-1); its inputs were
        // built with exactly two orders more
        let len = (2 * (n - k)).saturating_sub(1).max(1);
        let sn = &jets[k + 1];
        let snm1 = &jets[k];
        let d1 = jet_deriv(sn, len + 1, prec);
        let d2 = jet_deriv(&d1, len, prec);
        let sq = jet_mul(sn, sn, len, prec);
        let t1 = jet_mul(&lin, &sq, len, prec);
        let t2 = jet_mul(&d1, sn, len, prec);
        let inner = jet_sub(
            &jet_mul(&d2, sn, len, prec),
            &jet_mul(&d1, &d1, len, prec),
        );
        let t3 = jet_mul(&xj, &inner, len, prec);
        let num = jet_sub(&jet_sub(&t1, &t2), &t3);
        let mut q = jet_div(&num, snm1, len, prec);
        for c in q.iter_mut() {
            *c = c.mul_f(&half);
        }
        q.resize(full, zero());
        jets.push(q);
    }
    jets.into_iter().map(|j| j[0].clone()).collect()
}

fn jet_mul(a: &[CBig], b: &[CBig], len: usize, prec: u32) -> Vec<CBig> {
    let mut out = vec![CBig::zero(prec); len];
    for i in 0..len.min(a.len()) {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..(len - i).min(b.len()) {
            if !b[j].is_zero() {
                out[i + j] = out[i + j].add(&a[i].mul(&b[j]));
            }
        }
    }
    out
}

fn jet_sub(a: &[CBig], b: &[CBig]) -> Vec<CBig> {
    a.iter().zip(b.iter()).map(|(x, y)| x.sub(y)).collect()
}

fn jet_deriv(a: &[CBig], len: usize, prec: u32) -> Vec<CBig> {
    let mut out = vec![CBig::zero(prec); len];
    for i in 0..len.min(a.len().saturating_sub(1)) {
        out[i] = a[i + 1].mul_f(&BigFloat::from_i64((i + 1) as i64, prec));
    }
    out
}

fn jet_div(a: &[CBig], b: &[CBig], len: usize, prec: u32) -> Vec<CBig> {
    assert!(!b[0].is_zero(), "jet division by a zero-valued jet");
    let mut q = vec![CBig::zero(prec); len];
    for k in 0..len {
        let mut acc = if k < a.len() {
            a[k].clone()
        } else {
            CBig::zero(prec)
        };
        for i in 1..=k.min(b.len() - 1) {
            acc = acc.sub(&b[i].mul(&q[k - i]));
        }
        q[k] = acc.div(&b[0]);
    }
    q
}

/// u_n(x0; m) through the jet route, as a complex double.
pub fn un_value_jet(n: i64, m: &Rat, x0: &CRat, prec: u32) -> Result<C64> {
    assert!(n >= 0);
    let vm = jet_values_at(m, x0, n, prec);
    let vm1 = jet_values_at(&(m - rat_int(1)), x0, n, prec);
    let iv = |v: &[CBig], k: i64| v[(k + 1) as usize].clone();
    let den = iv(&vm, n).mul(&iv(&vm1, n - 1));
    if den.is_zero() {
        return Err(Error::PoleHit {
            abs_den: 0.0,
            threshold: 0.0,
        });
    }
    Ok(iv(&vm1, n).mul(&iv(&vm, n - 1)).div(&den).to_c64())
}
