//! Monodromy parameter algebra: Stokes multipliers, eigenvector and
//! connection matrices, the D6 and D8 cubic monodromy manifolds, singular
//! points, the Schlesinger parity map, and the rational-solution
//! specialization.

use crate::error::{Error, Result};
use crate::C64;
use rand::Rng;
use std::f64::consts::PI;

/// Tolerance on each excluded equality in the genericity conditions.
pub const GENERIC_TOL: f64 = 1e-12;

/// 2x2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl Matrix2 {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Matrix2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Matrix2::new(
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        )
    }

    /// diag(f, 1/f), the f^(sigma_3) shorthand.
    pub fn sigma3_power(f: C64) -> Self {
        Matrix2::new(f, C64::new(0.0, 0.0), C64::new(0.0, 0.0), 1.0 / f)
    }

    pub fn mul(&self, rhs: &Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inv(&self) -> Matrix2 {
        let det = self.det();
        Matrix2::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    pub fn sub(&self, rhs: &Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a - rhs.a,
            self.b - rhs.b,
            self.c - rhs.c,
            self.d - rhs.d,
        )
    }

    pub fn scale(&self, f: C64) -> Matrix2 {
        Matrix2::new(self.a * f, self.b * f, self.c * f, self.d * f)
    }

    pub fn norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }
}

/// Which cubic a point lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicKind {
    D6,
    D8,
}

/// A point on one of the two monodromy manifolds, with the recorded residual
/// of its defining cubic relative to the largest monomial magnitude.
#[derive(Debug, Clone)]
pub struct CubicPoint {
    pub kind: CubicKind,
    pub coords: [C64; 3],
    pub residual: f64,
}

/// Monodromy parameters (Theta_0, Theta_inf, mu, eta) with the derived
/// exponentials e_0 = e^(i pi Theta_0/2), e_inf = e^(i pi Theta_inf/2),
/// e_1 = e^(i pi mu), e_2 = e^(i pi eta).
#[derive(Debug, Clone)]
pub struct MonodromyData {
    pub theta0: C64,
    pub theta_inf: C64,
    pub mu: C64,
    pub eta: C64,
}

fn expi(z: C64) -> C64 {
    (C64::new(0.0, PI) * z).exp()
}

impl MonodromyData {
    pub fn new(theta0: C64, theta_inf: C64, mu: C64, eta: C64) -> Self {
        MonodromyData {
            theta0,
            theta_inf,
            mu,
            eta,
        }
    }

    /// Parameters (alpha, beta) via Theta_0 = alpha/4, Theta_inf = 1 - beta/4.
    pub fn from_alpha_beta(alpha: C64, beta: C64, mu: C64, eta: C64) -> Self {
        Self::new(alpha / 4.0, 1.0 - beta / 4.0, mu, eta)
    }

    pub fn alpha(&self) -> C64 {
        4.0 * self.theta0
    }

    pub fn beta(&self) -> C64 {
        4.0 * (1.0 - self.theta_inf)
    }

    pub fn e0(&self) -> C64 {
        expi(self.theta0 / 2.0)
    }

    pub fn e_inf(&self) -> C64 {
        expi(self.theta_inf / 2.0)
    }

    pub fn e1(&self) -> C64 {
        expi(self.mu)
    }

    pub fn e2(&self) -> C64 {
        expi(self.eta)
    }

    /// The monodromy data of the rational-solution family at parameter m:
    /// alpha = -beta = 4m, e_1^2 = i, and e_2 fixed by the gauge with
    /// gamma = delta = 1.
    pub fn rational_family(m: C64) -> Self {
        // e2^2 = e^(-2 pi i m) (1 - i e^(i pi m)) / (1 + i e^(i pi m))
        let q = expi(m);
        let i = C64::new(0.0, 1.0);
        let e2sq = (-2.0 * m * C64::new(0.0, PI)).exp() * (1.0 - i * q) / (1.0 + i * q);
        let e2 = e2sq.sqrt();
        let eta = e2.ln() / C64::new(0.0, PI);
        Self::new(m, m + 1.0, C64::new(0.25, 0.0), eta)
    }

    /// Genericity per the three excluded equalities, each with tolerance
    /// `GENERIC_TOL`.
    pub fn check_generic(&self) -> Result<()> {
        let e1 = self.e1();
        let e2 = self.e2();
        let e1sq = e1 * e1;
        if (e1sq * e1sq - 1.0).norm() < GENERIC_TOL {
            return Err(Error::NonGeneric("e1^4 = 1".into()));
        }
        if (e1 * e2).norm() < GENERIC_TOL {
            return Err(Error::NonGeneric("e1 e2 = 0".into()));
        }
        let einf_sq = self.e_inf().powu(2);
        let e0_sq = self.e0().powu(2);
        for (lhs, what) in [
            (einf_sq, "e1^2 = einf^2"),
            (1.0 / einf_sq, "e1^2 = einf^-2"),
            (e0_sq, "e1^2 = e0^2"),
            (1.0 / e0_sq, "e1^2 = e0^-2"),
        ] {
            if (e1sq - lhs).norm() < GENERIC_TOL {
                return Err(Error::NonGeneric(what.into()));
            }
        }
        Ok(())
    }
}

/// Stokes multipliers (s_1^inf, s_2^inf, s_1^0, s_2^0) in the particular
/// gauge fixed by the parametrization of the connection problem.
pub fn stokes_multipliers(d: &MonodromyData) -> Result<(C64, C64, C64, C64)> {
    d.check_generic()?;
    let e1sq = d.e1().powu(2);
    let einf_sq = d.e_inf().powu(2);
    let e0_sq = d.e0().powu(2);
    let s1_inf = (einf_sq - e1sq) / (e1sq * einf_sq * einf_sq);
    let s2_inf = 1.0 - e1sq * einf_sq;
    let s1_0 = (e1sq - e0_sq) / e1sq;
    let s2_0 = e1sq * e0_sq - 1.0;
    Ok((s1_inf, s2_inf, s1_0, s2_0))
}

/// Upper/lower-triangular Stokes matrices from the multipliers.
fn stokes_matrices(d: &MonodromyData) -> Result<(Matrix2, Matrix2, Matrix2, Matrix2)> {
    let (s1i, s2i, s10, s20) = stokes_multipliers(d)?;
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    Ok((
        Matrix2::new(one, s1i, zero, one),
        Matrix2::new(one, zero, s2i, one),
        Matrix2::new(one, s10, zero, one),
        Matrix2::new(one, zero, s20, one),
    ))
}

/// The unit-determinant eigenvector matrices with (2,2) entries equal to 1.
pub fn eigenvector_matrices(d: &MonodromyData) -> Result<(Matrix2, Matrix2)> {
    d.check_generic()?;
    let e1sq = d.e1().powu(2);
    let einf_sq = d.e_inf().powu(2);
    let e0_sq = d.e0().powu(2);
    let denom = e1sq * e1sq - 1.0;
    let one = C64::new(1.0, 0.0);
    let e_inf_m = Matrix2::new(
        e1sq * (e1sq - einf_sq) / denom,
        -1.0 / (e1sq * einf_sq),
        e1sq * einf_sq * (e1sq * einf_sq - 1.0) / denom,
        one,
    );
    let e_zero_m = Matrix2::new(
        e1sq * (e0_sq * e1sq - 1.0) / (e0_sq * denom),
        (e1sq - e0_sq) / (e1sq * (e0_sq * e1sq - 1.0)),
        e1sq * (1.0 - e0_sq * e1sq) / (e0_sq * denom),
        one,
    );
    Ok((e_inf_m, e_zero_m))
}

/// Connection matrices C^- = E^inf e2^(sigma3) (E^0)^(-1) and C^+ by the two
/// equivalent factorizations (their agreement is asserted to 1e-12).
pub fn connection_matrices(d: &MonodromyData) -> Result<(Matrix2, Matrix2)> {
    let (e_inf_m, e_zero_m) = eigenvector_matrices(d)?;
    let (s1i, s2i, s10, s20) = stokes_matrices_tuple(d)?;
    let e2diag = Matrix2::sigma3_power(d.e2());
    let c_minus = e_inf_m.mul(&e2diag).mul(&e_zero_m.inv());
    let einf_diag = Matrix2::sigma3_power(d.e_inf().powu(2));
    let e0_diag = Matrix2::sigma3_power(d.e0().powu(2));
    let c_plus_a = einf_diag
        .inv()
        .mul(&s2i.inv())
        .mul(&c_minus)
        .mul(&s20)
        .mul(&e0_diag.inv());
    let c_plus_b = s1i.mul(&c_minus).mul(&s10.inv());
    // roundoff scales with the factors each route multiplies, not with the
    // (possibly much smaller) final matrix
    let scale = (s1i.norm() * c_minus.norm() * s10.inv().norm())
        .min(einf_diag.norm() * s2i.norm() * c_minus.norm() * s20.norm() * e0_diag.norm())
        .max(1.0);
    let gap = c_plus_a.sub(&c_plus_b).norm() / scale;
    // guard against transcription errors, which show up at O(1); the
    // rounding-level agreement is asserted in the property tests with the
    // full conditioning scale
    if gap > 1e-9 {
        return Err(Error::NonGeneric(format!(
            "the two C+ factorizations disagree by {gap:e}"
        )));
    }
    Ok((c_minus, c_plus_a))
}

fn stokes_matrices_tuple(d: &MonodromyData) -> Result<(Matrix2, Matrix2, Matrix2, Matrix2)> {
    stokes_matrices(d)
}

/// Relative residual norms of the two eigenvector relations
/// (S1)^-1 e^(-+2 sigma3) (S2)^-1 E = E e1^(2 sigma3) at infinity and zero.
pub fn eigen_residuals(d: &MonodromyData) -> Result<(f64, f64)> {
    let (s1i, s2i, s10, s20) = stokes_matrices(d)?;
    let (e_inf_m, e_zero_m) = eigenvector_matrices(d)?;
    let e1diag = Matrix2::sigma3_power(d.e1().powu(2));
    let m_inf = s1i
        .inv()
        .mul(&Matrix2::sigma3_power(1.0 / d.e_inf().powu(2)))
        .mul(&s2i.inv());
    let r_inf = m_inf.mul(&e_inf_m).sub(&e_inf_m.mul(&e1diag)).norm()
        / (m_inf.norm() * e_inf_m.norm()).max(1.0);
    let m_0 = s10
        .inv()
        .mul(&Matrix2::sigma3_power(d.e0().powu(2)))
        .mul(&s20.inv());
    let r_0 = m_0.mul(&e_zero_m).sub(&e_zero_m.mul(&e1diag)).norm()
        / (m_0.norm() * e_zero_m.norm()).max(1.0);
    Ok((r_inf, r_0))
}

/// Residual norms of the two cyclic conditions, which must both produce the
/// identity matrix.
pub fn cyclic_residuals(d: &MonodromyData) -> Result<(f64, f64)> {
    let (s1i, s2i, s10, s20) = stokes_matrices(d)?;
    let (c_minus, c_plus) = connection_matrices(d)?;
    let einf_diag = Matrix2::sigma3_power(d.e_inf().powu(2));
    let e0_diag = Matrix2::sigma3_power(d.e0().powu(2));
    let id = Matrix2::identity();
    // residuals are relative to the size of the factors: the products must
    // collapse from entries of that magnitude down to the identity
    // about +i: (C-)^-1 (S1^inf)^-1 C+ S1^0 = I
    let scale1 = c_minus.inv().norm() * s1i.inv().norm() * c_plus.norm() * s10.norm();
    let r1 = c_minus
        .inv()
        .mul(&s1i.inv())
        .mul(&c_plus)
        .mul(&s10)
        .sub(&id)
        .norm()
        / scale1.max(1.0);
    // about -i: S2^inf einf^(2 s3) C+ e0^(2 s3) (S2^0)^-1 (C-)^-1 = I
    let scale2 = s2i.norm()
        * einf_diag.norm()
        * c_plus.norm()
        * e0_diag.norm()
        * s20.inv().norm()
        * c_minus.inv().norm();
    let r2 = s2i
        .mul(&einf_diag)
        .mul(&c_plus)
        .mul(&e0_diag)
        .mul(&s20.inv())
        .mul(&c_minus.inv())
        .sub(&id)
        .norm()
        / scale2.max(1.0);
    Ok((r1, r2))
}

fn d6_cubic_residual(x: [C64; 3], e0_sq: C64, einf_sq: C64) -> f64 {
    let [x1, x2, x3] = x;
    let terms = [
        x1 * x2 * x3,
        x1 * x1,
        x2 * x2,
        x2 * (1.0 / e0_sq + einf_sq),
        x1 * (1.0 + einf_sq / e0_sq),
        einf_sq / e0_sq,
    ];
    let scale = terms.iter().map(|t| t.norm()).fold(1e-30, f64::max);
    let sum: C64 = terms.iter().sum();
    sum.norm() / scale
}

fn d8_cubic_residual(y: [C64; 3]) -> f64 {
    let [y1, y2, y3] = y;
    let terms = [y1 * y2 * y3, y1 * y1, y2 * y2, C64::new(1.0, 0.0)];
    let scale = terms.iter().map(|t| t.norm()).fold(1e-30, f64::max);
    let sum: C64 = terms.iter().sum();
    sum.norm() / scale
}

/// (x1, x2, x3) on the D6 cubic from the closed-form parametrization.
pub fn x_coords(d: &MonodromyData) -> Result<CubicPoint> {
    d.check_generic()?;
    let e1sq = d.e1().powu(2);
    let e2sq = d.e2().powu(2);
    let einf_sq = d.e_inf().powu(2);
    let e0_sq = d.e0().powu(2);
    let denom4 = e1sq * e1sq - 1.0;
    let common = e0_sq * e0_sq * e2sq * einf_sq * (1.0 - e0_sq * e1sq) * denom4 * denom4;
    let x1 = e1sq
        * (e0_sq * e2sq * einf_sq * (e1sq * einf_sq - 1.0) + e0_sq * e1sq - 1.0)
        * ((e0_sq * e1sq - 1.0).powu(2)
            + e0_sq * e2sq * einf_sq * (e0_sq - e1sq) * (einf_sq - e1sq))
        / common;
    let x2 = (e0_sq * e2sq * e1sq * einf_sq * (e1sq - einf_sq) + 1.0 - e0_sq * e1sq)
        * ((e0_sq * e1sq - 1.0).powu(2)
            + e0_sq * e1sq * e2sq * einf_sq * (e0_sq - e1sq) * (e1sq * einf_sq - 1.0))
        / common;
    let x3 = e1sq + 1.0 / e1sq;
    let coords = [x1, x2, x3];
    Ok(CubicPoint {
        kind: CubicKind::D6,
        coords,
        residual: d6_cubic_residual(coords, e0_sq, einf_sq),
    })
}

/// (x1, x2, x3) recomputed from the invariant combinations of the connection
/// and Stokes matrices; an independent route used to cross-check `x_coords`.
pub fn x_coords_invariant_route(d: &MonodromyData) -> Result<CubicPoint> {
    let (s1_0m, s2_0m) = {
        let (_, _, s10, s20) = stokes_matrices(d)?;
        (s10, s20)
    };
    let (c_minus, _) = connection_matrices(d)?;
    let e0_sq = d.e0().powu(2);
    let einf_sq = d.e_inf().powu(2);
    // M = S2^0 e0^(-2 sigma3) S1^0
    let m = s2_0m
        .mul(&Matrix2::sigma3_power(1.0 / e0_sq))
        .mul(&s1_0m);
    let (l1, l3, l4) = (c_minus.a, c_minus.c, c_minus.d);
    let i1 = l1 * l4;
    let i2 = m.b * l1 * l3;
    let i4 = m.d;
    let x1 = i1 - 1.0;
    let x2 = -i1 / e0_sq + i2;
    let x3 = i4 + 1.0 / e0_sq;
    let coords = [x1, x2, x3];
    Ok(CubicPoint {
        kind: CubicKind::D6,
        coords,
        residual: d6_cubic_residual(coords, e0_sq, einf_sq),
    })
}

/// (y1, y2, y3) on the D8 cubic from the closed-form parametrization.
/// `root_choice` (+1/-1) flips the common branch of the square root shared
/// by y1 and y2; both signs are points on the cubic describing the same
/// solution.
pub fn y_coords(d: &MonodromyData, root_choice: i8) -> Result<CubicPoint> {
    d.check_generic()?;
    let e1 = d.e1();
    let e2 = d.e2();
    let e0 = d.e0();
    let einf = d.e_inf();
    let e1sq = e1 * e1;
    let e2sq = e2 * e2;
    let e0sq = e0 * e0;
    let einfsq = einf * einf;
    let i = C64::new(0.0, 1.0);
    let root = ((einfsq - e1sq) / (1.0 - e0sq * e1sq)).sqrt()
        * if root_choice >= 0 { 1.0 } else { -1.0 };
    let denom4 = e1sq * e1sq - 1.0;
    let y1 = i * root * (1.0 - e0sq * e1sq + e0sq * e1sq.powu(3) * e2sq * einfsq * (e1sq - einfsq))
        / (e0 * e1 * e2 * einf * (einfsq - e1sq) * denom4);
    let y2 = i * root * e1 * (1.0 - e0sq * e1sq + e0sq * e1sq * e2sq * einfsq * (e1sq - einfsq))
        / (e0 * e2 * einf * (einfsq - e1sq) * denom4);
    let y3 = -e1sq - 1.0 / e1sq;
    let coords = [y1, y2, y3];
    Ok(CubicPoint {
        kind: CubicKind::D8,
        coords,
        residual: d8_cubic_residual(coords),
    })
}

/// Parity of a Schlesinger step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// The monodromy data of the n-th Backlund iterate:
/// e_2 unchanged, Theta_0 -> Theta_0 + n, Theta_inf -> Theta_inf - n, and
/// mu -> mu for even n, mu - eps/2 for odd n with eps = sgn(Re mu)
/// (eps = -1 when Re mu = 0, keeping Re mu in (-1/2, 1/2]).
pub fn schlesinger_update(d: &MonodromyData, n: i64) -> MonodromyData {
    let mu = if n % 2 == 0 {
        d.mu
    } else {
        // eps = sgn(Re mu), with eps = -1 at Re mu = 0 so that the result
        // stays in the strip (-1/2, 1/2]
        let eps = if d.mu.re > 0.0 { 1.0 } else { -1.0 };
        d.mu - eps / 2.0
    };
    MonodromyData {
        theta0: d.theta0 + n as f64,
        theta_inf: d.theta_inf - n as f64,
        mu,
        eta: d.eta,
    }
}

/// The at-most-one singular point of the D6 cubic, with the gradient checked
/// to vanish there.
pub fn singular_points(d: &MonodromyData) -> Option<CubicPoint> {
    let e0_sq = d.e0().powu(2);
    let einf_sq = d.e_inf().powu(2);
    let point = if (e0_sq - einf_sq).norm() < GENERIC_TOL {
        Some([
            C64::new(-1.0, 0.0),
            C64::new(0.0, 0.0),
            e0_sq + 1.0 / e0_sq,
        ])
    } else if (1.0 / e0_sq - einf_sq).norm() < GENERIC_TOL {
        Some([
            C64::new(0.0, 0.0),
            -1.0 / e0_sq,
            e0_sq + 1.0 / e0_sq,
        ])
    } else {
        None
    };
    point.map(|coords| {
        debug_assert!(d6_gradient_norm(coords, e0_sq, einf_sq) < 1e-10);
        CubicPoint {
            kind: CubicKind::D6,
            coords,
            residual: d6_cubic_residual(coords, e0_sq, einf_sq),
        }
    })
}

/// Norm of the gradient of the D6 cubic at a point.
pub fn d6_gradient_norm(x: [C64; 3], e0_sq: C64, einf_sq: C64) -> f64 {
    let [x1, x2, x3] = x;
    let g1 = x2 * x3 + 2.0 * x1 + (1.0 + einf_sq / e0_sq);
    let g2 = x1 * x3 + 2.0 * x2 + (1.0 / e0_sq + einf_sq);
    let g3 = x1 * x2;
    (g1.norm_sqr() + g2.norm_sqr() + g3.norm_sqr()).sqrt()
}

/// Limiting D8 monodromy data along the even/odd subsequence: the Stokes
/// multiplier t = t_1^inf = t_0^0 = -2 cos(2 pi mu_n) = y3, and the
/// connection matrix assembled from the parity-dependent constant matrix V.
pub fn limiting_d8_data(d: &MonodromyData, parity: Parity) -> Result<(C64, Matrix2)> {
    let dn = match parity {
        Parity::Even => schlesinger_update(d, 0),
        Parity::Odd => schlesinger_update(d, 1),
    };
    dn.check_generic()?;
    let e0 = dn.e0();
    let einf = dn.e_inf();
    let e1 = dn.e1();
    let e2 = dn.e2();
    let e1sq = e1 * e1;
    let i = C64::new(0.0, 1.0);
    let root = ((1.0 - e0 * e0 * e1sq) / (einf * einf - e1sq)).sqrt();
    let v = Matrix2::new(
        C64::new(0.0, 0.0),
        -(e0 * e2 * einf) / i / root,
        i / (e0 * e2 * einf) * root,
        C64::new(0.0, 0.0),
    );
    let t = -(e1sq + 1.0 / e1sq);
    let left = Matrix2::new(
        C64::new(1.0, 0.0),
        e1sq,
        -e1sq,
        C64::new(-1.0, 0.0),
    );
    let right = Matrix2::new(e1, e1, -e1sq * e1, -1.0 / e1);
    let c = left.mul(&v).mul(&right.inv());
    // structural identities of the D8 connection matrix
    let det_gap = (c.det() - 1.0).norm();
    let n1_gap = (c.a + c.d).norm();
    let n3_gap = (c.c - (c.b - c.d * t)).norm();
    if det_gap > 1e-9 || n1_gap > 1e-9 || n3_gap > 1e-9 {
        return Err(Error::NonGeneric(format!(
            "limiting connection matrix failed structure checks: det {det_gap:e}, n1 {n1_gap:e}, n3 {n3_gap:e}"
        )));
    }
    Ok((t, c))
}

/// Draw generic monodromy data: mu, eta uniform in the strip
/// (-1/2, 1/2] x [-1, 1]i, Theta_0, Theta_inf uniform in [-2, 2] x [-2, 2]i,
/// rejection-sampled on the genericity conditions.
pub fn draw_generic<R: Rng>(rng: &mut R) -> MonodromyData {
    loop {
        let d = MonodromyData::new(
            C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            C64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)),
            C64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)),
        );
        // keep a buffer above the tolerance so draws are robustly generic
        if matches!(d.check_generic(), Ok(())) && buffered_generic(&d) {
            return d;
        }
    }
}

fn buffered_generic(d: &MonodromyData) -> bool {
    let e1sq = d.e1().powu(2);
    let einf_sq = d.e_inf().powu(2);
    let e0_sq = d.e0().powu(2);
    let margin = 1e-3;
    (e1sq * e1sq - 1.0).norm() > margin
        && (e1sq - einf_sq).norm() > margin
        && (e1sq * einf_sq - 1.0).norm() > margin
        && (e1sq - e0_sq).norm() > margin
        && (e1sq * e0_sq - 1.0).norm() > margin
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0x703a1e5e)
    }

    #[test]
    fn trace_identities_for_stokes_parametrization() {
        let mut r = rng();
        for _ in 0..50 {
            let d = draw_generic(&mut r);
            let (s1i, s2i, s10, s20) = stokes_multipliers(&d).unwrap();
            let e1sq = d.e1().powu(2);
            let einf_sq = d.e_inf().powu(2);
            let e0_sq = d.e0().powu(2);
            let lhs = e1sq + 1.0 / e1sq;
            let rhs_inf = einf_sq + 1.0 / einf_sq + s1i * s2i * einf_sq;
            let rhs_0 = e0_sq + 1.0 / e0_sq + s10 * s20 / e0_sq;
            assert!((lhs - rhs_inf).norm() < 1e-12 * lhs.norm().max(1.0));
            assert!((lhs - rhs_0).norm() < 1e-12 * lhs.norm().max(1.0));
        }
        // rational data: e1^2 = i gives trace 0
        let d = MonodromyData::rational_family(C64::new(0.25, 0.0));
        let e1sq = d.e1().powu(2);
        assert!((e1sq - C64::new(0.0, 1.0)).norm() < 1e-14);
        assert!((e1sq + 1.0 / e1sq).norm() < 1e-14);
    }

    #[test]
    fn eigenvector_matrices_diagonalize_the_monodromy() {
        let mut r = rng();
        for _ in 0..100 {
            let d = draw_generic(&mut r);
            let (s1i, s2i, s10, s20) = stokes_matrices(&d).unwrap();
            let (e_inf_m, e_zero_m) = eigenvector_matrices(&d).unwrap();
            assert!((e_inf_m.det() - 1.0).norm() < 1e-12);
            assert!((e_zero_m.det() - 1.0).norm() < 1e-12);
            assert_eq!(e_inf_m.d, C64::new(1.0, 0.0));
            assert_eq!(e_zero_m.d, C64::new(1.0, 0.0));
            let e1diag = Matrix2::sigma3_power(d.e1().powu(2));
            let m_inf = s1i
                .inv()
                .mul(&Matrix2::sigma3_power(1.0 / d.e_inf().powu(2)))
                .mul(&s2i.inv());
            let res_inf = m_inf.mul(&e_inf_m).sub(&e_inf_m.mul(&e1diag)).norm();
            let m_0 = s10
                .inv()
                .mul(&Matrix2::sigma3_power(d.e0().powu(2)))
                .mul(&s20.inv());
            let res_0 = m_0.mul(&e_zero_m).sub(&e_zero_m.mul(&e1diag)).norm();
            assert!(res_inf < 1e-12 * e_inf_m.norm().max(1.0), "res {res_inf:e}");
            assert!(res_0 < 1e-12 * e_zero_m.norm().max(1.0), "res {res_0:e}");
        }
    }

    #[test]
    fn connection_matrices_satisfy_cyclic_conditions() {
        let mut r = rng();
        for _ in 0..100 {
            let d = draw_generic(&mut r);
            let (c_minus, c_plus) = connection_matrices(&d).unwrap();
            assert!((c_minus.det() - 1.0).norm() < 1e-12 * c_minus.norm().powi(2).max(1.0));
            assert!((c_plus.det() - 1.0).norm() < 1e-12 * c_plus.norm().powi(2).max(1.0));
            let (r1, r2) = cyclic_residuals(&d).unwrap();
            assert!(r1 < 1e-12 * c_plus.norm().max(1.0), "cyclic(+i) {r1:e}");
            assert!(r2 < 1e-12 * c_plus.norm().max(1.0), "cyclic(-i) {r2:e}");
        }
    }

    #[test]
    fn c_plus_two_routes_agree_at_rounding_level() {
        let mut r = rng();
        for _ in 0..100 {
            let d = draw_generic(&mut r);
            let (s1i, s2i, s10, s20) = stokes_matrices(&d).unwrap();
            let (e_inf_m, e_zero_m) = eigenvector_matrices(&d).unwrap();
            let c_minus = e_inf_m
                .mul(&Matrix2::sigma3_power(d.e2()))
                .mul(&e_zero_m.inv());
            let einf_diag = Matrix2::sigma3_power(d.e_inf().powu(2));
            let e0_diag = Matrix2::sigma3_power(d.e0().powu(2));
            let a = einf_diag
                .inv()
                .mul(&s2i.inv())
                .mul(&c_minus)
                .mul(&s20)
                .mul(&e0_diag.inv());
            let b = s1i.mul(&c_minus).mul(&s10.inv());
            // conditioning of the construction: the eigenvector matrices and
            // their inverses dominate the rounding amplification
            let e2n = d.e2().norm().max(1.0 / d.e2().norm());
            let scale = e_inf_m.norm()
                * e_zero_m.inv().norm()
                * e2n
                * s2i.norm().max(s1i.norm())
                * einf_diag.norm().max(1.0)
                * e0_diag.inv().norm().max(1.0);
            assert!(
                a.sub(&b).norm() <= 1e-12 * scale.max(1.0),
                "routes differ by {:e} against scale {scale:e}",
                a.sub(&b).norm()
            );
        }
    }

    #[test]
    fn flipping_e2_flips_c_minus() {
        let mut r = rng();
        let d = draw_generic(&mut r);
        let mut flipped = d.clone();
        flipped.eta = d.eta + 1.0; // e2 -> -e2
        let (c1, _) = connection_matrices(&d).unwrap();
        let (c2, _) = connection_matrices(&flipped).unwrap();
        assert!(c1.scale(C64::new(-1.0, 0.0)).sub(&c2).norm() < 1e-10 * c1.norm());
    }

    #[test]
    fn x_coords_lie_on_the_cubic_and_match_invariant_route() {
        let mut r = rng();
        for _ in 0..100 {
            let d = draw_generic(&mut r);
            let p = x_coords(&d).unwrap();
            assert!(p.residual < 1e-10, "cubic residual {:e}", p.residual);
            let q = x_coords_invariant_route(&d).unwrap();
            for k in 0..3 {
                let gap = (p.coords[k] - q.coords[k]).norm();
                assert!(
                    gap < 1e-9 * p.coords[k].norm().max(1.0),
                    "x{k} differs between routes by {gap:e}"
                );
            }
        }
    }

    #[test]
    fn x3_for_rational_data_vanishes() {
        let d = MonodromyData::rational_family(C64::new(0.25, 0.0));
        let p = x_coords(&d).unwrap();
        assert!(p.coords[2].norm() < 1e-13);
    }

    #[test]
    fn x_coords_invariant_under_e1_inversion() {
        // (e1, e2) -> (1/e1, e2~) with the compensating e2 of the gauge map
        let mut r = rng();
        for _ in 0..20 {
            let d = draw_generic(&mut r);
            let e1sq = d.e1().powu(2);
            let e0sq = d.e0().powu(2);
            let einfsq = d.e_inf().powu(2);
            let e2t = 1.0 / (d.e2() * e0sq * einfsq)
                * (((e1sq - e0sq) * (1.0 - e0sq * e1sq))
                    / ((e1sq - einfsq) * (1.0 - e1sq * einfsq)))
                .sqrt();
            let flipped = MonodromyData {
                mu: -d.mu,
                eta: e2t.ln() / C64::new(0.0, PI),
                ..d.clone()
            };
            let p = x_coords(&d).unwrap();
            let q = x_coords(&flipped).unwrap();
            for k in 0..3 {
                assert!(
                    (p.coords[k] - q.coords[k]).norm() < 1e-9 * p.coords[k].norm().max(1.0),
                    "x{k} not invariant"
                );
            }
        }
    }

    #[test]
    fn y_coords_lie_on_the_cubic_for_both_roots() {
        let mut r = rng();
        for _ in 0..100 {
            let d = draw_generic(&mut r);
            for choice in [1i8, -1] {
                let p = y_coords(&d, choice).unwrap();
                assert!(p.residual < 1e-10, "cubic residual {:e}", p.residual);
            }
        }
    }

    #[test]
    fn y_sign_flip_stays_on_cubic() {
        let mut r = rng();
        let d = draw_generic(&mut r);
        let p = y_coords(&d, 1).unwrap();
        let flipped = [-p.coords[0], -p.coords[1], p.coords[2]];
        assert!(d8_cubic_residual(flipped) < 1e-10);
    }

    #[test]
    fn rational_specialization_matches_displayed_y() {
        let m = C64::new(0.25, 0.0);
        let d = MonodromyData::rational_family(m);
        let p = y_coords(&d, 1).unwrap();
        // y1 = i e^(i pi m)/sqrt(1 + e^(2 pi i m)), y2 = i/sqrt(1+e^(2 pi i m)),
        // y3 = 0, up to the joint sign of (y1, y2)
        let i = C64::new(0.0, 1.0);
        let root = (1.0 + expi(2.0 * m)).sqrt();
        let want1 = i * expi(m) / root;
        let want2 = i / root;
        assert!(p.coords[2].norm() < 1e-12, "y3 = {}", p.coords[2]);
        let direct = (p.coords[0] - want1).norm() + (p.coords[1] - want2).norm();
        let negated = (p.coords[0] + want1).norm() + (p.coords[1] + want2).norm();
        assert!(
            direct.min(negated) < 1e-10,
            "y1 y2 mismatch: got {:?}, want ({want1}, {want2})",
            &p.coords[..2]
        );
        // ratio y1/y2 = e^(i pi m) is sign-free
        let ratio = p.coords[0] / p.coords[1];
        assert!((ratio - expi(m)).norm() < 1e-12);
    }

    #[test]
    fn schlesinger_parity_rules() {
        let d = MonodromyData::new(
            C64::new(0.3, 0.1),
            C64::new(-0.2, 0.4),
            C64::new(0.25, 0.3),
            C64::new(0.1, -0.2),
        );
        assert_eq!(schlesinger_update(&d, 2).mu, d.mu);
        let odd = schlesinger_update(&d, 1);
        assert!((odd.mu - C64::new(-0.25, 0.3)).norm() < 1e-15);
        // Re mu = 0 uses eps = -1: mu -> mu + 1/2
        let d0 = MonodromyData::new(d.theta0, d.theta_inf, C64::new(0.0, 0.3), d.eta);
        let odd0 = schlesinger_update(&d0, 1);
        assert!((odd0.mu - C64::new(0.5, 0.3)).norm() < 1e-15);
        // round trip: two odd steps return Re mu into (-1/2, 1/2]
        for mu_re in [-0.49, -0.1, 0.0, 0.2, 0.5] {
            let dd = MonodromyData::new(d.theta0, d.theta_inf, C64::new(mu_re, 0.1), d.eta);
            let twice = schlesinger_update(&schlesinger_update(&dd, 1), 1);
            assert!(twice.mu.re > -0.5 && twice.mu.re <= 0.5);
        }
        // e0, einf pick up the quarter-period shifts
        let up = schlesinger_update(&d, 3);
        let expect_e0 = expi((d.theta0 + 3.0) / 2.0);
        assert!((up.e0() - expect_e0).norm() < 1e-14);
        let expect_einf = expi((d.theta_inf - 3.0) / 2.0);
        assert!((up.e_inf() - expect_einf).norm() < 1e-14);
    }

    #[test]
    fn singular_point_detection() {
        let mut r = rng();
        let d = draw_generic(&mut r);
        assert!(singular_points(&d).is_none());
        // e0 = einf = 1 hits the second critical case: (-1, 0, 2)
        let crit = MonodromyData::new(
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.23, 0.17),
            C64::new(0.11, 0.0),
        );
        let p = singular_points(&crit).unwrap();
        assert!((p.coords[0] + 1.0).norm() < 1e-14);
        assert!(p.coords[1].norm() < 1e-14);
        assert!((p.coords[2] - 2.0).norm() < 1e-14);
        assert!(d6_gradient_norm(p.coords, crit.e0().powu(2), crit.e_inf().powu(2)) < 1e-12);
    }

    #[test]
    fn limiting_data_reproduces_y_coordinates() {
        let mut r = rng();
        for _ in 0..25 {
            let d = draw_generic(&mut r);
            let (t, c) = limiting_d8_data(&d, Parity::Even).unwrap();
            assert!((c.det() - 1.0).norm() < 1e-11);
            // y1 = n3, y2 = n4, y3 = t, up to the joint (y1, y2) sign
            let p = y_coords(&d, 1).unwrap();
            assert!((t - p.coords[2]).norm() < 1e-10);
            let direct = (c.c - p.coords[0]).norm() + (c.d - p.coords[1]).norm();
            let negated = (c.c + p.coords[0]).norm() + (c.d + p.coords[1]).norm();
            assert!(
                direct.min(negated) < 1e-9 * (c.norm() + 1.0),
                "connection entries do not reproduce (y1, y2)"
            );
        }
    }

    #[test]
    fn limiting_t_vanishes_for_rational_family() {
        let d = MonodromyData::rational_family(C64::new(0.25, 0.0));
        let (t, _) = limiting_d8_data(&d, Parity::Even).unwrap();
        assert!(t.norm() < 1e-13);
    }

    #[test]
    fn nongeneric_draws_are_rejected() {
        let bad = MonodromyData::new(
            C64::new(0.3, 0.0),
            C64::new(0.3, 0.0),
            C64::new(0.5, 0.0), // e1^4 = 1
            C64::new(0.1, 0.0),
        );
        assert!(matches!(bad.check_generic(), Err(Error::NonGeneric(_))));
    }
}
