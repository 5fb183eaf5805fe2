//! Maclaurin-series solvers for the scaled D6 equation and its D8
//! degeneration, the majorant sequence with its certified radius bound, and
//! the confluence-gap measurements behind the even/odd limit theorem.

use crate::error::{Error, Result};
use crate::exact::{rat_from_f64_exact, rat_int, CRat, Rat};
use crate::C64;

/// Coefficients of U'' = (U')^2/U - U'/z + a U^2/z + b/z + g U^3 + d/U.
/// The D6 instance at index n is (4 + alpha/n, 4 + beta/n, 4/n^2, -4/n^2);
/// the D8 equation is (4, 4, 0, 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledParams {
    pub alpha_n: C64,
    pub beta_n: C64,
    pub gamma_n: C64,
    pub delta_n: C64,
}

impl ScaledParams {
    pub fn d6_at_index(alpha: C64, beta: C64, n: u32) -> Self {
        let nf = n as f64;
        ScaledParams {
            alpha_n: 4.0 + alpha / nf,
            beta_n: 4.0 + beta / nf,
            gamma_n: C64::new(4.0 / (nf * nf), 0.0),
            delta_n: C64::new(-4.0 / (nf * nf), 0.0),
        }
    }

    pub fn d8() -> Self {
        ScaledParams {
            alpha_n: C64::new(4.0, 0.0),
            beta_n: C64::new(4.0, 0.0),
            gamma_n: C64::new(0.0, 0.0),
            delta_n: C64::new(0.0, 0.0),
        }
    }

    /// |alpha_n|, |beta_n| <= 5 and |gamma_n|, |delta_n| <= 1, the premise of
    /// the majorant comparison.
    pub fn within_majorant_bounds(&self) -> bool {
        self.alpha_n.norm() <= 5.0
            && self.beta_n.norm() <= 5.0
            && self.gamma_n.norm() <= 1.0
            && self.delta_n.norm() <= 1.0
    }
}

/// A truncated Maclaurin solution analytic at z = 0 with nonzero value there.
#[derive(Debug, Clone)]
pub struct SeriesSolution {
    /// coeffs[k] is the z^k coefficient; coeffs[0] = U(0) != 0.
    pub coeffs: Vec<C64>,
    pub params: ScaledParams,
    /// Empirical validity radius from a root test on the coefficients;
    /// evaluation is restricted to |z| <= radius_bound / 2.
    pub radius_bound: f64,
}

impl SeriesSolution {
    pub fn v0(&self) -> C64 {
        self.coeffs[0]
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Reject points whose truncation tail cannot be certified small: the
    /// root-test radius gives the geometric ratio q = |z|/rho of the tail,
    /// and the last retained coefficient anchors its magnitude. (A blanket
    /// |z| <= rho/2 rule would reject points the series resolves to machine
    /// precision: the empirical rho is intentionally an underestimate.)
    fn check_range(&self, z: C64) -> Result<()> {
        let r = z.norm();
        if r == 0.0 {
            return Ok(());
        }
        let q = r / self.radius_bound;
        let k = self.coeffs.len() - 1;
        let ln_tail = self.coeffs[k].norm().max(1e-300).ln() + (k as f64) * r.ln();
        if q >= 0.9 || (ln_tail - (1.0 - q.min(0.89)).ln()) > -20.7 {
            return Err(Error::TruncationBudgetExceeded(format!(
                "|z| = {r:.3e} against validity radius {:.3e}: tail not below 1e-9",
                self.radius_bound
            )));
        }
        Ok(())
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        self.check_range(z)?;
        Ok(horner_c(&self.coeffs, z))
    }

    pub fn eval_derivative(&self, z: C64) -> Result<C64> {
        self.check_range(z)?;
        let d: Vec<C64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Ok(horner_c(&d, z))
    }

    pub fn eval_second_derivative(&self, z: C64) -> Result<C64> {
        self.check_range(z)?;
        let d: Vec<C64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(2)
            .map(|(k, &c)| c * (k * (k - 1)) as f64)
            .collect();
        Ok(horner_c(&d, z))
    }

    /// Residual of the scaled equation at z, using the truncated series.
    pub fn ode_residual(&self, z: C64) -> Result<C64> {
        let u = self.eval(z)?;
        let du = self.eval_derivative(z)?;
        let ddu = self.eval_second_derivative(z)?;
        let p = &self.params;
        Ok(ddu
            - (du * du / u - du / z
                + p.alpha_n * u * u / z
                + p.beta_n / z
                + p.gamma_n * u * u * u
                + p.delta_n / u))
    }

    /// Coefficients of -1/U as a truncated series (the Z2 Backlund image).
    pub fn reciprocal_negated_coeffs(&self) -> Vec<C64> {
        let u = &self.coeffs;
        let mut w = vec![C64::new(0.0, 0.0); u.len()];
        w[0] = 1.0 / u[0];
        for k in 1..u.len() {
            let mut acc = C64::new(0.0, 0.0);
            for i in 1..=k {
                acc += u[i] * w[k - i];
            }
            w[k] = -acc / u[0];
        }
        w.iter().map(|c| -c).collect()
    }
}

fn horner_c(coeffs: &[C64], z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Maclaurin coefficients of the analytic-at-0 solution with U(0) = v0:
/// v1 = b + a v0^2,
/// v2 = [3 a v0^2 v1 + b v1 + g v0^4 + d]/(4 v0),
/// and for k >= 2 the full Cauchy-product recurrence.
pub fn d6_series(v0: C64, params: ScaledParams, order: usize) -> Result<SeriesSolution> {
    if v0.norm() == 0.0 {
        return Err(Error::ZeroInitialValue);
    }
    assert!(order >= 2);
    let (a, b, g, d) = (
        params.alpha_n,
        params.beta_n,
        params.gamma_n,
        params.delta_n,
    );
    let mut v = Vec::with_capacity(order + 1);
    v.push(v0);
    v.push(b + a * v0 * v0);
    v.push((3.0 * a * v0 * v0 * v[1] + b * v[1] + g * v0.powu(4) + d) / (4.0 * v0));
    for k in 2..order {
        // coefficient of z^k of the polynomial form of the ODE, solved for
        // v_{k+1}
        let mut quad = C64::new(0.0, 0.0);
        for aa in 1..=k {
            let w = (aa * (k + 1)) as f64 - (2 * aa * aa) as f64;
            quad += w * v[aa] * v[k + 1 - aa];
        }
        let mut cubic = C64::new(0.0, 0.0);
        for aa in 0..=k {
            for bb in 0..=(k - aa) {
                cubic += v[aa] * v[bb] * v[k - aa - bb];
            }
        }
        let mut quartic = C64::new(0.0, 0.0);
        if g.norm() != 0.0 {
            for aa in 0..=(k - 1) {
                for bb in 0..=(k - 1 - aa) {
                    for cc in 0..=(k - 1 - aa - bb) {
                        quartic += v[aa] * v[bb] * v[cc] * v[k - 1 - aa - bb - cc];
                    }
                }
            }
        }
        let next =
            (quad + a * cubic + b * v[k] + g * quartic) / (v0 * ((k + 1) * (k + 1)) as f64);
        v.push(next);
    }
    let radius_bound = root_test_radius(&v);
    Ok(SeriesSolution {
        coeffs: v,
        params,
        radius_bound,
    })
}

/// The unique analytic-at-0 D8 solution with U(0) = u0.
pub fn d8_series(u0: C64, order: usize) -> Result<SeriesSolution> {
    d6_series(u0, ScaledParams::d8(), order)
}

/// U(0; m) = tan(pi (m + 1/2) / 2).
pub fn d8_initial_value(m: C64) -> C64 {
    (std::f64::consts::PI * (m + 0.5) / 2.0).tan()
}

/// Empirical convergence radius: reciprocal of the largest |v_k|^(1/k) over
/// the trailing half of the coefficients.
fn root_test_radius(v: &[C64]) -> f64 {
    let mut inv_r: f64 = 0.0;
    for (k, c) in v.iter().enumerate().skip(v.len() / 2) {
        let n = c.norm();
        if n > 0.0 {
            inv_r = inv_r.max(n.powf(1.0 / k as f64));
        }
    }
    if inv_r == 0.0 {
        f64::INFINITY // constant solution
    } else {
        1.0 / inv_r
    }
}

/// Majorant sequence: Y_1 = 5(1 + Y_0^2),
/// Y_2 = [76 Y_0^4 + 100 Y_0^2 + 26]/(4 Y_0^2), and for k >= 2 the positive
/// recurrence dominating the solution coefficients term by term.
pub fn majorant_sequence(y0: f64, order: usize) -> Vec<f64> {
    assert!(y0 > 0.0);
    let mut y = Vec::with_capacity(order + 1);
    y.push(y0);
    y.push(5.0 * (1.0 + y0 * y0));
    y.push((76.0 * y0.powi(4) + 100.0 * y0 * y0 + 26.0) / (4.0 * y0 * y0));
    for k in 2..order {
        let mut quad = 0.0;
        for a in 1..=k {
            quad += y[a] * y[k + 1 - a];
        }
        let mut cubic = 0.0;
        for a in 0..=k {
            for b in 0..=(k - a) {
                cubic += y[a] * y[b] * y[k - a - b];
            }
        }
        let mut quartic = 0.0;
        for a in 0..=(k - 1) {
            for b in 0..=(k - 1 - a) {
                for c in 0..=(k - 1 - a - b) {
                    quartic += y[a] * y[b] * y[c] * y[k - 1 - a - b - c];
                }
            }
        }
        y.push((quad + 5.0 * cubic + 5.0 * y[k] + quartic) / y0);
    }
    y
}

/// Empirical radius of the majorant series by a root test on k <= kmax
/// terms. The raw sequence overflows f64 quickly, so a first pass estimates
/// the growth rate and a second runs the recurrence on the rescaled sequence
/// W_k = Y_k tau^k, which turns every sum homogeneous: the recurrence
/// becomes W_{k+1} = (1/Y_0)[sum W W + 5 tau sum WWW + 5 tau W_k
/// + tau^2 sum WWWW].
pub fn majorant_radius_empirical(y0: f64, kmax: usize) -> f64 {
    // pilot: unscaled until overflow threatens
    let mut pilot_tau = 1.0f64;
    {
        let y = majorant_scaled(y0, kmax, 1.0, 1e250);
        let k = y.len() - 1;
        if k >= 2 {
            pilot_tau = 1.0 / (y[k].powf(1.0 / k as f64));
        }
    }
    let w = majorant_scaled(y0, kmax, pilot_tau, f64::INFINITY);
    let mut inv_r: f64 = 0.0;
    for (k, v) in w.iter().enumerate().skip(w.len() / 2) {
        if *v > 0.0 {
            inv_r = inv_r.max(v.powf(1.0 / k as f64) / pilot_tau);
        }
    }
    1.0 / inv_r
}

/// Scaled majorant recurrence; stops early when values exceed `cap`.
fn majorant_scaled(y0: f64, order: usize, tau: f64, cap: f64) -> Vec<f64> {
    let mut y = vec![y0, 5.0 * (1.0 + y0 * y0) * tau];
    y.push((76.0 * y0.powi(4) + 100.0 * y0 * y0 + 26.0) / (4.0 * y0 * y0) * tau * tau);
    for k in 2..order {
        let mut quad = 0.0;
        for a in 1..=k {
            quad += y[a] * y[k + 1 - a];
        }
        let mut cubic = 0.0;
        for a in 0..=k {
            for b in 0..=(k - a) {
                cubic += y[a] * y[b] * y[k - a - b];
            }
        }
        let mut quartic = 0.0;
        for a in 0..=(k - 1) {
            for b in 0..=(k - 1 - a) {
                for c in 0..=(k - 1 - a - b) {
                    quartic += y[a] * y[b] * y[c] * y[k - 1 - a - b - c];
                }
            }
        }
        let next = (quad + 5.0 * tau * cubic + 5.0 * tau * y[k] + tau * tau * quartic) / y0;
        if !next.is_finite() || next > cap {
            break;
        }
        y.push(next);
    }
    y
}

/// Certified lower bound on the convergence radius of the majorant series:
/// the algebraic equation
///   U^2 - 3 Y0 U + 2 Y0^2 = z [ (82 Y0^4 + 125 Y0^2 + 87/2) z
///                               - 5 U^3 - 5 U - z U^4 ]
/// is continued from (z, U) = (0, Y0) along the positive axis until the
/// tracked root stops being simple; half that abscissa is returned.
pub fn majorant_radius(y0: f64) -> f64 {
    assert!(y0 > 0.0);
    let c = 82.0 * y0.powi(4) + 125.0 * y0 * y0 + 43.5;
    let f = |z: f64, u: f64| {
        u * u - 3.0 * y0 * u + 2.0 * y0 * y0 + 5.0 * z * (u * u * u + u) + z * z * u.powi(4)
            - c * z * z
    };
    let fu = |z: f64, u: f64| {
        2.0 * u - 3.0 * y0 + 5.0 * z * (3.0 * u * u + 1.0) + 4.0 * z * z * u * u * u
    };
    let mut z = 0.0;
    let mut u = y0;
    // |F_U| starts at Y0; stop when the root is nearly double
    let stop = 0.02 * y0;
    let mut step = 1e-3 / (1.0 + c / (y0 * y0));
    loop {
        let zn = z + step;
        let mut un = u;
        let mut converged = false;
        for _ in 0..60 {
            let d = fu(zn, un);
            if d.abs() < stop {
                break;
            }
            let delta = f(zn, un) / d;
            un -= delta;
            if delta.abs() < 1e-14 * (1.0 + un.abs()) {
                converged = true;
                break;
            }
        }
        if converged && fu(zn, un).abs() > stop {
            z = zn;
            u = un;
            step *= 1.3;
        } else {
            step *= 0.5;
            if step < 1e-12 * (1.0 + z) {
                break;
            }
        }
    }
    z / 2.0
}

/// Context for the confluence gaps: the rational family is evaluated through
/// the Umemura jet recurrence (exact structure, capped-precision floats) and
/// the limit through the D8 Maclaurin series.
pub struct ConfluenceContext {
    m: Rat,
    pub limit: SeriesSolution,
}

impl ConfluenceContext {
    pub fn new(m: &Rat, series_order: usize) -> Result<Self> {
        let u0 = d8_initial_value(C64::new(crate::exact::rat_to_f64(m), 0.0));
        let limit = d8_series(u0, series_order)?;
        Ok(ConfluenceContext {
            m: m.clone(),
            limit,
        })
    }

    /// u_n(x; m), with working precision scaled to the coefficient growth.
    pub fn un_value(&self, n: i64, x: &CRat) -> Result<C64> {
        let prec = (24 * n as u32).max(512);
        crate::umemura::un_value_jet(n, &self.m, x, prec)
    }

    /// (even, odd) gaps at z:
    ///   even = |u_{2j}(z/2j) - U(z)|, odd = |u_{2j+1}(z/(2j+1)) + 1/U(z)|.
    /// The argument z is taken at its exact dyadic value.
    pub fn gap(&self, j: i64, z: C64) -> Result<(f64, f64)> {
        let zr = rat_from_f64_exact(z.re).unwrap();
        let zi = rat_from_f64_exact(z.im).unwrap();
        let zc = CRat::new(zr, zi);
        let uval = self.limit.eval(z)?;

        let xe = CRat::new(&zc.re / rat_int(2 * j), &zc.im / rat_int(2 * j));
        let even = (self.un_value(2 * j, &xe)? - uval).norm();

        let xo = CRat::new(&zc.re / rat_int(2 * j + 1), &zc.im / rat_int(2 * j + 1));
        let odd = (self.un_value(2 * j + 1, &xo)? + 1.0 / uval).norm();
        Ok((even, odd))
    }
}

/// One-shot confluence gap; prefer `ConfluenceContext` when scanning over j.
pub fn confluence_gap(j: i64, m: &Rat, z: C64) -> Result<(f64, f64)> {
    let ctx = ConfluenceContext::new(m, 60)?;
    ctx.gap(j, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    /// Exact-rational replay of the coefficient recurrence, the debugging
    /// oracle for rational initial data and parameters (here the D8 instance,
    /// whose parameters are integers).
    fn d8_series_exact_oracle(v0: Rat, order: usize) -> Vec<Rat> {
        use num::Zero;
        let four = rat_int(4);
        let mut v: Vec<Rat> = Vec::with_capacity(order + 1);
        v.push(v0.clone());
        v.push(&four + &four * &v0 * &v0);
        v.push(
            (rat_int(3) * &four * &v0 * &v0 * &v[1] + &four * &v[1])
                / (rat_int(4) * &v0),
        );
        for k in 2..order {
            let mut quad = Rat::zero();
            for a in 1..=k {
                let w = rat_int((a * (k + 1)) as i64) - rat_int((2 * a * a) as i64);
                quad += w * &v[a] * &v[k + 1 - a];
            }
            let mut cubic = Rat::zero();
            for a in 0..=k {
                for b in 0..=(k - a) {
                    cubic += &v[a] * &v[b] * &v[k - a - b];
                }
            }
            let next = (quad + &four * cubic + &four * &v[k])
                / (&v0 * rat_int(((k + 1) * (k + 1)) as i64));
            v.push(next);
        }
        v
    }

    #[test]
    fn float_coefficients_track_the_exact_oracle() {
        let exact = d8_series_exact_oracle(rat_int(1), 25);
        let float = d8_series(C64::new(1.0, 0.0), 25).unwrap();
        for k in 0..=25 {
            let want = crate::exact::rat_to_f64(&exact[k]);
            let got = float.coeffs[k].re;
            assert!(
                (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                "coefficient {k}: {got} vs exact {want}"
            );
            assert!(float.coeffs[k].im.abs() < 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn first_coefficients_match_displays() {
        // v1 = beta_n + alpha_n v0^2
        let p = ScaledParams::d6_at_index(C64::new(1.0, 0.0), C64::new(-1.0, 0.0), 5);
        let s = d6_series(C64::new(2.0, 0.0), p, 6).unwrap();
        let v1 = p.beta_n + p.alpha_n * 4.0;
        assert!((s.coeffs[1] - v1).norm() < 1e-15);
        // D8: v1 = 4 (1 + v0^2)
        let s = d8_series(C64::new(1.0, 0.0), 6).unwrap();
        assert!((s.coeffs[1] - C64::new(8.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn constant_solutions_at_plus_minus_i() {
        let s = d8_series(C64::new(0.0, 1.0), 30).unwrap();
        assert!(s.coeffs[1].norm() < 1e-16);
        for c in &s.coeffs[1..] {
            assert!(c.norm() < 1e-12);
        }
    }

    #[test]
    fn zero_initial_value_rejected() {
        assert!(matches!(
            d8_series(C64::new(0.0, 0.0), 10),
            Err(Error::ZeroInitialValue)
        ));
    }

    #[test]
    fn truncated_series_solves_the_ode() {
        let u0 = d8_initial_value(C64::new(0.25, 0.0));
        let s = d8_series(u0, 40).unwrap();
        let r = s.ode_residual(C64::new(0.05, 0.0)).unwrap();
        assert!(r.norm() < 1e-12, "residual {r:e}");
    }

    #[test]
    fn doubling_order_sharpens_residual_tenfold() {
        let u0 = d8_initial_value(C64::new(0.25, 0.0));
        let s1 = d8_series(u0, 20).unwrap();
        let z = C64::new(s1.radius_bound / 4.0, 0.0);
        let s2 = d8_series(u0, 40).unwrap();
        let r1 = s1.ode_residual(z).unwrap().norm();
        let r2 = s2.ode_residual(z).unwrap().norm();
        assert!(r2 * 10.0 <= r1, "residuals {r1:e} -> {r2:e}");
    }

    #[test]
    fn majorant_first_terms() {
        let y = majorant_sequence(2.0, 4);
        assert_eq!(y[1], 5.0 * (1.0 + 4.0));
        let want = (76.0 * 16.0 + 100.0 * 4.0 + 26.0) / 16.0;
        assert!((y[2] - want).abs() < 1e-12);
    }

    #[test]
    fn majorant_dominates_d8_coefficients() {
        for u0 in [
            d8_initial_value(C64::new(0.25, 0.0)),
            C64::new(1.0, 0.0),
        ] {
            let s = d8_series(u0, 100).unwrap();
            assert!(s.params.within_majorant_bounds());
            let y0 = 2.0 * u0.norm() + 1.0;
            let y = majorant_sequence(y0, 100);
            for k in 0..=100 {
                assert!(
                    s.coeffs[k].norm() <= y[k],
                    "domination fails at k={k}: {} > {}",
                    s.coeffs[k].norm(),
                    y[k]
                );
            }
        }
    }

    #[test]
    fn majorant_radius_is_certified_lower_bound() {
        for y0 in [1.0, 3.0, 5.83] {
            let bound = majorant_radius(y0);
            assert!(bound > 0.0);
            let empirical = majorant_radius_empirical(y0, 200);
            assert!(
                bound <= empirical,
                "bound {bound:e} exceeds empirical radius {empirical:e} at y0={y0}"
            );
        }
    }

    #[test]
    fn backlund_symmetry_of_reciprocal() {
        let u0 = d8_initial_value(C64::new(0.25, 0.0));
        let s = d8_series(u0, 16).unwrap();
        let w = d8_series(-1.0 / u0, 16).unwrap();
        let recip = s.reciprocal_negated_coeffs();
        for k in 0..=12 {
            assert!(
                (w.coeffs[k] - recip[k]).norm() < 1e-9 * w.coeffs[k].norm().max(1.0),
                "coefficient {k} differs"
            );
        }
    }

    #[test]
    fn confluence_gap_at_origin_matches_lemma_quantities() {
        let m = rat(1, 4);
        let ctx = ConfluenceContext::new(&m, 40).unwrap();
        let (even, _) = ctx.gap(4, C64::new(0.0, 0.0)).unwrap();
        let direct = crate::backlund::origin_gap_even(4, &m).unwrap();
        assert!((even - direct).abs() < 1e-12);
        // m = 0: gap against tan(pi/4) = 1
        let ctx0 = ConfluenceContext::new(&rat(0, 1), 40).unwrap();
        let (even0, _) = ctx0.gap(4, C64::new(0.0, 0.0)).unwrap();
        let u8v = crate::umemura::un_zero_product(8, &rat(0, 1)).unwrap();
        let expect = (crate::exact::rat_to_f64(&u8v) - 1.0).abs();
        assert!((even0 - expect).abs() < 1e-12);
    }
}
