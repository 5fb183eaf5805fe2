//! The acceptance suite: one runner per criterion, shared by the CLI
//! (`painleve3 verify`) and the integration tests. Every tolerance comes
//! from `tolerances`; exact checks compare rationals with no tolerance.

use crate::backlund;
use crate::error::Result;
use crate::exact::{rat, rat_int, rat_to_f64, CRat, Rat};
use crate::fredholm::{
    logdet_nystrom, logdet_series, sigma_form_residual, sigma_series_coeffs_symbolic,
    u_from_fredholm, DetMethod, FredholmConfig,
};
use crate::monodromy::{
    cyclic_residuals, draw_generic, eigen_residuals, x_coords, y_coords, MonodromyData,
    Parity,
};
use crate::series::{d8_initial_value, d8_series, ConfluenceContext};
use crate::asymptotics::{sn0_ratio_deviation, umemura_ratio_rhs, TrendReport};
use crate::tolerances as tol;
use crate::umemura::{
    jet_values_at, phi_closed, rational_un_from_ratio, un_zero_gamma, un_zero_product,
    wronskian_2jk_check, UmemuraSequence,
};
use crate::C64;
use num::Zero;
use rand::SeedableRng;
use std::time::Instant;

/// Whether a criterion rests on exact identities or on numerical tolerances;
/// drives the CLI exit code on failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriterionKind {
    Exact,
    Numeric,
    Declared,
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub kind: CriterionKind,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

/// Scale every numeric tolerance; < 1 tightens (used by the CLI override).
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub tol_scale: f64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol_scale: 1.0,
            seed: 0x5eed_cafe,
        }
    }
}

fn run<F: FnOnce() -> Result<(bool, String)>>(
    id: usize,
    name: &'static str,
    kind: CriterionKind,
    f: F,
) -> CriterionResult {
    let t0 = Instant::now();
    let (pass, detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult {
        id,
        name,
        kind,
        pass,
        detail,
        seconds: t0.elapsed().as_secs_f64(),
    }
}

fn test_ms() -> Vec<Rat> {
    vec![rat_int(0), rat(1, 4), rat(1, 3), rat(2, 5)]
}

/// 1. Three-way origin values: Backlund chain = product formula (exact),
/// Gamma formula within 1e-12 relative, m in {0, 1/4, 1/3, 2/5}, n <= 16.
pub fn c01_three_way_origin(opt: &VerifyOptions) -> CriterionResult {
    let tol = tol::ORIGIN_GAMMA_REL * opt.tol_scale;
    run(1, "three-way origin values", CriterionKind::Exact, || {
        let mut worst: f64 = 0.0;
        for m in test_ms() {
            for n in 0..=16i64 {
                let product = un_zero_product(n, &m)?;
                let chain = backlund::un_at_zero_via_chain(n, &m)?;
                if chain != product {
                    return Ok((
                        false,
                        format!("chain != product at n={n}, m={m}"),
                    ));
                }
                let mc = C64::new(rat_to_f64(&m), 0.0);
                let viag = un_zero_gamma(n, mc)?;
                let exact = rat_to_f64(&product);
                let dev = (viag.re - exact).abs() / exact.abs().max(1.0)
                    + viag.im.abs() / exact.abs().max(1.0);
                worst = worst.max(dev);
            }
        }
        Ok((
            worst <= tol,
            format!("worst Gamma-route relative deviation {worst:.2e} (<= {tol:.0e})"),
        ))
    })
}

/// 2. Polynomiality through n = 20 and chain/ratio agreement through n = 12.
pub fn c02_polynomiality_and_ratio(_opt: &VerifyOptions) -> CriterionResult {
    run(2, "polynomiality and ratio identity", CriterionKind::Exact, || {
        for m in test_ms() {
            let mut seq = UmemuraSequence::new(m.clone());
            seq.extend(20)?; // NonDivisible here falsifies polynomiality
            for n in 0..=20 {
                let d = seq.s(n).degree();
                if d != Some((n * (n + 1) / 2) as usize) {
                    return Ok((false, format!("degree of s_{n} is {d:?} at m={m}")));
                }
            }
        }
        // the chain verifies each Gromak step against the Umemura ratio by
        // exact cross-multiplication; reaching n = 12 proves the identity
        let m = rat(1, 4);
        let chain = backlund::rational_un(12, &m)?;
        let ratio = rational_un_from_ratio(12, &m)?;
        if !chain.equals_cross(&ratio) {
            return Ok((false, "chain and ratio differ at n = 12".into()));
        }
        Ok((true, "exact division, degrees, and n <= 12 chain agreement".into()))
    })
}

/// 3. s_n(0; m) = phi_n(m + 1/2) exactly through n = 20.
pub fn c03_origin_closed_form(_opt: &VerifyOptions) -> CriterionResult {
    run(3, "origin closed form", CriterionKind::Exact, || {
        for m in test_ms() {
            let mut seq = UmemuraSequence::new(m.clone());
            seq.extend(20)?;
            let y = &m + rat(1, 2);
            for n in -1..=20 {
                if seq.value_at_zero(n) != phi_closed(n, &y) {
                    return Ok((false, format!("mismatch at n={n}, m={m}")));
                }
            }
        }
        Ok((true, "exact equality for n <= 20, four m values".into()))
    })
}

/// 4. Symbolic sigma coefficients match the displayed expansion exactly.
pub fn c04_sigma_series_symbolic(_opt: &VerifyOptions) -> CriterionResult {
    run(4, "sigma series coefficients", CriterionKind::Exact, || {
        let s = sigma_series_coeffs_symbolic(4)?;
        let want: [&[(i64, i64)]; 4] = [
            &[(0, 1), (-1, 4)],
            &[(0, 1), (1, 16), (-1, 16)],
            &[(0, 1), (-1, 128), (3, 128), (-1, 64)],
            &[(0, 1), (5, 9216), (-41, 9216), (1, 128), (-1, 256)],
        ];
        for (k, coeffs) in want.iter().enumerate() {
            let got = &s[k];
            for (pow, &(num, den)) in coeffs.iter().enumerate() {
                if got.coeff(pow) != rat(num, den) {
                    return Ok((
                        false,
                        format!("s_{} coefficient of lambda^{pow} differs", k + 1),
                    ));
                }
            }
            if got.degree() != Some(coeffs.len() - 1) {
                return Ok((false, format!("s_{} has unexpected degree", k + 1)));
            }
        }
        Ok((true, "s_1..s_4 match the expansion as polynomials".into()))
    })
}

/// 5. Determinant cross-validation and the lambda = 1 exponential.
pub fn c05_determinant_cross(opt: &VerifyOptions) -> CriterionResult {
    run(5, "determinant cross-validation", CriterionKind::Numeric, || {
        let lam = crate::fredholm::lambda_of_m(C64::new(0.25, 0.0))?;
        let cfg = FredholmConfig::new(lam);
        let cross_tol = tol::DET_CROSS_ROUTE * opt.tol_scale;
        let mut worst: f64 = 0.0;
        for r in [
            C64::new(0.3, 0.0),
            C64::new(-0.5, 0.0),
            C64::new(0.0, 0.8),
            C64::new(0.6, 0.6),
            C64::new(1.0, 0.0),
            C64::new(-0.7, 0.7),
        ] {
            let a = logdet_series(r, &cfg)?;
            let b = logdet_nystrom(r, &cfg)?;
            worst = worst.max((a - b).norm());
        }
        if worst > cross_tol {
            return Ok((false, format!("route gap {worst:.2e} > {cross_tol:.0e}")));
        }
        let cfg1 = FredholmConfig::new(C64::new(1.0, 0.0));
        let one_tol = tol::DET_LAMBDA_ONE * opt.tol_scale;
        let mut worst1: f64 = 0.0;
        for r in [0.5, 2.0, 5.0] {
            let ld = logdet_nystrom(C64::new(r, 0.0), &cfg1)?;
            worst1 = worst1.max((ld + r / 4.0).norm());
        }
        Ok((
            worst1 <= one_tol,
            format!(
                "route gap {worst:.2e} (<= {cross_tol:.0e}); |lnD_1 + r/4| {worst1:.2e} (<= {one_tol:.0e})"
            ),
        ))
    })
}

/// 6. sigma-form residual at r in {0.5, 1, 2, 4} via the Nystrom route.
pub fn c06_sigma_form(opt: &VerifyOptions) -> CriterionResult {
    run(6, "sigma-form residual", CriterionKind::Numeric, || {
        let lam = crate::fredholm::lambda_of_m(C64::new(0.25, 0.0))?;
        let cfg = FredholmConfig::new(lam);
        let bound = tol::SIGMA_FORM_RESIDUAL * opt.tol_scale;
        let mut worst: f64 = 0.0;
        for r in [0.5, 1.0, 2.0, 4.0] {
            let resid = sigma_form_residual(C64::new(r, 0.0), &cfg, DetMethod::Nystrom)?;
            worst = worst.max(resid.norm());
        }
        Ok((
            worst <= bound,
            format!("worst residual {worst:.2e} (<= {bound:.0e})"),
        ))
    })
}

/// 7. Determinant reconstruction of U(z; 1/4) against the Maclaurin series
/// on a 9-point grid with |z| <= 0.1.
pub fn c07_u_reconstruction(opt: &VerifyOptions) -> CriterionResult {
    run(7, "determinant vs series U", CriterionKind::Numeric, || {
        let m = C64::new(0.25, 0.0);
        let series = d8_series(d8_initial_value(m), 60)?;
        let cfg = FredholmConfig::new(C64::new(0.0, 0.0));
        let bound = tol::U_RECONSTRUCTION * opt.tol_scale;
        let mut worst: f64 = 0.0;
        for z in [
            C64::new(0.0, 0.0),
            C64::new(0.05, 0.0),
            C64::new(-0.05, 0.0),
            C64::new(0.0, 0.05),
            C64::new(0.0, -0.05),
            C64::new(0.1, 0.0),
            C64::new(-0.1, 0.0),
            C64::new(0.0, 0.1),
            C64::new(0.07, -0.07),
        ] {
            let via_det = u_from_fredholm(z, m, &cfg)?;
            let via_series = series.eval(z)?;
            worst = worst.max((via_det - via_series).norm());
        }
        Ok((
            worst <= bound,
            format!("worst |route gap| {worst:.2e} (<= {bound:.0e}) over 9 points"),
        ))
    })
}

/// 8. Even/odd confluence gaps at z = 0.1 decay with rate >= 0.7 over
/// j in {4, 8, 16, 32}, and gap(32) <= gap(4)/4.
pub fn c08_confluence_trend(opt: &VerifyOptions) -> CriterionResult {
    run(8, "confluence gap trend", CriterionKind::Numeric, || {
        let m = rat(1, 4);
        let ctx = ConfluenceContext::new(&m, 60)?;
        let z = C64::new(0.1, 0.0);
        let js = [4i64, 8, 16, 32];
        let mut evens = Vec::new();
        let mut odds = Vec::new();
        for &j in &js {
            let (e, o) = ctx.gap(j, z)?;
            evens.push(e);
            odds.push(o);
        }
        let te = TrendReport::fit(js.to_vec(), evens.clone(), tol::TREND_MIN_RATE);
        let to = TrendReport::fit(js.to_vec(), odds.clone(), tol::TREND_MIN_RATE);
        let quarter = evens[3] <= evens[0] / (tol::CONFLUENCE_J32_FACTOR / opt.tol_scale.max(1e-9))
            && odds[3] <= odds[0] / (tol::CONFLUENCE_J32_FACTOR / opt.tol_scale.max(1e-9));
        Ok((
            te.pass && to.pass && quarter,
            format!(
                "even gaps {:?} rate {:.2}; odd gaps {:?} rate {:.2}",
                evens, te.rate_estimate, odds, to.rate_estimate
            ),
        ))
    })
}

/// 9. Umemura ratio trend: |s_2j(z/(2j+1))/s_2j(0) - RHS| decays with rate
/// >= 0.7 over j in {6, 12, 24} at z = 0.05i.
pub fn c09_umemura_ratio_trend(_opt: &VerifyOptions) -> CriterionResult {
    run(9, "Umemura ratio trend", CriterionKind::Numeric, || {
        let m = rat(1, 4);
        let mc = C64::new(0.25, 0.0);
        let series = d8_series(d8_initial_value(mc), 60)?;
        let cfg = FredholmConfig::new(C64::new(0.0, 0.0));
        let z = C64::new(0.0, 0.05);
        let zc = CRat::new(rat_int(0), rat(1, 20));
        let rhs = umemura_ratio_rhs(z, mc, Parity::Even, &series, &cfg)?;
        let js = [6i64, 12, 24];
        let mut gaps = Vec::new();
        for &j in &js {
            let n = 2 * j;
            let x0 = CRat::new(
                zc.re.clone() / rat_int(n + 1),
                zc.im.clone() / rat_int(n + 1),
            );
            let prec = (24 * n as u32).max(512);
            let jets = jet_values_at(&m, &x0, n, prec);
            // divide before leaving extended precision: both sides overflow
            // f64 on their own, the ratio is O(1)
            let sn_0 = crate::hifloat::BigFloat::from_rat(&phi_closed(n, &(&m + rat(1, 2))), prec);
            let ratio = jets[(n + 1) as usize]
                .div(&crate::hifloat::CBig::from_re(sn_0))
                .to_c64();
            gaps.push((ratio - rhs).norm());
        }
        let t = TrendReport::fit(js.to_vec(), gaps.clone(), tol::TREND_MIN_RATE);
        let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
        Ok((
            t.pass && decreasing,
            format!("gaps {:?} fitted rate {:.2}", gaps, t.rate_estimate),
        ))
    })
}

/// 10. Barnes-G origin asymptotics: ratio deviation <= 0.05 at j = 20 and
/// decreasing over j in {5, 10, 20}.
pub fn c10_barnes_asymptotics(opt: &VerifyOptions) -> CriterionResult {
    run(10, "Barnes-G origin asymptotics", CriterionKind::Numeric, || {
        let m = rat(1, 4);
        let bound = tol::BARNES_RATIO_AT_20 * opt.tol_scale;
        let mut devs = Vec::new();
        for j in [5i64, 10, 20] {
            devs.push(sn0_ratio_deviation(j, &m, Parity::Even)?);
        }
        let decreasing = devs.windows(2).all(|w| w[1] < w[0]);
        Ok((
            decreasing && devs[2] <= bound,
            format!("deviations {devs:?} (last <= {bound})"),
        ))
    })
}

/// 11. Monodromy algebra over seeded generic draws plus the rational
/// specialization.
pub fn c11_monodromy_algebra(opt: &VerifyOptions) -> CriterionResult {
    run(11, "monodromy algebra", CriterionKind::Numeric, || {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opt.seed);
        let cubic_tol = tol::CUBIC_RESIDUAL * opt.tol_scale;
        let cyc_tol = tol::CYCLIC_RESIDUAL * opt.tol_scale;
        let eig_tol = tol::EIGEN_RESIDUAL * opt.tol_scale;
        let mut worst_cubic: f64 = 0.0;
        let mut worst_cyc: f64 = 0.0;
        let mut worst_eig: f64 = 0.0;
        for _ in 0..tol::MONODROMY_DRAWS {
            let d = draw_generic(&mut rng);
            let p6 = x_coords(&d)?;
            worst_cubic = worst_cubic.max(p6.residual);
            for choice in [1i8, -1] {
                worst_cubic = worst_cubic.max(y_coords(&d, choice)?.residual);
            }
            let (r1, r2) = cyclic_residuals(&d)?;
            worst_cyc = worst_cyc.max(r1).max(r2);
            let (e1, e2) = eigen_residuals(&d)?;
            worst_eig = worst_eig.max(e1).max(e2);
        }
        if worst_cubic > cubic_tol || worst_cyc > cyc_tol || worst_eig > eig_tol {
            return Ok((
                false,
                format!(
                    "cubic {worst_cubic:.2e}, cyclic {worst_cyc:.2e}, eigen {worst_eig:.2e}"
                ),
            ));
        }
        // rational specialization: y3 = 0 and the displayed (y1, y2)
        let m = C64::new(0.25, 0.0);
        let d = MonodromyData::rational_family(m);
        let p = y_coords(&d, 1)?;
        let i = C64::new(0.0, 1.0);
        let root = (1.0 + (C64::new(0.0, 2.0 * std::f64::consts::PI) * m).exp()).sqrt();
        let want1 = i * (C64::new(0.0, std::f64::consts::PI) * m).exp() / root;
        let want2 = i / root;
        let direct = (p.coords[0] - want1).norm() + (p.coords[1] - want2).norm();
        let negated = (p.coords[0] + want1).norm() + (p.coords[1] + want2).norm();
        let rational_ok = p.coords[2].norm() < 1e-12 && direct.min(negated) < 1e-10;
        Ok((
            rational_ok,
            format!(
                "{} draws: cubic {worst_cubic:.2e}, cyclic {worst_cyc:.2e}, eigen {worst_eig:.2e}; rational y3 = {:.1e}",
                tol::MONODROMY_DRAWS,
                p.coords[2].norm()
            ),
        ))
    })
}

/// 12. Hamiltonian ladder identities exact (certified) for n <= 6 and the
/// large-x expansion pinned at x = 10^3.
pub fn c12_hamiltonian_identities(opt: &VerifyOptions) -> CriterionResult {
    run(12, "Hamiltonian identities", CriterionKind::Exact, || {
        let m = rat(1, 4);
        for n in 1..=6 {
            if !backlund::ladder_identities_certified(n, &m)? {
                return Ok((false, format!("ladder identity falsified at n={n}")));
            }
        }
        let x = rat_int(1000);
        let exact = backlund::tau_logderiv_at(2, &m, &x)?;
        let expansion = backlund::tau_logderiv_expansion(2, &m, &x);
        let gap = rat_to_f64(&(exact - expansion)).abs();
        let bound = tol::TAU_EXPANSION_AT_1E3 * opt.tol_scale;
        Ok((
            gap <= bound,
            format!("identities certified for n <= 6; expansion gap {gap:.2e} (<= {bound:.0e})"),
        ))
    })
}

/// 13. Moment-determinant identity exact for n <= 6 at rational (x, m);
/// float route agrees within 1e-10.
pub fn c13_wronskian_identity(opt: &VerifyOptions) -> CriterionResult {
    run(13, "moment-determinant identity", CriterionKind::Exact, || {
        let points = [
            (rat(1, 3), rat(1, 4)),
            (rat(2, 7), rat(1, 3)),
            (rat(-1, 5), rat_int(0)),
            (rat(1, 2), rat(1, 2) + rat_int(1)), // 2m integral
        ];
        for (x, m) in &points {
            for n in 0..=6 {
                let resid = wronskian_2jk_check(n, x, m)?;
                if !resid.is_zero() {
                    return Ok((
                        false,
                        format!("nonzero residual at n={n}, x={x}, m={m}"),
                    ));
                }
            }
        }
        // float route: same identity assembled in f64
        let bound = tol::WRONSKIAN_FLOAT * opt.tol_scale;
        let (x, m) = (rat(1, 3), rat(1, 4));
        let mut seq = UmemuraSequence::new(m.clone());
        seq.extend(4)?;
        let mut worst: f64 = 0.0;
        for n in 1..=4i64 {
            let nn = n as usize;
            let mut mat = vec![vec![0.0f64; nn]; nn];
            for jj in 1..=nn {
                for kk in 1..=nn {
                    mat[jj - 1][kk - 1] = rat_to_f64(&crate::umemura::laguerre_moment(
                        2 * jj as i64 - kk as i64,
                        &x,
                        &m,
                    ));
                }
            }
            let det = det_f64(mat);
            let pre = rat_to_f64(&Rat::from_integer(crate::specfun::dfact_product(n as u64)))
                * 2f64.powi((n * (n + 1) / 2) as i32);
            let sn = rat_to_f64(&seq.s(n).eval_rat(&x));
            worst = worst.max(((sn - pre * det) / sn.abs().max(1.0)).abs());
        }
        Ok((
            worst <= bound,
            format!("exact residual zero for n <= 6; float route off by {worst:.2e}"),
        ))
    })
}

fn det_f64(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

/// 14. Declared out of desk-scale reach: the generic-seed statements whose
/// verification needs the Riemann-Hilbert solver; substituted by the
/// formula-level cross-checks in criteria 1, 7 and 11 plus the
/// leading-coefficient consistency tests in the asymptotics module.
pub fn c14_declared(_opt: &VerifyOptions) -> CriterionResult {
    run(14, "declared substitutions", CriterionKind::Declared, || {
        Ok((
            true,
            "generic-seed limit theorems replaced by formula-level checks (criteria 1, 7, 11)"
                .into(),
        ))
    })
}

/// All criteria in order. `only` filters by criterion id when nonempty.
pub fn run_all(opt: &VerifyOptions, only: &[usize]) -> Vec<CriterionResult> {
    let runners: Vec<(usize, fn(&VerifyOptions) -> CriterionResult)> = vec![
        (1, c01_three_way_origin),
        (2, c02_polynomiality_and_ratio),
        (3, c03_origin_closed_form),
        (4, c04_sigma_series_symbolic),
        (5, c05_determinant_cross),
        (6, c06_sigma_form),
        (7, c07_u_reconstruction),
        (8, c08_confluence_trend),
        (9, c09_umemura_ratio_trend),
        (10, c10_barnes_asymptotics),
        (11, c11_monodromy_algebra),
        (12, c12_hamiltonian_identities),
        (13, c13_wronskian_identity),
        (14, c14_declared),
    ];
    runners
        .into_iter()
        .filter(|(id, _)| only.is_empty() || only.contains(id))
        .map(|(_, f)| f(opt))
        .collect()
}
