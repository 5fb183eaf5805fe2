//! Command-line surface: computations, verification, and plot-data emission.
//! Complex numbers serialize as {"re": .., "im": ..}, exact rationals as
//! "p/q" strings, grids as "start:stop:count" with an optional trailing "i"
//! for the imaginary axis. Exit codes: 0 pass, 1 usage, 2 identity
//! falsified, 3 numerical budget exceeded.

use crate::error::Error;
use crate::exact::{parse_rat, rat_string, CRat, Rat};
use crate::fredholm::{
    logdet_nystrom, logdet_series, sigma_and_prime, sigma_form_residual, FredholmConfig,
};
use crate::monodromy::{
    cyclic_residuals, eigen_residuals, x_coords, y_coords, MonodromyData,
};
use crate::series::ConfluenceContext;
use crate::umemura::{un_zero_product, UmemuraSequence};
use crate::verify::{run_all, CriterionKind, VerifyOptions};
use crate::C64;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IDENTITY_FALSIFIED: i32 = 2;
pub const EXIT_NUMERICAL_BUDGET: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format {other:?} (expected json or csv)")),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexOut {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexOut {
    fn from(z: C64) -> Self {
        ComplexOut { re: z.re, im: z.im }
    }
}

/// Parse "a", "bi", "a+bi", "a-bi" into a complex number.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t = s.trim().replace(' ', "");
    if let Some(im) = t.strip_suffix('i') {
        // find the split between real and imaginary parts
        let bytes = im.as_bytes();
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'e' && bytes[k - 1] != b'E'
            {
                let re: f64 = im[..k].parse().map_err(|e| format!("bad real part: {e}"))?;
                let imag: f64 = match &im[k..] {
                    "+" => 1.0,
                    "-" => -1.0,
                    rest => rest.parse().map_err(|e| format!("bad imaginary part: {e}"))?,
                };
                return Ok(C64::new(re, imag));
            }
        }
        let imag: f64 = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            rest => rest.parse().map_err(|e| format!("bad imaginary part: {e}"))?,
        };
        return Ok(C64::new(0.0, imag));
    }
    let re: f64 = t.parse().map_err(|e| format!("bad number {t:?}: {e}"))?;
    Ok(C64::new(re, 0.0))
}

/// Parse "start:stop:count" (real axis) or "start:stop:counti" (imaginary).
pub fn parse_grid(s: &str) -> Result<Vec<C64>, String> {
    let (body, imaginary) = match s.strip_suffix('i') {
        Some(b) => (b, true),
        None => (s, false),
    };
    let parts: Vec<&str> = body.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid {s:?} is not start:stop:count"));
    }
    let start: f64 = parts[0].parse().map_err(|e| format!("bad start: {e}"))?;
    let stop: f64 = parts[1].parse().map_err(|e| format!("bad stop: {e}"))?;
    let count: usize = parts[2].parse().map_err(|e| format!("bad count: {e}"))?;
    if count == 0 {
        return Err("grid count must be positive".into());
    }
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let t = if count == 1 {
            start
        } else {
            start + (stop - start) * k as f64 / (count - 1) as f64
        };
        out.push(if imaginary {
            C64::new(0.0, t)
        } else {
            C64::new(t, 0.0)
        });
    }
    Ok(out)
}

fn write_output(path: Option<&str>, content: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, content),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::NonDivisible(_) | Error::HalfIntegerM => EXIT_IDENTITY_FALSIFIED,
        Error::QuadratureDivergence(_)
        | Error::TruncationBudgetExceeded(_)
        | Error::BranchTrackingFailure(_) => EXIT_NUMERICAL_BUDGET,
        _ => EXIT_NUMERICAL_BUDGET,
    }
}

#[derive(Serialize)]
struct UmemuraRow {
    n: i64,
    degree: usize,
    coefficients: Vec<String>,
    at_zero: String,
    phi: String,
    u_at_zero: String,
}

/// `umemura`: s_n coefficient lists (exact rational strings), the origin
/// table s_n(0; m) with its closed form, and u_n(0; m).
pub fn cmd_umemura(
    m: &Rat,
    n_max: i64,
    format: OutputFormat,
    output: Option<&str>,
) -> Result<(), (i32, String)> {
    let mut seq = UmemuraSequence::new(m.clone());
    seq.extend(n_max)
        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let y = m + crate::exact::rat(1, 2);
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let s = seq.s(n);
        let u0 = un_zero_product(n, m).map_err(|e| (exit_code_for(&e), e.to_string()))?;
        rows.push(UmemuraRow {
            n,
            degree: s.degree().unwrap_or(0),
            coefficients: s.coeffs().iter().map(rat_string).collect(),
            at_zero: rat_string(&seq.value_at_zero(n)),
            phi: rat_string(&crate::umemura::phi_closed(n, &y)),
            u_at_zero: rat_string(&u0),
        });
    }
    let content = match format {
        OutputFormat::Json => serde_json::json!({
            "command": "umemura",
            "m": rat_string(m),
            "rows": rows,
        })
        .to_string()
            + "\n",
        OutputFormat::Csv => {
            let mut s = String::from("n,degree,at_zero,phi,u_at_zero,coefficients\n");
            for r in rows {
                s.push_str(&format!(
                    "{},{},{},{},{},\"{}\"\n",
                    r.n,
                    r.degree,
                    r.at_zero,
                    r.phi,
                    r.u_at_zero,
                    r.coefficients.join(";")
                ));
            }
            s
        }
    };
    write_output(output, &content).map_err(|e| (EXIT_USAGE, e.to_string()))
}

#[derive(Serialize)]
struct ConfluenceRow {
    j: i64,
    z: ComplexOut,
    gap_even: Option<f64>,
    gap_odd: Option<f64>,
    flag: Option<String>,
}

/// `confluence`: even/odd gap rows over the j list and z grid, with the
/// fitted decay rate per z.
pub fn cmd_confluence(
    m: &Rat,
    zs: &[C64],
    js: &[i64],
    format: OutputFormat,
    output: Option<&str>,
) -> Result<(), (i32, String)> {
    let ctx = ConfluenceContext::new(m, 60).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let mut rows: Vec<ConfluenceRow> = Vec::new();
    let mut rates = Vec::new();
    for &z in zs {
        let results: Vec<(i64, Result<(f64, f64), Error>)> = js
            .par_iter()
            .map(|&j| (j, ctx.gap(j, z)))
            .collect();
        let mut vals = Vec::new();
        for (j, res) in results {
            match res {
                Ok((e, o)) => {
                    vals.push((j, e));
                    rows.push(ConfluenceRow {
                        j,
                        z: z.into(),
                        gap_even: Some(e),
                        gap_odd: Some(o),
                        flag: None,
                    });
                }
                Err(err @ Error::PoleHit { .. }) => rows.push(ConfluenceRow {
                    j,
                    z: z.into(),
                    gap_even: None,
                    gap_odd: None,
                    flag: Some(format!("PoleHit: {err}")),
                }),
                Err(e) => return Err((exit_code_for(&e), e.to_string())),
            }
        }
        if vals.len() >= 2 {
            let t = crate::asymptotics::TrendReport::fit(
                vals.iter().map(|v| v.0).collect(),
                vals.iter().map(|v| v.1).collect(),
                crate::tolerances::TREND_MIN_RATE,
            );
            rates.push(serde_json::json!({
                "z": ComplexOut::from(z),
                "rate": t.rate_estimate,
                "pass": t.pass,
            }));
        }
    }
    let content = match format {
        OutputFormat::Json => serde_json::json!({
            "command": "confluence",
            "m": rat_string(m),
            "rows": rows,
            "rates": rates,
        })
        .to_string()
            + "\n",
        OutputFormat::Csv => {
            let mut s = String::from("j,z_re,z_im,gap_even,gap_odd\n");
            for r in rows {
                let fmt = |v: Option<f64>| match (&r.flag, v) {
                    (Some(_), _) => "PoleHit".to_string(),
                    (None, Some(x)) => format!("{x:e}"),
                    (None, None) => String::new(),
                };
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.j,
                    r.z.re,
                    r.z.im,
                    fmt(r.gap_even),
                    fmt(r.gap_odd)
                ));
            }
            s
        }
    };
    write_output(output, &content).map_err(|e| (EXIT_USAGE, e.to_string()))
}

#[derive(Serialize)]
struct FredholmRow {
    r: ComplexOut,
    logdet_series: Option<ComplexOut>,
    logdet_nystrom: ComplexOut,
    sigma: ComplexOut,
    sigma_prime: ComplexOut,
    sigma_form_residual: f64,
}

/// `fredholm`: determinant, sigma, and sigma-form residual table over an
/// r grid.
pub fn cmd_fredholm(
    lambda: C64,
    rs: &[C64],
    quad_order: usize,
    series_order: usize,
    format: OutputFormat,
    output: Option<&str>,
) -> Result<(), (i32, String)> {
    let mut cfg = FredholmConfig::new(lambda);
    cfg.quad_order = quad_order;
    cfg.series_order = series_order;
    let mut rows = Vec::new();
    for &r in rs {
        let ld_n = logdet_nystrom(r, &cfg).map_err(|e| (exit_code_for(&e), e.to_string()))?;
        let ld_s = logdet_series(r, &cfg).ok();
        let method = crate::fredholm::default_method(r);
        let (sigma, sigma_prime) =
            sigma_and_prime(r, &cfg, method).map_err(|e| (exit_code_for(&e), e.to_string()))?;
        let resid = sigma_form_residual(r, &cfg, method)
            .map_err(|e| (exit_code_for(&e), e.to_string()))?;
        rows.push(FredholmRow {
            r: r.into(),
            logdet_series: ld_s.map(Into::into),
            logdet_nystrom: ld_n.into(),
            sigma: sigma.into(),
            sigma_prime: sigma_prime.into(),
            sigma_form_residual: resid.norm(),
        });
    }
    let content = match format {
        OutputFormat::Json => serde_json::json!({
            "command": "fredholm",
            "lambda": ComplexOut::from(lambda),
            "rows": rows,
        })
        .to_string()
            + "\n",
        OutputFormat::Csv => {
            let mut s = String::from(
                "r_re,r_im,logdet_series_re,logdet_series_im,logdet_nystrom_re,logdet_nystrom_im,sigma_re,sigma_im,sigma_form_residual\n",
            );
            for row in rows {
                let (lsr, lsi) = row
                    .logdet_series
                    .map(|c| (format!("{:e}", c.re), format!("{:e}", c.im)))
                    .unwrap_or_default();
                s.push_str(&format!(
                    "{},{},{},{},{:e},{:e},{:e},{:e},{:e}\n",
                    row.r.re,
                    row.r.im,
                    lsr,
                    lsi,
                    row.logdet_nystrom.re,
                    row.logdet_nystrom.im,
                    row.sigma.re,
                    row.sigma.im,
                    row.sigma_form_residual
                ));
            }
            s
        }
    };
    write_output(output, &content).map_err(|e| (EXIT_USAGE, e.to_string()))
}

#[derive(Serialize)]
struct MonodromyRow {
    draw: usize,
    cubic_d6: f64,
    cubic_d8: f64,
    cyclic_max: f64,
    eigen_max: f64,
}

/// `monodromy`: residual table for seeded generic draws plus the
/// rational-family specialization block.
pub fn cmd_monodromy(
    draws: usize,
    seed: u64,
    format: OutputFormat,
    output: Option<&str>,
) -> Result<(), (i32, String)> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut rejected = 0usize;
    let mut data = Vec::with_capacity(draws);
    while data.len() < draws {
        // count rejected raw draws for the report
        let d = {
            let candidate = MonodromyData::new(
                C64::new(
                    rand::Rng::gen_range(&mut rng, -2.0..2.0),
                    rand::Rng::gen_range(&mut rng, -2.0..2.0),
                ),
                C64::new(
                    rand::Rng::gen_range(&mut rng, -2.0..2.0),
                    rand::Rng::gen_range(&mut rng, -2.0..2.0),
                ),
                C64::new(
                    rand::Rng::gen_range(&mut rng, -0.5..0.5),
                    rand::Rng::gen_range(&mut rng, -0.5..0.5),
                ),
                C64::new(
                    rand::Rng::gen_range(&mut rng, -0.5..0.5),
                    rand::Rng::gen_range(&mut rng, -0.5..0.5),
                ),
            );
            if candidate.check_generic().is_err() {
                rejected += 1;
                continue;
            }
            candidate
        };
        data.push(d);
    }
    let rows: Vec<MonodromyRow> = data
        .par_iter()
        .enumerate()
        .map(|(i, d)| {
            let p6 = x_coords(d).map(|p| p.residual).unwrap_or(f64::NAN);
            let p8 = y_coords(d, 1).map(|p| p.residual).unwrap_or(f64::NAN);
            let (c1, c2) = cyclic_residuals(d).unwrap_or((f64::NAN, f64::NAN));
            let (e1, e2) = eigen_residuals(d).unwrap_or((f64::NAN, f64::NAN));
            MonodromyRow {
                draw: i,
                cubic_d6: p6,
                cubic_d8: p8,
                cyclic_max: c1.max(c2),
                eigen_max: e1.max(e2),
            }
        })
        .collect();
    // rational specialization block
    let m = C64::new(0.25, 0.0);
    let d = MonodromyData::rational_family(m);
    let y = y_coords(&d, 1).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let rational = serde_json::json!({
        "m": "1/4",
        "y1": ComplexOut::from(y.coords[0]),
        "y2": ComplexOut::from(y.coords[1]),
        "y3": ComplexOut::from(y.coords[2]),
        "cubic_residual": y.residual,
    });
    let content = match format {
        OutputFormat::Json => serde_json::json!({
            "command": "monodromy",
            "seed": seed,
            "rejected_draws": rejected,
            "rows": rows,
            "rational_family": rational,
        })
        .to_string()
            + "\n",
        OutputFormat::Csv => {
            let mut s = String::from("draw,cubic_d6,cubic_d8,cyclic_max,eigen_max\n");
            for r in rows {
                s.push_str(&format!(
                    "{},{:e},{:e},{:e},{:e}\n",
                    r.draw, r.cubic_d6, r.cubic_d8, r.cyclic_max, r.eigen_max
                ));
            }
            s
        }
    };
    write_output(output, &content).map_err(|e| (EXIT_USAGE, e.to_string()))
}

/// `verify`: run the acceptance criteria, print a pass/fail matrix, and map
/// the outcome onto the exit code.
pub fn cmd_verify(only: &[usize], tol_scale: f64, seed: u64) -> i32 {
    let opt = VerifyOptions { tol_scale, seed };
    let results = run_all(&opt, only);
    let mut all_pass = true;
    let mut exact_failed = false;
    println!("criterion                              status   time     detail");
    for r in &results {
        println!(
            "{:>2} {:<34} {}  {:>7.2}s  {}",
            r.id,
            r.name,
            if r.pass { "PASS" } else { "FAIL" },
            r.seconds,
            r.detail
        );
        if !r.pass {
            all_pass = false;
            exact_failed |= r.kind == CriterionKind::Exact;
        }
    }
    let passed = results.iter().filter(|r| r.pass).count();
    println!("{passed}/{} criteria passed", results.len());
    if all_pass {
        EXIT_OK
    } else if exact_failed {
        EXIT_IDENTITY_FALSIFIED
    } else {
        EXIT_NUMERICAL_BUDGET
    }
}

/// Exact parse of the CLI `--m` rational.
pub fn parse_m(s: &str) -> Result<Rat, String> {
    parse_rat(s).ok_or_else(|| format!("--m expects a rational like 1/4, got {s:?}"))
}

/// The z argument of `confluence` wants exact dyadic semantics; this keeps
/// simple decimals exact by routing through a rational when possible.
pub fn z_as_crat(z: C64) -> CRat {
    CRat::new(
        crate::exact::rat_from_f64_exact(z.re).unwrap(),
        crate::exact::rat_from_f64_exact(z.im).unwrap(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("1.5").unwrap(), C64::new(1.5, 0.0));
        assert_eq!(parse_complex("2i").unwrap(), C64::new(0.0, 2.0));
        assert_eq!(parse_complex("1+2i").unwrap(), C64::new(1.0, 2.0));
        assert_eq!(parse_complex("-0.5-0.25i").unwrap(), C64::new(-0.5, -0.25));
        assert_eq!(parse_complex("1e-3+2e-4i").unwrap(), C64::new(1e-3, 2e-4));
        assert!(parse_complex("nonsense").is_err());
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("0:1:3").unwrap();
        assert_eq!(g, vec![C64::new(0.0, 0.0), C64::new(0.5, 0.0), C64::new(1.0, 0.0)]);
        let g = parse_grid("0:4:2i").unwrap();
        assert_eq!(g, vec![C64::new(0.0, 0.0), C64::new(0.0, 4.0)]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn m_parsing() {
        assert_eq!(parse_m("1/4").unwrap(), crate::exact::rat(1, 4));
        assert!(parse_m("x").is_err());
    }
}
