use clap::{Parser, Subcommand};
use painleve3::cli::{
    cmd_confluence, cmd_fredholm, cmd_monodromy, cmd_umemura, cmd_verify, parse_complex,
    parse_grid, parse_m, OutputFormat, EXIT_USAGE,
};
use painleve3::fredholm::lambda_of_m;

/// Rational Painleve-III solutions, their D8 confluence limit, Bessel-kernel
/// Fredholm determinants, and monodromy-manifold algebra, with a built-in
/// cross-validation suite.
#[derive(Parser)]
#[command(name = "painleve3", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit Umemura polynomial coefficients and origin-value tables
    Umemura {
        /// Rational parameter m as "p/q"
        #[arg(long, default_value = "1/4")]
        m: String,
        /// Largest index n
        #[arg(long = "n-max", default_value_t = 8)]
        n_max: i64,
        #[arg(long, default_value = "json")]
        format: String,
        /// Output path (stdout when omitted)
        #[arg(long)]
        output: Option<String>,
    },
    /// Measure the even/odd confluence gaps over a list of j at a z grid
    Confluence {
        #[arg(long, default_value = "1/4")]
        m: String,
        /// Single z like "0.1" or "0.05i", or a grid "start:stop:count[i]"
        #[arg(long, default_value = "0.1")]
        z: String,
        /// Comma-separated j values
        #[arg(long, default_value = "4,8,16,32")]
        j: String,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        output: Option<String>,
    },
    /// Tabulate the Bessel-kernel determinant and its sigma-form residual
    Fredholm {
        /// Take lambda = 1/(1 + e^(2 pi i m)) for this rational m
        #[arg(long = "lambda-m")]
        lambda_m: Option<String>,
        /// Or give lambda directly as "a+bi"
        #[arg(long)]
        lambda: Option<String>,
        /// r grid "start:stop:count[i]"
        #[arg(long = "r-grid", default_value = "0:4:9")]
        r_grid: String,
        #[arg(long = "quad-order", default_value_t = 64)]
        quad_order: usize,
        #[arg(long = "series-order", default_value_t = 40)]
        series_order: usize,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        output: Option<String>,
    },
    /// Residual report for seeded random generic monodromy draws
    Monodromy {
        #[arg(long, default_value_t = 100)]
        draws: usize,
        #[arg(long, default_value_t = 0x5eed_cafe)]
        seed: u64,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        output: Option<String>,
    },
    /// Run the acceptance criteria suite; exit 0 iff everything passes
    Verify {
        /// Comma-separated criterion ids or module names (all when omitted)
        #[arg(long)]
        only: Option<String>,
        /// Scale every numeric tolerance (< 1 tightens)
        #[arg(long = "tol-scale", default_value_t = 1.0)]
        tol_scale: f64,
        #[arg(long, default_value_t = 0x5eed_cafe)]
        seed: u64,
    },
}

fn run() -> i32 {
    let cli = Cli::parse();
    let usage = |msg: String| -> i32 {
        eprintln!("error: {msg}");
        EXIT_USAGE
    };
    match cli.command {
        Command::Umemura {
            m,
            n_max,
            format,
            output,
        } => {
            let m = match parse_m(&m) {
                Ok(v) => v,
                Err(e) => return usage(e),
            };
            let format: OutputFormat = match format.parse() {
                Ok(v) => v,
                Err(e) => return usage(e),
            };
            match cmd_umemura(&m, n_max, format, output.as_deref()) {
                Ok(()) => 0,
                Err((code, msg)) => {
                    eprintln!("error: {msg}");
                    code
                }
            }
        }
        Command::Confluence {
            m,
            z,
            j,
            format,
            output,
        } => {
            let m = match parse_m(&m) {
                Ok(v) => v,
                Err(e) => return usage(e),
            };
            let zs = if z.contains(':') {
                match parse_grid(&z) {
                    Ok(v) => v,
                    Err(e) => return usage(e),
                }
            } else {
                match parse_complex(&z) {
                    Ok(v) => vec![v],
                    Err(e) => return usage(e),
                }
            };
            let js: Result<Vec<i64>, _> = j.split(',').map(|t| t.trim().parse::<i64>()).collect();
            let js = match js {
                Ok(v) if !v.is_empty() && v.iter().all(|&x| x >= 1) => v,
                _ => return usage(format!("bad --j list {j:?}")),
            };
            let format: OutputFormat = match format.parse() {
                Ok(v) => v,
                Err(e) => return usage(e),
            };
            match cmd_confluence(&m, &zs, &js, format, output.as_deref()) {
                Ok(()) => 0,
                Err((code, msg)) => {
                    eprintln!("error: {msg}");
                    code
                }
            }
        }
        Command::Fredholm {
            lambda_m,
            lambda,
            r_grid,
            quad_order,
            series_order,
            format,
            output,
        } => {
            let lam = match (lambda_m, lambda) {
                (Some(ms), None) => {
                    let m = match parse_m(&ms) {
                        Ok(v) => v,
                        Err(e) => return usage(e),
                    };
                    match lambda_of_m(painleve3::C64::new(
                        painleve3::exact::rat_to_f64(&m),
                        0.0,
                    )) {
                        Ok(v) => v,
                        Err(e) => return usage(e.to_string()),
                    }
                }
                (None, Some(ls)) => match parse_complex(&ls) {
                    Ok(v) => v,
                    Err(e) => return usage(e),
                },
                (None, None) => painleve3::C64::new(1.0, 0.0),
                (Some(_), Some(_)) => {
                    return usage("give either --lambda-m or --lambda, not both".into())
                }
            };
            let rs = match parse_grid(&r_grid) {
                Ok(v) => v,
                Err(e) => return usage(e),
            };
            let format: OutputFormat = match format.parse() {
                Ok(v) => v,
                Err(e) => return usage(e),
            };
            match cmd_fredholm(lam, &rs, quad_order, series_order, format, output.as_deref()) {
                Ok(()) => 0,
                Err((code, msg)) => {
                    eprintln!("error: {msg}");
                    code
                }
            }
        }
        Command::Monodromy {
            draws,
            seed,
            format,
            output,
        } => {
            let format: OutputFormat = match format.parse() {
                Ok(v) => v,
                Err(e) => return usage(e),
            };
            match cmd_monodromy(draws, seed, format, output.as_deref()) {
                Ok(()) => 0,
                Err((code, msg)) => {
                    eprintln!("error: {msg}");
                    code
                }
            }
        }
        Command::Verify {
            only,
            tol_scale,
            seed,
        } => {
            let only: Vec<usize> = match only {
                None => Vec::new(),
                Some(s) => {
                    let mut ids = Vec::new();
                    for t in s.split(',').map(str::trim) {
                        // criterion ids or module names
                        if let Ok(n) = t.parse::<usize>() {
                            ids.push(n);
                            continue;
                        }
                        let subset: &[usize] = match t {
                            "exact" => &[1, 2, 3],
                            "umemura" => &[1, 2, 3, 10, 13],
                            "backlund" => &[1, 2, 12],
                            "series" => &[7, 8, 9],
                            "fredholm" => &[4, 5, 6, 7],
                            "monodromy" => &[11],
                            "asymptotics" => &[9, 10],
                            other => {
                                return usage(format!(
                                    "unknown criterion or module {other:?}"
                                ))
                            }
                        };
                        ids.extend_from_slice(subset);
                    }
                    ids.sort_unstable();
                    ids.dedup();
                    ids
                }
            };
            cmd_verify(&only, tol_scale, seed)
        }
    }
}

fn main() {
    std::process::exit(run());
}
