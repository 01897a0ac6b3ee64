//! Command-line front end: problem ingestion, the
//! recurrence/approximate/validate pipeline, and result serialization.
//!
//! Exit codes: 0 success, 2 invalid input, 3 inconclusive validation,
//! 4 internal invariant breach.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use dfcheb::asymptotics::{convergent_growth, newton_polygon};
use dfcheb::bigfloat::FixedCtx;
use dfcheb::chebpoly::ChebPoly;
use dfcheb::chebrec::{chebyshev_recurrence, singularities};
use dfcheb::oreops::{parse_problem, IvpProblem};
use dfcheb::qpoly::QPoly;
use dfcheb::rat::{decimal_string, parse_rat, rat_string, Rat};
use dfcheb::ratcheb::expand_product;
use dfcheb::solver::{approximate, SolveOutput, DEFAULT_MAX_RETRIES};
use dfcheb::validator::{validate, ValidationReport};
use dfcheb::Error;

#[derive(Parser)]
#[command(
    name = "dfcheb",
    version,
    about = "Chebyshev approximation of solutions of linear ODEs with \
             polynomial coefficients, with certified error enclosures"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the coefficient recurrence of the problem's operator.
    Recurrence {
        /// Problem JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Also print the Newton polygon (slopes and root moduli).
        #[arg(long)]
        polygon: bool,
    },
    /// Compute a degree-d approximation of the solution.
    Approx {
        #[arg(long)]
        input: PathBuf,
        /// Target degree.
        #[arg(long)]
        degree: usize,
        /// Start index for the backward recurrence (default: automatic).
        #[arg(long)]
        start_index: Option<i64>,
        /// Output coefficient file (JSON array of rationals).
        #[arg(long)]
        out: PathBuf,
        /// Print a decimal preview of the coefficients.
        #[arg(long)]
        digits: Option<usize>,
    },
    /// Certify an error enclosure for an existing approximation.
    Validate {
        #[arg(long)]
        input: PathBuf,
        /// Coefficient file of the candidate polynomial.
        #[arg(long)]
        poly: PathBuf,
        /// Expansion tolerance (rational "p/q" or "1e-40"); default is the
        /// squared error heuristic.
        #[arg(long)]
        eps: Option<String>,
        /// Write the full report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Significant digits in decimal renderings.
        #[arg(long, default_value_t = 17)]
        digits: usize,
    },
    /// Approximate and validate in one run.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        start_index: Option<i64>,
        #[arg(long)]
        eps: Option<String>,
        /// Output coefficient file.
        #[arg(long)]
        out: PathBuf,
        /// Output report file.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 17)]
        digits: usize,
    },
    /// Sample a coefficient file as CSV rows `x,value`.
    Sample {
        /// Coefficient file to sample.
        #[arg(long)]
        coeffs: PathBuf,
        /// Number of sample points (>= 2).
        #[arg(long, default_value_t = 101)]
        count: usize,
        /// Decimal digits per value.
        #[arg(long, default_value_t = 17)]
        digits: u32,
        /// Node placement.
        #[arg(long, value_enum, default_value_t = NodeKind::Uniform)]
        nodes: NodeKind,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chebyshev expansion of a rational function with certified accuracy.
    ExpandRational {
        /// Numerator coefficients, monomial basis, low to high ("1,0,-2").
        #[arg(long)]
        num: String,
        /// Denominator coefficients, monomial basis, low to high.
        #[arg(long)]
        den: String,
        /// Accuracy ("p/q" or "1e-20").
        #[arg(long)]
        eps: String,
        /// Output coefficient file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum NodeKind {
    Uniform,
    Chebyshev,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Input(_)
        | Error::DivisionByZero
        | Error::PoleInDomain(_)
        | Error::UnsupportedCondition(_)
        | Error::SingularSystem { .. } => 2,
        Error::Inconclusive(_) | Error::Refinement(_) => 3,
        Error::Internal(_) => 4,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Recurrence { input, polygon } => cmd_recurrence(&input, polygon),
        Cmd::Approx {
            input,
            degree,
            start_index,
            out,
            digits,
        } => cmd_approx(&input, degree, start_index, &out, digits),
        Cmd::Validate {
            input,
            poly,
            eps,
            report,
            digits,
        } => cmd_validate(&input, &poly, eps.as_deref(), report.as_deref(), digits),
        Cmd::Solve {
            input,
            degree,
            start_index,
            eps,
            out,
            report,
            digits,
        } => cmd_solve(
            &input,
            degree,
            start_index,
            eps.as_deref(),
            &out,
            report.as_deref(),
            digits,
        ),
        Cmd::Sample {
            coeffs,
            count,
            digits,
            nodes,
            out,
        } => cmd_sample(&coeffs, count, digits, nodes, out.as_deref()),
        Cmd::ExpandRational { num, den, eps, out } => {
            cmd_expand_rational(&num, &den, &eps, out.as_deref())
        }
    }
}

fn load_problem(path: &Path) -> Result<IvpProblem, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_problem(&text)?.to_unit_interval()
}

fn load_poly(path: &Path) -> Result<ChebPoly, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let v: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    ChebPoly::from_json(&v)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let dir = if dir.as_os_str().is_empty() {
        Path::new(".")
    } else {
        dir
    };
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out"),
        std::process::id()
    ));
    let io_err = |e: std::io::Error| Error::Input(format!("{}: {e}", path.display()));
    std::fs::write(&tmp, bytes).map_err(io_err)?;
    std::fs::rename(&tmp, path).map_err(io_err)
}

fn max_retries() -> u32 {
    std::env::var("DFC_MAX_RETRIES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_RETRIES)
}

/// Accepts `p/q` rationals and `<int>e<exp>` scientific shorthand.
fn parse_tolerance(s: &str) -> Result<Rat, Error> {
    if let Some((mant, exp)) = s.split_once(['e', 'E']) {
        if let (Ok(m), Ok(e)) = (mant.parse::<i64>(), exp.parse::<i64>()) {
            return Ok(dfcheb::rat::rat_i(m) * dfcheb::rat::pow10(e));
        }
    }
    parse_rat(s)
}

fn cmd_recurrence(input: &Path, polygon: bool) -> Result<(), Error> {
    let ivp = load_problem(input)?;
    ivp.op.check()?;
    let rec = chebyshev_recurrence(&ivp.op)?;
    let line = rec
        .describe()
        .into_iter()
        .map(|(k, b)| {
            if k < 0 {
                format!("b_{{{k}}} = {b}")
            } else {
                format!("b_{k} = {b}")
            }
        })
        .collect::<Vec<_>>()
        .join(", ");
    println!("{line}");
    let sing: Vec<String> = singularities(&rec).iter().map(|n| n.to_string()).collect();
    println!("singularities: {{{}}}", sing.join(", "));
    if polygon {
        let np = newton_polygon(&rec);
        for e in &np.edges {
            let mods: Vec<String> = dfcheb::roots::approx_roots(&e.chi)
                .into_iter()
                .map(|(z, m)| format!("{:.6}x{m}", z.norm()))
                .collect();
            println!(
                "edge: slope {}, span {}, chi = {}, |roots| = [{}]",
                rat_string(&e.slope),
                e.span,
                e.chi.to_string_var("a"),
                mods.join(", ")
            );
        }
        if let Ok(g) = convergent_growth(&rec) {
            println!(
                "slowest convergent class: kappa = {}, |alpha| ~ {:.6}",
                rat_string(&g.kappa),
                g.alpha_abs
            );
        }
    }
    Ok(())
}

fn cmd_approx(
    input: &Path,
    degree: usize,
    start_index: Option<i64>,
    out: &Path,
    digits: Option<usize>,
) -> Result<(), Error> {
    let ivp = load_problem(input)?;
    let sol = approximate(&ivp, degree, start_index, max_retries())?;
    write_atomic(out, format_coeffs(&sol.poly).as_bytes())?;
    eprintln!(
        "degree {} approximation, start index {} ({} retries)",
        sol.poly.degree(),
        sol.n_used,
        sol.retries
    );
    if let Some(d) = digits {
        for (n, s) in sol.poly.to_decimal_strings(d).iter().enumerate() {
            println!("u[{n}] = {s}");
        }
    }
    Ok(())
}

fn format_coeffs(p: &ChebPoly) -> String {
    let mut s = serde_json::to_string_pretty(&p.to_json()).expect("array serializes");
    s.push('\n');
    s
}

/// Squared coefficient-difference heuristic for the expansion tolerance:
/// compare against a degree d+10 run and square the difference bound.
fn default_eps(ivp: &IvpProblem, degree: usize, sol: &SolveOutput) -> Result<Rat, Error> {
    use num_traits::{Signed, Zero};
    let finer = approximate(ivp, degree + 10, None, max_retries())?;
    let h = sol.poly.sub(&finer.poly.truncate(degree)).norm_upper()
        + finer
            .poly
            .coeffs()
            .iter()
            .skip(degree + 1)
            .map(|c| c.abs())
            .sum::<Rat>();
    let eps = if h.is_zero() {
        dfcheb::rat::pow10(-40)
    } else {
        &h * &h
    };
    // Clamp from above; exact rationals have no underflow below.
    Ok(eps.min(dfcheb::rat::pow10(-8)))
}

fn report_json(report: &ValidationReport, digits: usize, extra: serde_json::Value) -> String {
    let rat = |x: &Rat| {
        serde_json::json!({
            "rational": rat_string(x),
            "decimal": decimal_string(x, digits),
        })
    };
    let mut v = serde_json::json!({
        "B": rat(&report.upper),
        "b": rat(&report.lower),
        "A": rat(&report.kernel),
        "i": report.iterations,
        "gamma_i": rat(&report.gamma),
        "delta": rat(&report.delta),
        "D": report.diff_degree,
        "epsilon": rat(&report.epsilon),
    });
    if let Some(obj) = v.as_object_mut() {
        if let Some(extra_obj) = extra.as_object() {
            for (k, val) in extra_obj {
                obj.insert(k.clone(), val.clone());
            }
        }
    }
    let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
    s.push('\n');
    s
}

fn cmd_validate(
    input: &Path,
    poly: &Path,
    eps: Option<&str>,
    report_path: Option<&Path>,
    digits: usize,
) -> Result<(), Error> {
    let ivp = load_problem(input)?;
    let p = load_poly(poly)?;
    let eps = match eps {
        Some(s) => parse_tolerance(s)?,
        None => {
            let d = p.degree().max(2);
            let sol = approximate(&ivp, d, None, max_retries())?;
            default_eps(&ivp, d, &sol)?
        }
    };
    let report = validate(&ivp, &p, &eps)?;
    println!(
        "enclosure: {} <= |y - p| <= {}",
        decimal_string(&report.lower, digits.min(6)),
        decimal_string(&report.upper, digits.min(6))
    );
    if let Some(path) = report_path {
        write_atomic(
            path,
            report_json(&report, digits, serde_json::json!({})).as_bytes(),
        )?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    input: &Path,
    degree: usize,
    start_index: Option<i64>,
    eps: Option<&str>,
    out: &Path,
    report_path: Option<&Path>,
    digits: usize,
) -> Result<(), Error> {
    let ivp = load_problem(input)?;
    let t0 = Instant::now();
    let sol = approximate(&ivp, degree, start_index, max_retries())?;
    let approx_ms = t0.elapsed().as_millis() as u64;
    write_atomic(out, format_coeffs(&sol.poly).as_bytes())?;

    let eps = match eps {
        Some(s) => parse_tolerance(s)?,
        None => default_eps(&ivp, degree, &sol)?,
    };
    let t1 = Instant::now();
    let result = validate(&ivp, &sol.poly, &eps);
    let validate_ms = t1.elapsed().as_millis() as u64;
    let timings = serde_json::json!({
        "degree": degree,
        "start_index": sol.n_used,
        "timings_ms": {"approx": approx_ms, "validate": validate_ms},
    });
    match result {
        Ok(report) => {
            println!(
                "enclosure: {} <= |y - p| <= {}",
                decimal_string(&report.lower, digits.min(6)),
                decimal_string(&report.upper, digits.min(6))
            );
            if let Some(path) = report_path {
                write_atomic(path, report_json(&report, digits, timings).as_bytes())?;
            }
            Ok(())
        }
        Err(err) => {
            // Partial report so the computed polynomial stays usable.
            if let Some(path) = report_path {
                let v = serde_json::json!({
                    "error": err.to_string(),
                    "degree": degree,
                    "start_index": sol.n_used,
                    "timings_ms": {"approx": approx_ms, "validate": validate_ms},
                });
                let mut s = serde_json::to_string_pretty(&v).expect("serializes");
                s.push('\n');
                write_atomic(path, s.as_bytes())?;
            }
            Err(err)
        }
    }
}

fn cmd_sample(
    coeffs: &Path,
    count: usize,
    digits: u32,
    nodes: NodeKind,
    out: Option<&Path>,
) -> Result<(), Error> {
    if count < 2 {
        return Err(Error::Input("sample count must be at least 2".to_string()));
    }
    let p = load_poly(coeffs)?;
    let ctx = FixedCtx::new(digits + 12);
    let mut rows = String::from("x,value\n");
    for k in 0..count {
        let x = match nodes {
            NodeKind::Uniform => {
                let t = Rat::new(
                    (2 * k as i64 - (count as i64 - 1)).into(),
                    (count as i64 - 1).into(),
                );
                ctx.from_rat(&t)
            }
            NodeKind::Chebyshev => {
                // cos(pi k / (count - 1)), descending from 1 to -1.
                let angle = ctx.mul(
                    &ctx.pi(),
                    &ctx.div(&ctx.from_i64(k as i64), &ctx.from_i64(count as i64 - 1)),
                );
                ctx.cos(&angle)
            }
        };
        let v = ctx.eval_cheb(&p, &x);
        rows.push_str(&format!(
            "{},{}\n",
            ctx.to_string_digits(&x, digits),
            ctx.to_string_digits(&v, digits)
        ));
    }
    match out {
        Some(path) => write_atomic(path, rows.as_bytes()),
        None => std::io::stdout()
            .write_all(rows.as_bytes())
            .map_err(|e| Error::Input(e.to_string())),
    }
}

fn cmd_expand_rational(
    num: &str,
    den: &str,
    eps: &str,
    out: Option<&Path>,
) -> Result<(), Error> {
    let parse_poly = |s: &str| -> Result<QPoly, Error> {
        let coeffs = s
            .split(',')
            .map(|t| parse_rat(t.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QPoly::from_coeffs(coeffs))
    };
    let a = parse_poly(num)?;
    let b = parse_poly(den)?;
    if b.is_zero() {
        return Err(Error::Input("denominator must be nonzero".to_string()));
    }
    let eps = parse_tolerance(eps)?;
    let result = expand_product(&a, &b, &ChebPoly::one(), &eps)?;
    let text = format_coeffs(&result);
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Input(e.to_string())),
    }
}
