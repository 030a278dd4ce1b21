//! Command-line front end: field invariants, ideal arithmetic, H0 counts,
//! replete-ideal scans, Poisson-summation checks, and surface-area
//! estimation, with reproducible seeded output.
//!
//! Exit codes: 0 success, 1 usage error, 2 precision/budget exhaustion,
//! 3 tolerance or acceptance check failed, 4 I/O error.

mod parse;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use replete_core::adelic::{
    surface_area, tate_check, vol_b_f64, GrowthConfig, SchwartzTestFunction,
};
use replete_core::harness::{
    emit_csv, estimate_constant, fit_error_exponent, scan_family, summarize, ScanFamily,
};
use replete_core::ideal::{different_ideal, IdelePresentation};
use replete_core::lattice::{count_in_region, enumerate_h0, EnumerationConfig, H0Region};
use replete_core::rat::{fmt_sig, fmt_sig_f64};
use replete_core::{Error, FracIdeal, NumberField, RepleteIdeal, Result};

#[derive(Parser)]
#[command(name = "replete", version, about = "Number-field lattice counts and adelic identities")]
struct Cli {
    /// Field preset: Q, Qi, or Qsqrt:<d> (d squarefree).
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    /// Field spec file (TOML: poly = [...], optional basis); overrides --field.
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Seed for all randomized (Monte Carlo) computations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on worker threads (default: the RAYON_NUM_THREADS environment
    /// variable, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field invariants.
    Field {
        #[command(subcommand)]
        action: FieldAction,
    },
    /// Evaluate an ideal expression: gen:[...] literals with mul(,), inv(),
    /// norm(), eq(,).
    Ideal {
        #[arg(long)]
        expr: String,
    },
    /// Count (and optionally list) lattice points with |alpha|_v <= b_v.
    H0 {
        /// Ideal literal gen:[el;el;...].
        #[arg(long)]
        ideal: String,
        /// Per-place bounds b_v, comma separated.
        #[arg(long)]
        bounds: String,
        /// Also print the members in canonical order.
        #[arg(long)]
        list: bool,
        /// Maximum number of listed members.
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
        /// Enumeration node budget.
        #[arg(long, default_value_t = replete_core::lattice::DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Scan a replete-ideal family: CSV rows plus constant/exponent summary.
    RrScan {
        /// Base replete ideal `gen:[...]|n_1,n_2,...`.
        #[arg(long)]
        base: String,
        /// Schedule `geometric:t0,ratio,k`.
        #[arg(long)]
        schedule: String,
        /// CSV destination (`-` for stdout).
        #[arg(long)]
        out: PathBuf,
        /// Fail (exit 3) if the constant deviation exceeds this.
        #[arg(long)]
        expect_constant: Option<f64>,
        /// Fail (exit 3) if the fitted slope exceeds (1 - 1/n) + 0.1.
        #[arg(long)]
        expect_slope: bool,
        #[arg(long, default_value_t = replete_core::lattice::DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Verify the Poisson summation identity for a Gaussian-ideal test
    /// function.
    TateCheck {
        /// Finite part of the test function, gen:[...].
        #[arg(long)]
        ideal: String,
        /// Gaussian rates, one per place (single value broadcasts).
        #[arg(long, default_value = "1")]
        lambda: String,
        /// Archimedean |y_v|, one per place (single value broadcasts).
        #[arg(long, default_value = "1")]
        y: String,
        /// Finite idele edits `gen:[...]^e;...` (valuations).
        #[arg(long)]
        y_finite: Option<String>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 10.0)]
        trunc: f64,
    },
    /// Minkowski growth table and surface-area slope for product regions.
    Surface {
        /// Region E: per-place shapes `int:lo,hi;disc:r;rect:x0,x1,y0,y1`.
        #[arg(long)]
        e: String,
        /// Region D (same shape grammar).
        #[arg(long)]
        d: String,
        /// Decreasing dilation factors.
        #[arg(long, default_value = "1/2,1/4,1/8,1/16")]
        t_list: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Fail (exit 2) if a Monte Carlo CI exceeds this.
        #[arg(long)]
        max_ci: Option<f64>,
    },
}

#[derive(Subcommand)]
enum FieldAction {
    /// Print degree, signature, discriminant, places, and the different.
    Info,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version are not errors.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    if let Some(n) = cli.threads {
        // Overrides RAYON_NUM_THREADS when set.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::PrecisionExceeded { .. }
        | Error::NodeBudgetExceeded { .. }
        | Error::ResultCapExceeded { .. }
        | Error::RootIsolation
        | Error::TailBound { .. }
        | Error::CiTooWide { .. } => 2,
        Error::NonMonotoneQuotient { .. } | Error::ConventionValidation(..) => 3,
        Error::Io(..) => 4,
        Error::ToleranceFailed => 3,
        _ => 1,
    }
}

fn run(cli: &Cli) -> Result<()> {
    let field = parse::parse_field(&cli.field, cli.spec.as_deref())?;
    match &cli.cmd {
        Cmd::Field { action } => match action {
            FieldAction::Info => field_info(&field),
        },
        Cmd::Ideal { expr } => ideal_expr(&field, expr),
        Cmd::H0 {
            ideal,
            bounds,
            list,
            cap,
            node_budget,
        } => h0(&field, ideal, bounds, *list, *cap, *node_budget),
        Cmd::RrScan {
            base,
            schedule,
            out,
            expect_constant,
            expect_slope,
            node_budget,
        } => rr_scan(
            &field,
            base,
            schedule,
            out,
            *expect_constant,
            *expect_slope,
            *node_budget,
        ),
        Cmd::TateCheck {
            ideal,
            lambda,
            y,
            y_finite,
            tol,
            trunc,
        } => tate(&field, ideal, lambda, y, y_finite.as_deref(), *tol, *trunc),
        Cmd::Surface {
            e,
            d,
            t_list,
            samples,
            max_ci,
        } => surface(e, d, t_list, *samples, *max_ci, cli.seed),
    }
}

fn field_info(field: &NumberField) -> Result<()> {
    let (r, s) = field.signature();
    println!("degree: {}", field.degree());
    println!("signature: ({r}, {s})");
    println!("discriminant: {}", field.discriminant());
    let places: Vec<&str> = field
        .places()
        .iter()
        .map(|p| match p.kind {
            replete_core::field::PlaceKind::Real => "real",
            replete_core::field::PlaceKind::Complex => "complex",
        })
        .collect();
    println!("places: {}", places.join(", "));
    println!(
        "irreducibility: {}",
        if field.irreducibility_certified() {
            "certified"
        } else {
            "asserted (degree > 4)"
        }
    );
    println!("vol(B): {}", fmt_sig_f64(vol_b_f64(field), 12));
    match different_ideal(field) {
        Ok(d) => {
            println!("different: {}", format_ideal(&d));
            println!("different norm: {}", fmt_sig(&d.norm(field), 12));
        }
        Err(Error::NonMonogenic) => {
            println!("different: unavailable (non-power-basis presentation)");
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn format_ideal(a: &FracIdeal) -> String {
    let rows: Vec<String> = a
        .numerator_rows()
        .iter()
        .map(|row| {
            let entries: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            format!("[{}]", entries.join(","))
        })
        .collect();
    format!("rows {} / {}", rows.join(""), a.denominator())
}

// ---------------------------------------------------------------------------
// ideal expressions
// ---------------------------------------------------------------------------

enum Value {
    Ideal(FracIdeal),
    Number(BigRational),
    Truth(bool),
}

fn ideal_expr(field: &NumberField, expr: &str) -> Result<()> {
    let mut p = ExprParser {
        field,
        src: expr,
        at: 0,
    };
    let v = p.parse_expr()?;
    p.skip_ws();
    if p.at != p.src.len() {
        return Err(Error::Parse(format!(
            "trailing input after expression: `{}`",
            &p.src[p.at..]
        )));
    }
    match v {
        Value::Ideal(a) => println!("{}", format_ideal(&a)),
        Value::Number(q) => println!("{}", fmt_sig(&q, 12)),
        Value::Truth(b) => println!("{b}"),
    }
    Ok(())
}

struct ExprParser<'a> {
    field: &'a NumberField,
    src: &'a str,
    at: usize,
}

impl<'a> ExprParser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.at..].starts_with(' ') {
            self.at += 1;
        }
    }

    fn eat(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.src[self.at..].starts_with(c) {
            self.at += c.len_utf8();
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected `{c}` at position {} in expression",
                self.at
            )))
        }
    }

    fn parse_expr(&mut self) -> Result<Value> {
        self.skip_ws();
        let rest = &self.src[self.at..];
        if rest.starts_with("gen:[") {
            let close = rest
                .find(']')
                .ok_or_else(|| Error::Parse("unterminated gen:[ literal".into()))?;
            let lit = &rest[..=close];
            self.at += close + 1;
            return Ok(Value::Ideal(parse::parse_ideal(self.field, lit)?));
        }
        for (name, arity) in [("mul", 2), ("inv", 1), ("norm", 1), ("eq", 2)] {
            if rest.starts_with(name) {
                self.at += name.len();
                self.eat('(')?;
                let a = self.parse_ideal_arg()?;
                let b = if arity == 2 {
                    self.eat(',')?;
                    Some(self.parse_ideal_arg()?)
                } else {
                    None
                };
                self.eat(')')?;
                return Ok(match name {
                    "mul" => Value::Ideal(a.mul(self.field, &b.unwrap())),
                    "inv" => Value::Ideal(a.inv(self.field)),
                    "norm" => Value::Number(a.norm(self.field)),
                    "eq" => Value::Truth(a == b.unwrap()),
                    _ => unreachable!(),
                });
            }
        }
        Err(Error::Parse(format!(
            "expected gen:[...] or mul/inv/norm/eq at position {}",
            self.at
        )))
    }

    fn parse_ideal_arg(&mut self) -> Result<FracIdeal> {
        match self.parse_expr()? {
            Value::Ideal(a) => Ok(a),
            _ => Err(Error::Parse("expected an ideal-valued subexpression".into())),
        }
    }
}

// ---------------------------------------------------------------------------
// h0
// ---------------------------------------------------------------------------

fn h0(
    field: &NumberField,
    ideal: &str,
    bounds: &str,
    list: bool,
    cap: usize,
    node_budget: u64,
) -> Result<()> {
    let ideal = parse::parse_ideal(field, ideal)?;
    let bounds = parse::parse_rational_list(bounds)?;
    let region = H0Region::new(field, bounds.clone())?;
    let cfg = EnumerationConfig {
        node_budget,
        ..Default::default()
    };
    if list {
        // Counting through the replete form keeps one code path.
        let arch: Vec<BigRational> = bounds.iter().map(|b| b.recip()).collect();
        let a = RepleteIdeal::new(field, ideal, arch)?;
        let members = enumerate_h0(field, &a, &cfg, cap)?;
        println!("{}", members.len());
        for m in &members {
            let coords: Vec<String> = m.coords.iter().map(|c| fmt_sig(c, 12)).collect();
            println!("[{}]", coords.join(","));
        }
    } else {
        println!("{}", count_in_region(field, &ideal, &region, &cfg)?);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// rr-scan
// ---------------------------------------------------------------------------

fn rr_scan(
    field: &NumberField,
    base: &str,
    schedule: &str,
    out: &PathBuf,
    expect_constant: Option<f64>,
    expect_slope: bool,
    node_budget: u64,
) -> Result<()> {
    let base = parse::parse_replete(field, base)?;
    let (t0, ratio, k) = parse::parse_schedule(schedule)?;
    let family = ScanFamily::geometric(base, t0, ratio, k);
    let cfg = EnumerationConfig {
        node_budget,
        ..Default::default()
    };
    let outcome = scan_family(field, &family, &cfg)?;
    if let Some((index, reason)) = &outcome.truncated_at {
        eprintln!("scan truncated at point {index}: {reason}");
        return Err(Error::NodeBudgetExceeded { budget: node_budget });
    }
    if out.as_os_str() == "-" {
        let mut stdout = std::io::stdout().lock();
        emit_csv(&outcome.rows, &mut stdout)?;
        stdout.flush()?;
    } else {
        let mut file = std::fs::File::create(out)?;
        emit_csv(&outcome.rows, &mut file)?;
    }
    let constant = estimate_constant(field, &outcome.rows)?;
    let fit = fit_error_exponent(field, &outcome.rows)?;
    print!("{}", summarize(field, &outcome.rows, &constant, &fit));
    if let Some(max_dev) = expect_constant {
        if constant.deviation > max_dev {
            return Err(Error::ToleranceFailed);
        }
    }
    if expect_slope && !fit.pass() {
        return Err(Error::ToleranceFailed);
    }
    // Parity sanity on every row.
    for row in &outcome.rows {
        if row.count > 0 && row.count % 2 == 0 {
            return Err(Error::ToleranceFailed);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// tate-check
// ---------------------------------------------------------------------------

fn broadcast(field: &NumberField, values: Vec<BigRational>) -> Result<Vec<BigRational>> {
    if values.len() == 1 && field.num_places() > 1 {
        Ok(vec![values[0].clone(); field.num_places()])
    } else {
        Ok(values)
    }
}

fn tate(
    field: &NumberField,
    ideal: &str,
    lambda: &str,
    y: &str,
    y_finite: Option<&str>,
    tol: f64,
    trunc: f64,
) -> Result<()> {
    let finite = parse::parse_ideal(field, ideal)?;
    let rates = broadcast(field, parse::parse_rational_list(lambda)?)?;
    let f = SchwartzTestFunction::new(field, finite, rates)?;
    let arch = broadcast(field, parse::parse_rational_list(y)?)?;
    let edits = match y_finite {
        Some(s) => parse::parse_idele_edits(field, s)?,
        None => vec![],
    };
    let y = IdelePresentation::new(field, edits, arch)?;
    let report = tate_check(field, &f, &y, trunc, tol)?;
    println!("lhs: {}", fmt_sig_f64(report.lhs, 12));
    println!("rhs: {}", fmt_sig_f64(report.rhs, 12));
    println!("diff: {}", fmt_sig_f64(report.diff, 12));
    println!("tail: {}", fmt_sig_f64(report.tail_bound, 12));
    println!("tol: {}", fmt_sig_f64(report.tol, 12));
    println!("{}", if report.pass { "pass" } else { "FAIL" });
    if report.pass {
        Ok(())
    } else {
        Err(Error::ToleranceFailed)
    }
}

// ---------------------------------------------------------------------------
// surface
// ---------------------------------------------------------------------------

fn surface(
    e: &str,
    d: &str,
    t_list: &str,
    samples: u64,
    max_ci: Option<f64>,
    seed: u64,
) -> Result<()> {
    let e = parse::parse_region(e)?;
    let d = parse::parse_region(d)?;
    let schedule = parse::parse_rational_list(t_list)?;
    let cfg = GrowthConfig {
        samples,
        seed,
        max_ci,
    };
    let report = surface_area(&e, &d, &schedule, &cfg)?;
    println!("t,growth,quotient,ci99");
    for row in &report.rows {
        println!(
            "{},{},{},{}",
            fmt_sig(&row.t, 12),
            fmt_sig_f64(row.growth, 12),
            fmt_sig_f64(row.quotient, 12),
            fmt_sig_f64(row.ci99, 12)
        );
    }
    println!("seed: {seed}");
    match &report.slope_exact {
        Some(q) => println!("slope: {} (exact)", fmt_sig(q, 12)),
        None => println!(
            "slope: {} +- {}",
            fmt_sig_f64(report.slope, 12),
            fmt_sig_f64(report.slope_ci99, 12)
        ),
    }
    Ok(())
}
