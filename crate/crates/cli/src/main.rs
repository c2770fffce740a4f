//! Command-line interface for exact trigonometric series summation.
//!
//! Subcommands map one-to-one onto the library: `sum` evaluates sums of
//! products of sin/cos powers in closed form and by certified partial sums,
//! `coeffs` and `parseval` work on piecewise functions given as JSON, `plot`
//! emits partial-sum samples as data, `fit` runs the reconstruction
//! pipeline, `recognize` identifies decimals as elements of ℚ\[π\], and
//! `verify` runs the identity registry.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or input error,
//! 3 a closed form does not exist in ℚ\[π\] where one was required.
//! Output is deterministic: the same command and configuration print the
//! same bytes, so runtimes are never included.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::json;

use sincsum::closedform::{index_transform, IndexMode};
use sincsum::exactnum::dyadic::Ctx;
use sincsum::exactnum::rational::{
    decimal_string, parse_decimal, printed_precision, rational_to_f64, Round,
};
use sincsum::fourier::{
    coefficient_at, full_coefficients, parseval_check, sine_coefficients, CanonicalEquality,
};
use sincsum::numeric::{partial_sum, sample_series, GridSpec};
use sincsum::reconstruct::{reconstruct, PipelineConfig, RoundtripVerdict};
use sincsum::relation::recognize_constant;
use sincsum::series::ParamSeries;
use sincsum::{
    parse_constant, parse_product_expression, verify_all, verify_identity, verify_on_interval,
    Check, Error, Mode, PiPoly, PiecewiseFunction, Status, VerificationMode, VerificationReport,
};

type Result<T> = sincsum::Result<T>;

const DEFAULT_DIGITS: u32 = 30;
const DEFAULT_TERMS: u64 = 1_000_000;
const DIGITS_ENV: &str = "SINCSUM_DIGITS";

#[derive(Parser)]
#[command(
    name = "sincsum",
    about = "Exact summation, verification, and recovery of trigonometric series",
    version
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Decimal digits for printed values (default 30, or SINCSUM_DIGITS).
    #[arg(long, global = true)]
    digits: Option<u32>,
    /// Terms per partial sum (default 1000000; `fit` defaults to 100000).
    #[arg(long, global = true)]
    terms: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SumMode {
    /// Closed form in ℚ[π] only.
    Exact,
    /// Certified partial sum only.
    Numeric,
    /// Both, with an agreement check.
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IndexArg {
    All,
    Even,
    Odd,
    Alternating,
}

impl IndexArg {
    fn mode(self) -> IndexMode {
        match self {
            IndexArg::All => IndexMode::All,
            IndexArg::Even => IndexMode::EvenOnly,
            IndexArg::Odd => IndexMode::OddOnly,
            IndexArg::Alternating => IndexMode::Alternating,
        }
    }

    fn name(self) -> &'static str {
        match self {
            IndexArg::All => "all",
            IndexArg::Even => "even",
            IndexArg::Odd => "odd",
            IndexArg::Alternating => "alternating",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Numeric,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a sum over n = 1, 2, 3, … in closed form and numerically.
    Sum {
        /// Expression, e.g. "(sin(n)/n)^7" or "sin(n)*sin(3*n)/n^2".
        expr: String,
        #[arg(long, value_enum, default_value_t = SumMode::Exact)]
        mode: SumMode,
        /// Index restriction: all n, even n, odd n, or alternating signs.
        #[arg(long, value_enum, default_value_t = IndexArg::All)]
        index: IndexArg,
    },
    /// Fourier coefficients of a piecewise polynomial function (JSON file).
    Coeffs {
        /// Path to the function description (see README for the schema).
        function: PathBuf,
        /// How many coefficient values to print.
        #[arg(long, default_value_t = 8)]
        count: u64,
    },
    /// Check Parseval's identity for a piecewise function (JSON file).
    Parseval {
        /// Path to the function description.
        function: PathBuf,
    },
    /// Emit partial-sum samples of a series as plot data.
    Plot {
        /// Expression with a free variable x, e.g. "sin(x*n)^3/n".
        expr: String,
        /// Sampling window and point count, lo:hi:count (e.g. "0:pi:200").
        #[arg(long)]
        grid: String,
        /// Terms per sample point (overrides --terms).
        #[arg(long = "N")]
        n: Option<u64>,
        #[arg(long, value_enum, default_value_t = IndexArg::All)]
        index: IndexArg,
    },
    /// Reconstruct the piecewise function behind a coefficient formula.
    Fit {
        /// Coefficient formula, e.g. "sin(n)/n^2".
        #[arg(long)]
        target: String,
        /// Sample count on (0, π).
        #[arg(long)]
        samples: Option<usize>,
        /// Cap for segment-degree escalation.
        #[arg(long)]
        max_degree: Option<usize>,
        /// Height cap for coefficient recognition.
        #[arg(long)]
        height_cap: Option<u64>,
        /// Recognition basis, comma-separated constants (default "1,pi").
        #[arg(long)]
        basis: Option<String>,
        /// Recognition digits (default: derived from the fit residual).
        #[arg(long)]
        recognition_digits: Option<u32>,
    },
    /// Recognize a decimal as an element of ℚ[π].
    Recognize {
        /// Decimal constant, e.g. "0.6780972450961724".
        decimal: String,
        /// Basis constants, comma-separated (default "1,pi").
        #[arg(long)]
        basis: Option<String>,
        /// Height cap on relation integers.
        #[arg(long, default_value_t = 1_000_000)]
        height_cap: u64,
    },
    /// Verify identities from the registry.
    Verify {
        /// Verify every registry entry.
        #[arg(long)]
        all: bool,
        /// Verify one entry by id.
        #[arg(long)]
        id: Option<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// Interior sample count for one interval identity (needs --id).
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Inspect the identity registry.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List every identity with its id, mode, and description.
    List,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::NotClosedForm { .. } => 3,
                _ => 2,
            };
            std::process::exit(code);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let digits = resolve_digits(cli.digits)?;
    match cli.command {
        Command::Sum { expr, mode, index } => {
            let terms = cli.terms.unwrap_or(DEFAULT_TERMS);
            cmd_sum(&expr, mode, index, digits, terms, cli.format)
        }
        Command::Coeffs { function, count } => {
            cmd_coeffs(&function, count, digits, cli.format)
        }
        Command::Parseval { function } => cmd_parseval(&function, digits, cli.format),
        Command::Plot {
            expr,
            grid,
            n,
            index,
        } => {
            let terms = n.or(cli.terms).unwrap_or(DEFAULT_TERMS);
            cmd_plot(&expr, &grid, terms, index, cli.format)
        }
        Command::Fit {
            target,
            samples,
            max_degree,
            height_cap,
            basis,
            recognition_digits,
        } => {
            let mut cfg = PipelineConfig::default();
            if let Some(t) = cli.terms {
                cfg.n_terms = t.max(1);
            }
            if let Some(s) = samples {
                cfg.samples = s;
            }
            if let Some(d) = max_degree {
                cfg.max_degree = d;
            }
            if let Some(h) = height_cap {
                cfg.height_cap = h;
            }
            if let Some(b) = &basis {
                cfg.basis = parse_basis(b)?;
            }
            cfg.digits = recognition_digits;
            cmd_fit(&target, cfg, cli.format)
        }
        Command::Recognize {
            decimal,
            basis,
            height_cap,
        } => {
            let digits = match cli.digits {
                Some(d) => check_digits(d)?,
                None => printed_precision(&decimal).clamp(8, 100),
            };
            cmd_recognize(&decimal, basis.as_deref(), height_cap, digits, cli.format)
        }
        Command::Verify {
            all,
            id,
            mode,
            samples,
        } => {
            let terms = cli.terms.unwrap_or(DEFAULT_TERMS);
            cmd_verify(all, id.as_deref(), mode, samples, digits, terms, cli.format)
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => cmd_catalog_list(cli.format),
        },
    }
}

fn resolve_digits(arg: Option<u32>) -> Result<u32> {
    if let Some(d) = arg {
        return check_digits(d);
    }
    if let Ok(v) = std::env::var(DIGITS_ENV) {
        let d: u32 = v
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("{DIGITS_ENV} must be an integer, got {v:?}")))?;
        return check_digits(d);
    }
    Ok(DEFAULT_DIGITS)
}

fn check_digits(d: u32) -> Result<u32> {
    if (8..=100).contains(&d) {
        Ok(d)
    } else {
        Err(Error::invalid("digits must be between 8 and 100"))
    }
}

fn parse_basis(s: &str) -> Result<Vec<PiPoly>> {
    s.split(',')
        .map(|part| parse_constant(part.trim()))
        .collect()
}

/// Midpoint of a tight dyadic enclosure of an exact π-polynomial value.
fn pipoly_rational(p: &PiPoly) -> BigRational {
    let ctx = Ctx::new(192);
    let iv = p.eval_iv(&ctx);
    (ctx.lo_rational(&iv) + ctx.hi_rational(&iv)) / BigRational::from_integer(2.into())
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json encoding"));
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Prints a two-column key,value table in the chosen format.
fn emit_fields(format: Format, fields: &[(&str, String)]) {
    match format {
        Format::Text => {
            for (k, v) in fields {
                println!("{k}: {v}");
            }
        }
        Format::Json => {
            let mut map = serde_json::Map::new();
            for (k, v) in fields {
                map.insert((*k).to_string(), json!(v));
            }
            print_json(&serde_json::Value::Object(map));
        }
        Format::Csv => {
            println!("field,value");
            for (k, v) in fields {
                println!("{},{}", csv_quote(k), csv_quote(v));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// sum

fn cmd_sum(
    expr: &str,
    mode: SumMode,
    index: IndexArg,
    digits: u32,
    terms: u64,
    format: Format,
) -> Result<i32> {
    let parsed = parse_product_expression(expr)?;
    let mut exact: Option<PiPoly> = None;
    let mut numeric = None;
    if mode != SumMode::Numeric {
        exact = Some(parsed.evaluate_sum_indexed(index.mode())?);
    }
    if mode != SumMode::Exact {
        let series = index_transform(&parsed.expand()?, index.mode())?;
        let concrete = series.to_concrete().ok_or_else(|| {
            Error::invalid("numeric summation needs a concrete series; this one has a free x")
        })?;
        numeric = Some(partial_sum(&concrete, terms, digits)?);
    }

    let mut agreement_ok = true;
    let mut fields: Vec<(&str, String)> = vec![
        ("expression", expr.to_string()),
        ("index", index.name().to_string()),
    ];
    let mut json_out = json!({
        "expression": expr,
        "index": index.name(),
    });
    if let Some(value) = &exact {
        fields.push(("closed form", value.to_string()));
        fields.push(("decimal", value.to_decimal(digits)?));
        json_out["closed_form"] = serde_json::to_value(value)?;
        json_out["closed_form_display"] = json!(value.to_string());
        json_out["decimal"] = json!(value.to_decimal(digits)?);
    }
    if let Some(r) = &numeric {
        let value = decimal_string(&r.value, digits, Round::Nearest);
        let bound = decimal_string(&r.tail_bound, digits, Round::Ceil);
        fields.push(("partial sum terms", r.n_terms.to_string()));
        fields.push(("partial sum", value.clone()));
        fields.push((
            "tail bound",
            format!("{:.3e}", rational_to_f64(&r.tail_bound)),
        ));
        json_out["partial_sum"] = json!({
            "value": value,
            "tail_bound": bound,
            "n_terms": r.n_terms,
            "digits": r.digits,
        });
    }
    if let (Some(value), Some(r)) = (&exact, &numeric) {
        let target = pipoly_rational(value);
        let gap = (&r.value - &target).abs();
        agreement_ok = gap <= r.tail_bound;
        let line = format!(
            "|closed form - partial sum| = {:.3e}, certified bound {:.3e} ({})",
            rational_to_f64(&gap),
            rational_to_f64(&r.tail_bound),
            if agreement_ok { "ok" } else { "MISMATCH" }
        );
        fields.push(("agreement", line));
        json_out["agreement"] = json!({
            "gap": rational_to_f64(&gap),
            "bound": rational_to_f64(&r.tail_bound),
            "ok": agreement_ok,
        });
    }
    if format == Format::Json {
        print_json(&json_out);
    } else {
        emit_fields(format, &fields);
    }
    Ok(if agreement_ok { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// coeffs / parseval

fn load_function(path: &PathBuf) -> Result<PiecewiseFunction> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn cmd_coeffs(path: &PathBuf, count: u64, digits: u32, format: Format) -> Result<i32> {
    let f = load_function(path)?;
    match f.domain() {
        sincsum::DomainKind::Half => {
            let b = sine_coefficients(&f)?;
            let mut values = Vec::new();
            for n in 1..=count {
                values.push((n, coefficient_at(&b, n, digits)?));
            }
            match format {
                Format::Json => {
                    let vals: Vec<serde_json::Value> = values
                        .iter()
                        .map(|(n, v)| json!({"n": n, "value": v.value, "bound": v.bound}))
                        .collect();
                    print_json(&json!({
                        "domain": "half",
                        "formula": serde_json::to_value(&b)?,
                        "display": b.to_string(),
                        "values": vals,
                    }));
                }
                Format::Csv => {
                    println!("n,value,bound");
                    for (n, v) in &values {
                        println!("{n},{},{}", csv_quote(&v.value), csv_quote(&v.bound));
                    }
                }
                Format::Text => {
                    println!("domain: half");
                    println!("sine coefficients: {b}");
                    for (n, v) in &values {
                        println!("b({n}) = {} (error <= {})", v.value, v.bound);
                    }
                }
            }
        }
        sincsum::DomainKind::Full => {
            let fc = full_coefficients(&f)?;
            let mut values = Vec::new();
            for n in 1..=count {
                values.push((
                    n,
                    coefficient_at(&fc.a, n, digits)?,
                    coefficient_at(&fc.b, n, digits)?,
                ));
            }
            match format {
                Format::Json => {
                    let vals: Vec<serde_json::Value> = values
                        .iter()
                        .map(|(n, a, b)| {
                            json!({
                                "n": n,
                                "a": a.value, "a_bound": a.bound,
                                "b": b.value, "b_bound": b.bound,
                            })
                        })
                        .collect();
                    print_json(&json!({
                        "domain": "full",
                        "a0": serde_json::to_value(&fc.a0)?,
                        "a0_decimal": fc.a0.to_decimal(digits)?,
                        "a": serde_json::to_value(&fc.a)?,
                        "a_display": fc.a.to_string(),
                        "b": serde_json::to_value(&fc.b)?,
                        "b_display": fc.b.to_string(),
                        "values": vals,
                    }));
                }
                Format::Csv => {
                    println!("n,a,a_bound,b,b_bound");
                    for (n, a, b) in &values {
                        println!(
                            "{n},{},{},{},{}",
                            csv_quote(&a.value),
                            csv_quote(&a.bound),
                            csv_quote(&b.value),
                            csv_quote(&b.bound)
                        );
                    }
                }
                Format::Text => {
                    println!("domain: full");
                    println!("a0 = {} = {}", fc.a0, fc.a0.to_decimal(digits)?);
                    println!("cosine coefficients: {}", fc.a);
                    println!("sine coefficients: {}", fc.b);
                    for (n, a, b) in &values {
                        println!("a({n}) = {} (error <= {})", a.value, a.bound);
                        println!("b({n}) = {} (error <= {})", b.value, b.bound);
                    }
                }
            }
        }
    }
    Ok(0)
}

fn cmd_parseval(path: &PathBuf, digits: u32, format: Format) -> Result<i32> {
    let f = load_function(path)?;
    let report = parseval_check(&f)?;
    let fields = vec![
        ("integral side (1/pi) int f^2", report.lhs.to_string()),
        ("coefficient side sum", report.rhs.to_string()),
        ("decimal", report.lhs.to_decimal(digits)?),
        ("equal", report.equal.to_string()),
    ];
    if format == Format::Json {
        print_json(&json!({
            "lhs": serde_json::to_value(&report.lhs)?,
            "rhs": serde_json::to_value(&report.rhs)?,
            "lhs_display": report.lhs.to_string(),
            "rhs_display": report.rhs.to_string(),
            "decimal": report.lhs.to_decimal(digits)?,
            "equal": report.equal,
        }));
    } else {
        emit_fields(format, &fields);
    }
    Ok(if report.equal { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// plot

fn parse_scalar(s: &str) -> Result<f64> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    Ok(parse_constant(t)?.eval_f64())
}

fn parse_grid(spec: &str) -> Result<GridSpec> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::invalid(format!(
            "grid must be lo:hi:count, got {spec:?}"
        )));
    }
    let lo = parse_scalar(parts[0])?;
    let hi = parse_scalar(parts[1])?;
    let count: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("bad grid count {:?}", parts[2])))?;
    GridSpec::new(lo, hi, count)
}

fn cmd_plot(
    expr: &str,
    grid_spec: &str,
    terms: u64,
    index: IndexArg,
    format: Format,
) -> Result<i32> {
    let grid = parse_grid(grid_spec)?;
    let series: ParamSeries = index_transform(&parse_product_expression(expr)?.expand()?, index.mode())?;
    let samples = sample_series(&series, &grid, terms)?;
    match format {
        Format::Json => print_json(&serde_json::to_value(&samples)?),
        _ => {
            println!("x,value,noise");
            for (i, (x, y)) in samples.points.iter().enumerate() {
                println!("{x},{y},{}", samples.noise_at(i));
            }
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// fit

fn verdict_name(v: RoundtripVerdict) -> &'static str {
    match v {
        RoundtripVerdict::Verified => "verified",
        RoundtripVerdict::Refuted => "refuted",
        RoundtripVerdict::Inconclusive => "inconclusive",
    }
}

fn equality_name(e: CanonicalEquality) -> &'static str {
    match e {
        CanonicalEquality::Equal => "equal",
        CanonicalEquality::NotEqualFormally => "not-equal-formally",
    }
}

fn cmd_fit(target: &str, cfg: PipelineConfig, format: Format) -> Result<i32> {
    let formula = parse_product_expression(target)?
        .expand()?
        .to_concrete()
        .ok_or_else(|| Error::invalid("the target coefficient formula must not contain x"))?;
    let result = reconstruct(&formula, &cfg)?;
    let breakpoints: Vec<String> = result
        .hypothesis
        .breakpoints
        .iter()
        .map(|b| b.to_string())
        .collect();
    let verdict = result.report.verdict;
    match format {
        Format::Json => {
            let segments: Vec<serde_json::Value> = result
                .fit
                .segments
                .iter()
                .map(|s| {
                    json!({
                        "lo": s.lo.to_string(),
                        "hi": s.hi.to_string(),
                        "coeffs": s.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        "rms": s.rms,
                    })
                })
                .collect();
            print_json(&json!({
                "target": target,
                "breakpoints": breakpoints,
                "spike_orders": result.hypothesis.spike_orders,
                "degrees": result.hypothesis.degrees,
                "constraints": {
                    "continuity_order": result.constraints.continuity_order,
                    "f0_zero": result.constraints.f0_zero,
                    "fpi_zero": result.constraints.fpi_zero,
                },
                "fitted_segments": segments,
                "rms_residual": result.fit.rms_residual,
                "max_residual": result.fit.max_residual,
                "noise_estimate": result.fit.noise_estimate,
                "samples_used": result.fit.samples_used,
                "recognition_digits": result.digits,
                "candidate": serde_json::to_value(&result.report.candidate)?,
                "candidate_display": result.report.candidate.to_string(),
                "formula_equal": equality_name(result.report.formula_equal),
                "numeric_residuals": result.report.numeric_residuals,
                "verdict": verdict_name(verdict),
            }));
        }
        format => {
            let mut fields: Vec<(&str, String)> = vec![
                ("target", target.to_string()),
                ("breakpoints", breakpoints.join("; ")),
                (
                    "spike orders",
                    result
                        .hypothesis
                        .spike_orders
                        .iter()
                        .map(|o| o.to_string())
                        .collect::<Vec<_>>()
                        .join("; "),
                ),
                (
                    "segment degrees",
                    result
                        .hypothesis
                        .degrees
                        .iter()
                        .map(|d| d.to_string())
                        .collect::<Vec<_>>()
                        .join("; "),
                ),
                (
                    "continuity order",
                    result.constraints.continuity_order.to_string(),
                ),
                ("fit rms residual", format!("{:.3e}", result.fit.rms_residual)),
                ("sample noise estimate", format!("{:.3e}", result.fit.noise_estimate)),
                ("recognition digits", result.digits.to_string()),
                (
                    "recognized function",
                    result.report.candidate.to_string().replace('\n', "; "),
                ),
                (
                    "formula comparison",
                    equality_name(result.report.formula_equal).to_string(),
                ),
                ("verdict", verdict_name(verdict).to_string()),
            ];
            if format == Format::Text {
                // multi-line function display reads better in plain text
                let pos = fields.iter().position(|(k, _)| *k == "recognized function");
                if let Some(pos) = pos {
                    fields[pos].1 = format!("\n{}", result.report.candidate);
                }
            }
            emit_fields(format, &fields);
        }
    }
    Ok(if verdict == RoundtripVerdict::Verified { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// recognize

fn cmd_recognize(
    decimal: &str,
    basis: Option<&str>,
    height_cap: u64,
    digits: u32,
    format: Format,
) -> Result<i32> {
    let value = parse_decimal(decimal)?;
    let basis = match basis {
        Some(b) => parse_basis(b)?,
        None => vec![PiPoly::one(), PiPoly::pi()],
    };
    let outcome = recognize_constant(&value, &basis, digits, height_cap)?;
    match format {
        Format::Json => {
            let mut out = json!({
                "input": decimal,
                "digits": digits,
                "recognized": outcome.is_some(),
            });
            if let Some(r) = &outcome {
                out["candidate"] = serde_json::to_value(&r.candidate)?;
                out["candidate_display"] = json!(r.candidate.to_string());
                out["decimal"] = json!(r.candidate.to_decimal(digits.min(50))?);
                out["relation"] =
                    json!(r.relation.iter().map(|m| m.to_string()).collect::<Vec<_>>());
                out["residual"] = json!(format!("{:.3e}", r.residual_f64()));
                out["confidence_digits"] = json!(r.confidence_digits);
            }
            print_json(&out);
        }
        format => {
            let mut fields: Vec<(&str, String)> = vec![
                ("input", decimal.to_string()),
                ("digits", digits.to_string()),
            ];
            match &outcome {
                Some(r) => {
                    fields.push(("recognized", r.candidate.to_string()));
                    fields.push(("decimal", r.candidate.to_decimal(digits.min(50))?));
                    fields.push((
                        "relation",
                        r.relation
                            .iter()
                            .map(|m| m.to_string())
                            .collect::<Vec<_>>()
                            .join("; "),
                    ));
                    fields.push(("residual", format!("{:.3e}", r.residual_f64())));
                    fields.push(("confidence digits", r.confidence_digits.to_string()));
                }
                None => {
                    fields.push(("recognized", "none".to_string()));
                }
            }
            emit_fields(format, &fields);
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify / catalog

fn report_json(r: &VerificationReport) -> serde_json::Value {
    json!({
        "id": r.id,
        "status": r.status.to_string(),
        "details": r.details,
    })
}

fn print_reports(reports: &[VerificationReport], format: Format) {
    match format {
        Format::Json => {
            let list: Vec<serde_json::Value> = reports.iter().map(report_json).collect();
            print_json(&serde_json::Value::Array(list));
        }
        Format::Csv => {
            println!("id,status,details");
            for r in reports {
                println!(
                    "{},{},{}",
                    csv_quote(&r.id),
                    r.status,
                    csv_quote(&r.details)
                );
            }
        }
        Format::Text => {
            for r in reports {
                println!("{}: {} - {}", r.id, r.status, r.details);
            }
            let pass = reports.iter().filter(|r| r.status == Status::Pass).count();
            let fail = reports.iter().filter(|r| r.status == Status::Fail).count();
            let error = reports.iter().filter(|r| r.status == Status::Error).count();
            if reports.len() > 1 {
                println!(
                    "{} identities: {} pass, {} fail, {} error",
                    reports.len(),
                    pass,
                    fail,
                    error
                );
            }
        }
    }
}

fn cmd_verify(
    all: bool,
    id: Option<&str>,
    mode: ModeArg,
    samples: Option<usize>,
    digits: u32,
    terms: u64,
    format: Format,
) -> Result<i32> {
    if all == id.is_some() {
        return Err(Error::invalid("pass exactly one of --all or --id <id>"));
    }
    let mode = match mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Numeric => Mode::Numeric,
    };
    let reports = if all {
        if samples.is_some() {
            return Err(Error::invalid("--samples needs --id with an interval identity"));
        }
        verify_all(mode, digits, terms)
    } else {
        let id = id.expect("checked above");
        let report = match samples {
            Some(s) => verify_on_interval(id, s)?,
            None => verify_identity(id, mode, digits, terms)?,
        };
        vec![report]
    };
    print_reports(&reports, format);
    Ok(if reports.iter().all(|r| r.status == Status::Pass) {
        0
    } else {
        1
    })
}

fn check_kind(c: &Check) -> &'static str {
    match c {
        Check::Sums { .. } => "sums",
        Check::NotPattern { .. } => "not-pattern",
        Check::Contrast { .. } => "contrast",
        Check::Verdicts { .. } => "verdicts",
        Check::Interval { .. } => "interval",
        Check::Fourier { .. } => "fourier",
        Check::Parseval { .. } => "parseval",
        Check::SquaredSeries { .. } => "squared-series",
    }
}

fn cmd_catalog_list(format: Format) -> Result<i32> {
    let entries = sincsum::list_identities();
    match format {
        Format::Json => {
            let list: Vec<serde_json::Value> = entries
                .iter()
                .map(|e| {
                    json!({
                        "id": e.id,
                        "mode": mode_name(e.mode),
                        "kind": check_kind(&e.check),
                        "description": e.description,
                    })
                })
                .collect();
            print_json(&serde_json::Value::Array(list));
        }
        Format::Csv => {
            println!("id,mode,kind,description");
            for e in &entries {
                println!(
                    "{},{},{},{}",
                    csv_quote(e.id),
                    mode_name(e.mode),
                    check_kind(&e.check),
                    csv_quote(e.description)
                );
            }
        }
        Format::Text => {
            for e in &entries {
                println!(
                    "{:<24} {:<12} {:<14} {}",
                    e.id,
                    mode_name(e.mode),
                    check_kind(&e.check),
                    e.description
                );
            }
            println!("{} identities", entries.len());
        }
    }
    Ok(0)
}

fn mode_name(m: VerificationMode) -> &'static str {
    match m {
        VerificationMode::Exact => "exact",
        VerificationMode::NumericOnly => "numeric-only",
    }
}
