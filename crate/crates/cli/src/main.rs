use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use ffinterval::config;
use ffinterval::interval::DEFAULT_BUDGET;
use ffinterval::oracle;
use ffinterval::report;
use ffinterval::stats::{self, CensusOptions, DEFAULT_FLOOR};
use ffinterval::{curve, CurveModel, DivisorSpec, Error, FunctionElem, IntervalSpec, Mode};

#[derive(Parser)]
#[command(name = "ffinterval", version, about = "Short intervals on curves over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a Riemann-Roch basis of H^0(C, O(E)).
    RrBasis(SpecArgs),
    /// Print m, k, the interval size and the hypothesis checks.
    IntervalInfo(SpecArgs),
    /// Tally factorization types over the interval.
    Census(RunArgs),
    /// Count prime elements of the interval.
    PrimeCount(RunArgs),
    /// Repeat a census for each field in --scan.
    Scan(ScanArgs),
    /// Run the brute-force cross-validation suite.
    OracleCheck(OracleArgs),
}

#[derive(Args, Clone)]
struct SpecArgs {
    /// Interval spec JSON {"curve", "E", "f"}, inline or a file path.
    #[arg(long)]
    interval: Option<String>,
    /// Curve spec JSON, inline or a file path.
    #[arg(long)]
    curve: Option<String>,
    /// The center f: an expression such as "x^5 + y", or JSON.
    #[arg(long = "f")]
    f: Option<String>,
    /// The divisor E: an integer m for m*inf, or JSON.
    #[arg(long = "E")]
    e: Option<String>,
    /// Write the output to this file instead of stdout
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sample,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    /// Number of sampled elements (sample mode).
    #[arg(long)]
    samples: Option<u64>,
    /// Seed for sample mode.
    #[arg(long)]
    seed: Option<u64>,
    /// Largest exhaustive enumeration allowed.
    #[arg(long, env = "FFINTERVAL_BUDGET", value_parser = parse_budget)]
    budget: Option<u128>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads (default: available parallelism).
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args, Clone)]
struct ScanArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Fields to scan: "9,25,49" or a JSON array whose entries are field specs
    /// or curve overrides such as {"field": 9, "fpoly": "x^3 + x + 1"}.
    #[arg(long)]
    scan: String,
}

#[derive(Args, Clone)]
struct OracleArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, env = "FFINTERVAL_BUDGET", value_parser = parse_budget)]
    budget: Option<u128>,
}

fn parse_budget(s: &str) -> Result<u128, String> {
    if let Ok(n) = s.trim().parse::<u128>() {
        return Ok(n);
    }
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x < 1e38 => Ok(x as u128),
        _ => Err(format!("invalid budget {s:?}")),
    }
}

enum CliError {
    Lib(Error),
    Config(String),
    Invariant(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::BudgetExceeded { .. }) => 3,
            CliError::Lib(Error::InternalParityError(_)) | CliError::Invariant(_) => 4,
            CliError::Lib(_) | CliError::Config(_) => 2,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            CliError::Lib(e) => (e.kind().to_string(), e.to_string()),
            CliError::Config(m) => ("ConfigError".to_string(), m.clone()),
            CliError::Invariant(m) => ("InvariantViolation".to_string(), m.clone()),
        };
        json!({"error": {"kind": kind, "message": message}})
    }
}

type CliResult<T> = Result<T, CliError>;

/// Merges `--interval` with the individual `--curve/--f/--E` overrides.
fn spec_json(spec: &SpecArgs) -> CliResult<Map<String, Value>> {
    let mut obj = match &spec.interval {
        Some(s) => match config::load_json(s)? {
            Value::Object(o) => o,
            _ => return Err(CliError::Config("--interval must be a JSON object".into())),
        },
        None => Map::new(),
    };
    for (key, arg) in [("curve", &spec.curve), ("f", &spec.f), ("E", &spec.e)] {
        if let Some(a) = arg {
            obj.insert(key.into(), config::load_json(a)?);
        }
    }
    Ok(obj)
}

fn require<'a>(obj: &'a Map<String, Value>, key: &str, flag: &str) -> CliResult<&'a Value> {
    obj.get(key)
        .ok_or_else(|| CliError::Config(format!("missing {flag} (or \"{key}\" in --interval)")))
}

fn curve_and_divisor(obj: &Map<String, Value>) -> CliResult<(CurveModel, DivisorSpec)> {
    let curve = config::curve_from_json(require(obj, "curve", "--curve")?)?;
    let e = config::divisor_from_json(&curve, require(obj, "E", "--E")?)?;
    Ok((curve, e))
}

fn build_interval(obj: &Map<String, Value>) -> CliResult<IntervalSpec> {
    let (curve, e) = curve_and_divisor(obj)?;
    let f: FunctionElem = config::function_from_json(&curve, require(obj, "f", "--f")?)?;
    Ok(IntervalSpec::new(&curve, &f, &e)?)
}

fn mode_of(run: &RunArgs) -> CliResult<Mode> {
    match run.mode {
        ModeArg::Exhaustive => Ok(Mode::Exhaustive),
        ModeArg::Sample => {
            let samples = run
                .samples
                .ok_or_else(|| CliError::Config("sample mode needs --samples".into()))?;
            let seed = run.seed.ok_or_else(|| CliError::Config("sample mode needs --seed".into()))?;
            Ok(Mode::Sample { samples, seed })
        }
    }
}

fn options(run: &RunArgs) -> CensusOptions {
    CensusOptions {
        budget: run.budget.unwrap_or(DEFAULT_BUDGET),
        workers: run.workers,
    }
}

fn emit(out: &Option<String>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Config(format!("{path}: {e}"))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Config(format!("stdout: {e}")))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Histogram invariants that must hold for every completed census.
fn check_histogram(i: &IntervalSpec, h: &ffinterval::Histogram, mode: Mode) -> CliResult<()> {
    let sum: u64 = h.counts.values().sum::<u64>() + h.nonseparable;
    let expected_total = match mode {
        Mode::Exhaustive => i.size(),
        Mode::Sample { samples, .. } => samples as u128,
    };
    if sum != h.total || h.total as u128 != expected_total {
        return Err(CliError::Invariant(format!(
            "histogram total {} does not match counts {sum} / expected {expected_total}",
            h.total
        )));
    }
    if let Some(p) = h.counts.keys().find(|p| p.k() != i.k()) {
        return Err(CliError::Invariant(format!("partition {p} does not sum to k = {}", i.k())));
    }
    Ok(())
}

fn census_report(i: &IntervalSpec, run: &RunArgs) -> CliResult<stats::CountReport> {
    let mode = mode_of(run)?;
    let h = stats::census(i, mode, options(run))?;
    check_histogram(i, &h, mode)?;
    Ok(stats::deviation_report(i, &h, mode, DEFAULT_FLOOR))
}

fn cmd_rr_basis(spec: &SpecArgs) -> CliResult<()> {
    let obj = spec_json(spec)?;
    let (curve, e) = curve_and_divisor(&obj)?;
    let basis = curve::rr_basis(&curve, &e)?;
    let v = json!({
        "curve": config::curve_to_json(&curve),
        "E": config::divisor_to_json(&curve, &e),
        "dimension": basis.len(),
        "basis": basis.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
    });
    emit(&spec.out, &pretty(&v))
}

fn cmd_interval_info(spec: &SpecArgs) -> CliResult<()> {
    let i = build_interval(&spec_json(spec)?)?;
    let mut v = report::interval_json(&i);
    v["hypotheses"] = serde_json::to_value(i.hypotheses()).expect("serializable");
    v["basis"] = json!(i.basis().iter().map(|b| b.to_string()).collect::<Vec<_>>());
    emit(&spec.out, &pretty(&v))
}

fn cmd_census(run: &RunArgs) -> CliResult<()> {
    let i = build_interval(&spec_json(&run.spec)?)?;
    let r = census_report(&i, run)?;
    let text = match run.format {
        Format::Json => pretty(&report::report_json(&i, &r)),
        Format::Csv => report::report_csv(&i, &r),
    };
    emit(&run.spec.out, &text)
}

fn cmd_prime_count(run: &RunArgs) -> CliResult<()> {
    let i = build_interval(&spec_json(&run.spec)?)?;
    let mode = mode_of(run)?;
    let h = stats::census(&i, mode, options(run))?;
    check_histogram(&i, &h, mode)?;
    let v = report::prime_count_json(&i, &h, mode);
    let text = match run.format {
        Format::Json => pretty(&v),
        Format::Csv => {
            let f = i.field();
            format!(
                "q,p,e,genus,degE,m,k,total,prime_count,expected,deviation\n{},{},{},{},{},{},{},{},{},{},{}\n",
                f.q(),
                f.p(),
                f.e(),
                i.curve().genus(),
                i.divisor().degree(),
                i.m(),
                i.k(),
                h.total,
                v["prime_count"],
                v["expected"].as_str().unwrap_or(""),
                report::fmt_g(v["deviation"].as_f64().unwrap_or(f64::NAN))
            )
        }
    };
    emit(&run.spec.out, &text)
}

fn scan_entries(arg: &str) -> CliResult<Vec<Value>> {
    let t = arg.trim();
    if t.starts_with('[') {
        match config::load_json(t)? {
            Value::Array(items) => Ok(items),
            _ => unreachable!("starts with '['"),
        }
    } else {
        t.split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map(|q| json!(q))
                    .or_else(|_| Ok(Value::String(s.trim().to_string())))
            })
            .collect()
    }
}

fn cmd_scan(args: &ScanArgs) -> CliResult<()> {
    let base = spec_json(&args.run.spec)?;
    let base_curve = require(&base, "curve", "--curve")?
        .as_object()
        .cloned()
        .ok_or_else(|| CliError::Config("curve must be an object".into()))?;
    let mut reports = Vec::new();
    let mut csv = String::from(report::CSV_HEADER);
    csv.push('\n');
    for entry in scan_entries(&args.scan)? {
        let mut curve = base_curve.clone();
        match entry {
            Value::Object(o) if o.contains_key("field") => curve.extend(o),
            field => {
                curve.insert("field".into(), field);
            }
        }
        let mut obj = base.clone();
        obj.insert("curve".into(), Value::Object(curve));
        let i = build_interval(&obj)?;
        let r = census_report(&i, &args.run)?;
        reports.push(report::report_json(&i, &r));
        for line in report::report_csv_rows(&i, &r) {
            csv.push_str(&line);
            csv.push('\n');
        }
    }
    let text = match args.run.format {
        Format::Json => pretty(&Value::Array(reports)),
        Format::Csv => csv,
    };
    emit(&args.run.spec.out, &text)
}

fn default_intervals() -> CliResult<Vec<IntervalSpec>> {
    let specs = [
        json!({"curve": {"kind": "P1", "field": 3}, "E": 3, "f": "t^5"}),
        json!({"curve": {"kind": "P1", "field": 5}, "E": {"support": [{"place": "inf", "mult": 1}, {"place": 0, "mult": 2}]}, "f": "t^2 + t^-3"}),
        json!({"curve": {"kind": "hyperelliptic", "field": 5, "fpoly": "x^3 + 1"}, "E": 3, "f": "x^2"}),
        json!({"curve": {"kind": "hyperelliptic", "field": 7, "fpoly": "x^3 + 3"}, "E": 3, "f": "x^2"}),
    ];
    specs
        .iter()
        .map(|s| {
            let (c, e, f) = config::interval_from_json(s)?;
            Ok(IntervalSpec::new(&c, &f, &e)?)
        })
        .collect()
}

fn cmd_oracle_check(args: &OracleArgs) -> CliResult<()> {
    let budget = args.budget.unwrap_or(DEFAULT_BUDGET);
    let mut checks = vec![
        oracle::check_necklace_identity(&[2, 3, 4, 5, 7, 9], 10),
        oracle::check_sk_closed_form(7),
        oracle::check_partition_sums(12),
    ];
    let obj = spec_json(&args.spec)?;
    let intervals = if obj.is_empty() {
        default_intervals()?
    } else {
        vec![build_interval(&obj)?]
    };
    for i in &intervals {
        checks.push(oracle::cross_check_interval(i, budget)?);
    }
    let passed = checks.iter().all(|c| c.passed);
    let v = json!({"passed": passed, "checks": checks});
    emit(&args.spec.out, &pretty(&v))?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Invariant("oracle cross-check failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::RrBasis(a) => cmd_rr_basis(a),
        Command::IntervalInfo(a) => cmd_interval_info(a),
        Command::Census(a) => cmd_census(a),
        Command::PrimeCount(a) => cmd_prime_count(a),
        Command::Scan(a) => cmd_scan(a),
        Command::OracleCheck(a) => cmd_oracle_check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
