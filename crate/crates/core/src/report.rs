//! JSON and CSV renderings of census reports.

use serde_json::{json, Value};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::config;
use crate::interval::{IntervalSpec, Mode};
use crate::stats::{CountReport, Histogram, Partition};

/// `%g`-style formatting with 6 significant digits.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&exp) {
        let s = format!("{x:.5e}");
        let (mant, e) = s.split_once('e').unwrap();
        let mant = trim_zeros(mant);
        let e: i32 = e.parse().unwrap();
        let sign = if e < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", e.abs())
    } else {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn interval_json(interval: &IntervalSpec) -> Value {
    let curve = interval.curve();
    json!({
        "curve": config::curve_to_json(curve),
        "E": config::divisor_to_json(curve, interval.divisor()),
        "f": interval.f().to_string(),
        "m": interval.m(),
        "k": interval.k(),
        "size": interval.size().to_string(),
    })
}

pub fn report_json(interval: &IntervalSpec, report: &CountReport) -> Value {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "lambda": r.lambda.parts(),
                "observed": r.observed,
                "expected": r.expected.to_string(),
                "deviation": r.deviation,
                "normalized": r.normalized,
            })
        })
        .collect();
    json!({
        "interval": interval_json(interval),
        "mode": report.mode,
        "total": report.total,
        "rows": rows,
        "nonseparable": report.nonseparable,
        "fitted_c": report.fitted_c,
    })
}

/// Prime count against the prediction `total / k`.
pub fn prime_count_json(interval: &IntervalSpec, hist: &Histogram, mode: Mode) -> Value {
    let k = interval.k();
    let count = hist.count(&Partition::new(vec![k]));
    let expected = BigRational::new(BigInt::from(hist.total), BigInt::from(k));
    let deviation = (BigRational::from_integer(BigInt::from(count)) - &expected).abs();
    let deviation = deviation.to_f64().unwrap_or(f64::NAN);
    let normalized = match mode {
        Mode::Exhaustive => Some(deviation / (interval.field().q() as f64).powf(interval.m() as f64 + 0.5)),
        Mode::Sample { .. } => {
            let p = 1.0 / k as f64;
            let sd = (hist.total as f64 * p * (1.0 - p)).sqrt();
            (sd > 0.0).then(|| deviation / sd)
        }
    };
    json!({
        "interval": interval_json(interval),
        "mode": mode,
        "total": hist.total,
        "prime_count": count,
        "expected": expected.to_string(),
        "deviation": deviation,
        "normalized": normalized,
    })
}

pub const CSV_HEADER: &str = "q,p,e,genus,degE,m,k,lambda,observed,expected,deviation,normalized";

/// One CSV line per row, without the header.
pub fn report_csv_rows(interval: &IntervalSpec, report: &CountReport) -> Vec<String> {
    let f = interval.field();
    let prefix = format!(
        "{},{},{},{},{},{},{}",
        f.q(),
        f.p(),
        f.e(),
        interval.curve().genus(),
        interval.divisor().degree(),
        interval.m(),
        interval.k()
    );
    report
        .rows
        .iter()
        .map(|r| {
            let lambda = r.lambda.parts().iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
            format!(
                "{prefix},{lambda},{},{},{},{}",
                r.observed,
                r.expected,
                fmt_g(r.deviation),
                r.normalized.map(fmt_g).unwrap_or_default()
            )
        })
        .collect()
}

pub fn report_csv(interval: &IntervalSpec, report: &CountReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for line in report_csv_rows(interval, report) {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn mode_label(mode: Mode) -> &'static str {
    match mode {
        Mode::Exhaustive => "exhaustive",
        Mode::Sample { .. } => "sample",
    }
}
