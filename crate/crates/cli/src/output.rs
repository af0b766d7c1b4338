//! CSV and JSON writers.

use std::io::Write;
use std::path::Path;

use gqdlab::SweepRecord;
use serde_json::Value;

pub const CSV_HEADER: &str = "param,gqd_total,nn_sum,residual,theta_bar,converged";

/// `%.12g`: 12 significant digits, trailing zeros dropped, exponent form
/// outside `[1e-5, 1e12)`.
pub fn format_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_owned()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let theta = r.theta_bar.map(format_g).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            format_g(r.param),
            format_g(r.gqd_total),
            format_g(r.nn_sum),
            format_g(r.residual),
            theta,
            r.converged
        ));
    }
    out
}

/// Warning entries for the non-finite numbers among `checks`; JSON output
/// carries `null` in their place.
pub fn nonfinite_warnings(checks: impl IntoIterator<Item = (String, f64)>) -> Vec<String> {
    checks
        .into_iter()
        .filter(|(_, v)| !v.is_finite())
        .map(|(path, v)| format!("{path} is {v}, written as null"))
        .collect()
}

pub fn to_json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    text
}

/// Writes to `path`, or standard output when absent.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| format!("cannot write output: {e}"))
        }
    }
}
