// Fixed numeric formatting so that outputs are byte-identical across runs.

use serde_json::{Map, Value};

/// Magnitudes below this print as `0`.
pub const ZERO_CUTOFF: f64 = 1e-15;

/// `%.12g`-style: 12 significant digits, trailing zeros dropped, `-0` and
/// rounding dust below [`ZERO_CUTOFF`] printed as `0`.
pub fn num(x: f64) -> String {
    if x.abs() < ZERO_CUTOFF {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp) as usize, x);
        trim(&s)
    } else {
        format!("{}e{}", trim(mantissa), exp)
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// JSON number rounded to 12 significant digits.
pub fn jnum(x: f64) -> Value {
    let rounded: f64 = num(x).parse().unwrap_or(x);
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

/// Ordered JSON object from key/value pairs.
pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Two-column `key  value` listing with keys padded to a common width.
pub fn table(rows: &[(String, String)]) -> String {
    let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
}

/// Columns padded to their widest cell, header first.
pub fn grid(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let mut l = padded.join("  ").trim_end().to_string();
        l.push('\n');
        l
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

/// Comma-separated rows with a header line, LF endings.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(num(1.0 / 3.0), "0.333333333333");
        assert_eq!(num(1.0), "1");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(0.816496580927726), "0.816496580928");
        assert_eq!(num(1.5e-9), "1.5e-9");
        assert_eq!(num(8.66e-17), "0");
        assert_eq!(num(-2.25e14), "-2.25e14");
        assert_eq!(num(123456.0), "123456");
        assert_eq!(num(std::f64::consts::PI / 12.0), "0.261799387799");
    }

    #[test]
    fn rounded_json_numbers() {
        assert_eq!(jnum(2.0 / 3.0).to_string(), "0.666666666667");
        assert_eq!(jnum(-0.0).to_string(), "0.0");
    }
}
