//! CSV and JSON emission with a provenance header.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Formats like C's `%.17g`.
pub fn fmt_g17(x: f64) -> String {
    const P: i32 = 17;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..P).contains(&exp) {
        let fixed = format!("{:.*}", (P - 1 - exp) as usize, x);
        strip_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip_zeros(mantissa), sign, exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// First 16 hex digits of the SHA-256 of `text`.
pub fn config_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(8).fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn header_text(hash: &str) -> String {
    format!("psystem {VERSION} config={hash}")
}

/// Rows of floats, with the header comment and a column line.
pub fn write_csv(path: &Path, hash: &str, columns: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> io::Result<()> {
    let mut out = format!("# {}\n{}\n", header_text(hash), columns.join(","));
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(fmt_g17).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out)
}

/// JSON cannot carry a comment line, so the header goes in a leading
/// `"header"` field of the top-level object.
pub fn write_json<T: Serialize>(path: &Path, hash: &str, value: &T) -> io::Result<()> {
    fs::write(path, json_with_header(hash, value)?)
}

pub fn json_with_header<T: Serialize>(hash: &str, value: &T) -> io::Result<String> {
    let body = serde_json::to_value(value).map_err(io::Error::other)?;
    let mut map = serde_json::Map::new();
    map.insert("header".into(), serde_json::Value::String(header_text(hash)));
    match body {
        serde_json::Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("data".into(), other);
        }
    }
    let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(map)).map_err(io::Error::other)?;
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_matches_printf() {
        // reference strings from C printf("%.17g")
        let cases = [
            (0.1, "0.10000000000000001"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (1e-5, "1.0000000000000001e-05"),
            (123456789.0, "123456789"),
            (1e17, "1e+17"),
            (1e16, "10000000000000000"),
            (std::f64::consts::PI, "3.1415926535897931"),
            (0.0001, "0.0001"),
            (6.02214076e23, "6.0221407599999999e+23"),
            (-1.5e-300, "-1.5000000000000001e-300"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g17(x), want, "{x}");
        }
    }

    #[test]
    fn g17_round_trips() {
        for x in [1.0 / 3.0, 2.0f64.sqrt(), 1e-310, f64::MAX, -f64::MIN_POSITIVE] {
            assert_eq!(fmt_g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn hash_is_stable() {
        assert_eq!(config_hash("law = \"quadratic\"\n"), config_hash("law = \"quadratic\"\n"));
        assert_ne!(config_hash("n = 64\n"), config_hash("n = 128\n"));
        assert_eq!(config_hash("").len(), 16);
    }

    #[test]
    fn json_header_comes_first() {
        #[derive(Serialize)]
        struct S {
            a: f64,
        }
        let text = json_with_header("abc", &S { a: 1.5 }).unwrap();
        let first_key = text.lines().nth(1).unwrap().trim();
        assert!(first_key.starts_with("\"header\": \"psystem"));
        assert!(text.contains("\"a\": 1.5"));
    }
}
