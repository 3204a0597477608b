//! JSON reports emitted by the command-line tool.
//!
//! Keys are sorted and every float is rounded to 10 significant digits, so
//! identical inputs print byte-identical reports.

use serde::Serialize;
use serde_json::Value;

/// Significant digits kept for floats in reports.
pub const SIGNIFICANT_DIGITS: usize = 10;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub warnings: Vec<String>,
    pub version: String,
}

impl Report {
    pub fn new(command: &str, inputs: Value, results: Value, warnings: Vec<String>) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            results,
            warnings,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// Normalised JSON value: sorted keys, rounded floats.
    pub fn to_value(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report is serialisable");
        round_floats(&mut v);
        v
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report is serialisable");
        s.push('\n');
        s
    }
}

/// Round to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n
                .as_f64()
                .map(round_sig)
                .and_then(serde_json::Number::from_f64)
            {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.907_679_874_686_780_1), 0.907_679_874_7);
        assert_eq!(round_sig(123_456_789_012.0), 123_456_789_000.0);
        assert_eq!(round_sig(0.0), 0.0);
    }

    #[test]
    fn keys_sorted_and_floats_rounded() {
        let r = Report::new(
            "demo",
            json!({"zeta": 1, "alpha": 2}),
            json!({"b": [1.234_567_890_123_4], "a": {"y": 0.1, "x": 3}}),
            vec![],
        );
        let s = r.to_json();
        assert!(s.find("\"alpha\"").unwrap() < s.find("\"zeta\"").unwrap());
        assert!(s.find("\"command\"").unwrap() < s.find("\"version\"").unwrap());
        assert!(s.contains("1.23456789"));
        assert!(!s.contains("1.2345678901"));
        assert_eq!(s, r.to_json());
    }
}
