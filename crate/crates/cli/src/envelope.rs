//! Output envelope and JSON helpers.

use std::fmt::Display;

use serde::{Serialize, Serializer};
use serde_json::Value;

/// A float that serializes non-finite values as the strings
/// `"inf"`, `"-inf"` and `"nan"` so output stays valid JSON.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = self.0;
        if v.is_finite() {
            s.serialize_f64(if v == 0.0 { 0.0 } else { v })
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

/// Exact values (big rationals, integers) go out as strings.
pub fn exact<T: Display>(v: &T) -> String {
    v.to_string()
}

#[derive(Debug, Serialize)]
pub struct Envelope {
    pub command: &'static str,
    pub inputs: Value,
    pub results: Value,
    pub warnings: Vec<String>,
    pub version: &'static str,
}

impl Envelope {
    pub fn new(command: &'static str, inputs: Value, results: impl Serialize, warnings: Vec<String>) -> Self {
        Envelope {
            command,
            inputs,
            results: serde_json::to_value(results).expect("results serialize"),
            warnings,
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentinels() {
        let v = serde_json::to_string(&[Real(1.5), Real(f64::INFINITY), Real(f64::NEG_INFINITY), Real(f64::NAN)]).unwrap();
        assert_eq!(v, r#"[1.5,"inf","-inf","nan"]"#);
    }
}
