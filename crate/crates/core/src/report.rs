//! Deterministic JSON rendering for reports: every floating-point number is
//! written with 17 significant decimal digits so output is byte-identical
//! across runs for a fixed seed and reproducible from other languages.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

/// Serialize any value to JSON text with floats at 17 significant digits.
/// Object key order follows declaration order; non-finite floats render as
/// null (JSON has no representation for them).
pub fn to_json_17<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)
        .map_err(|e| Error::Input(format!("serialization failed: {e}")))?;
    let mut out = String::new();
    render(&v, &mut out);
    Ok(out)
}

/// 17-significant-digit decimal form of a finite f64.
pub fn format_f64_17(x: f64) -> String {
    format!("{x:.16e}")
}

fn render(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                match n.as_f64() {
                    Some(f) if f.is_finite() => out.push_str(&format_f64_17(f)),
                    _ => out.push_str("null"),
                }
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serializes"))
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                render(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).expect("key serializes"));
                out.push(':');
                render(item, out);
            }
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Serialize;

    #[derive(Serialize)]
    struct Sample {
        name: String,
        value: f64,
        count: usize,
        items: Vec<f64>,
        flag: bool,
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64_17(3.0), "3.0000000000000000e0");
        assert_eq!(format_f64_17(0.1), "1.0000000000000001e-1");
        assert_eq!(format_f64_17(-12345.678), "-1.2345678000000000e4");
    }

    #[test]
    fn declaration_order_and_numbers() {
        let s = Sample {
            name: "t".into(),
            value: 0.5,
            count: 3,
            items: vec![1.0, -2.25],
            flag: true,
        };
        let json = to_json_17(&s).unwrap();
        assert_eq!(
            json,
            "{\"name\":\"t\",\"value\":5.0000000000000000e-1,\"count\":3,\
             \"items\":[1.0000000000000000e0,-2.2500000000000000e0],\"flag\":true}"
        );
        // Valid JSON (exponent form numbers parse back).
        let back: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(back["value"].as_f64().unwrap(), 0.5);
    }

    #[test]
    fn deterministic() {
        let s = Sample {
            name: "x".into(),
            value: 1.0 / 3.0,
            count: 1,
            items: vec![],
            flag: false,
        };
        assert_eq!(to_json_17(&s).unwrap(), to_json_17(&s).unwrap());
    }
}
