//! Canonical text form of a QUBO model.
//!
//! ```json
//! {
//!   "version": 1,
//!   "num_vars": 2,
//!   "offset": "1",
//!   "linear": { "0": "-1" },
//!   "quadratic": [[0, 1, "4"]],
//!   "metadata": {}
//! }
//! ```
//!
//! Every big integer is a decimal string. Linear keys and quadratic entries
//! are written in ascending index order, so the output is byte-stable.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use super::QuboModel;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at line {line}, column {column}: {message}")]
pub struct ParseError {
    /// 1-based; 0 when the error is about document content rather than syntax.
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn semantic(message: impl Into<String>) -> Self {
        Self { line: 0, column: 0, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Decimal(BigInt);

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let ok = !s.is_empty() && s.strip_prefix('-').unwrap_or(&s).bytes().all(|b| b.is_ascii_digit());
        if !ok || s == "-" {
            return Err(de::Error::custom(format!("`{s}` is not a decimal integer")));
        }
        s.parse().map(Decimal).map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    version: u32,
    num_vars: usize,
    offset: Decimal,
    linear: BTreeMap<usize, Decimal>,
    quadratic: Vec<(usize, usize, Decimal)>,
    #[serde(default)]
    metadata: Value,
}

/// A model plus free-form metadata describing how to decode it.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboDocument {
    pub model: QuboModel,
    pub metadata: Value,
}

impl QuboDocument {
    pub fn new(model: QuboModel, metadata: Value) -> Self {
        Self { model, metadata }
    }

    pub fn to_json(&self) -> String {
        let raw = RawDocument {
            version: FORMAT_VERSION,
            num_vars: self.model.num_vars(),
            offset: Decimal(self.model.offset().clone()),
            linear: self.model.linear().iter().map(|(&i, c)| (i, Decimal(c.clone()))).collect(),
            quadratic: self.model.quadratic().iter().map(|(&(i, j), c)| (i, j, Decimal(c.clone()))).collect(),
            metadata: match &self.metadata {
                Value::Null => Value::Object(Default::default()),
                other => other.clone(),
            },
        };
        let mut out = serde_json::to_string_pretty(&raw).expect("document serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        let raw: RawDocument = serde_json::from_str(text)
            .map_err(|e| ParseError { line: e.line(), column: e.column(), message: e.to_string() })?;
        if raw.version != FORMAT_VERSION {
            return Err(ParseError::semantic(format!("unsupported version {}", raw.version)));
        }
        let mut quadratic = BTreeMap::new();
        for (i, j, c) in raw.quadratic {
            if i >= j {
                return Err(ParseError::semantic(format!("quadratic entry [{i}, {j}] must have i < j")));
            }
            if quadratic.insert((i, j), c.0).is_some() {
                return Err(ParseError::semantic(format!("duplicate quadratic entry [{i}, {j}]")));
            }
        }
        let linear = raw.linear.into_iter().map(|(i, c)| (i, c.0)).collect();
        let model = QuboModel::from_parts(raw.num_vars, linear, quadratic, raw.offset.0)
            .map_err(|e| ParseError::semantic(e.to_string()))?;
        Ok(Self { model, metadata: raw.metadata })
    }
}

impl fmt::Display for QuboDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::bi;
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;
    use serde_json::json;

    #[test]
    fn empty_model_document() {
        let doc = QuboDocument::new(QuboModel::new(0), Value::Null);
        let text = doc.to_json();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v, json!({"version": 1, "num_vars": 0, "offset": "0", "linear": {}, "quadratic": [], "metadata": {}}));
        assert_eq!(QuboDocument::from_json(&text).unwrap().model, QuboModel::new(0));
    }

    #[test]
    fn single_variable_document() {
        let mut m = QuboModel::new(1);
        m.add_squared_linear(&[(0, bi(1))], &bi(-1), &BigUint::from(1u32)).unwrap();
        let text = QuboDocument::new(m.clone(), json!({"N": "15"})).to_json();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["linear"]["0"], "-1");
        assert_eq!(v["offset"], "1");
        let back = QuboDocument::from_json(&text).unwrap();
        assert_eq!(back.model, m);
        assert_eq!(back.metadata["N"], "15");
    }

    #[test]
    fn linear_keys_are_in_numeric_order() {
        let mut m = QuboModel::new(12);
        for i in [11, 2, 10, 1] {
            m.add_linear(i, bi(i as i64)).unwrap();
        }
        let text = QuboDocument::new(m, Value::Null).to_json();
        let positions: Vec<usize> = ["\"1\"", "\"2\"", "\"10\"", "\"11\""].iter().map(|k| text.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = QuboDocument::from_json("{\n  \"version\": 1,\n  \"num_vars\": x\n}").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.column > 0);
    }

    #[test]
    fn bad_coefficients_are_rejected() {
        let base = |lin: &str| {
            format!(r#"{{"version":1,"num_vars":2,"offset":"0","linear":{lin},"quadratic":[],"metadata":{{}}}}"#)
        };
        assert!(QuboDocument::from_json(&base(r#"{"0":"1.5"}"#)).is_err());
        assert!(QuboDocument::from_json(&base(r#"{"0":3}"#)).is_err());
        assert!(QuboDocument::from_json(&base(r#"{"0":"-"}"#)).is_err());
        assert!(QuboDocument::from_json(&base(r#"{"5":"1"}"#)).is_err());
        assert!(QuboDocument::from_json(&base(r#"{"0":"-12345678901234567890123"}"#)).is_ok());
    }

    #[test]
    fn bad_quadratic_entries_are_rejected() {
        let doc = |quad: &str| {
            format!(r#"{{"version":1,"num_vars":3,"offset":"0","linear":{{}},"quadratic":{quad}}}"#)
        };
        assert!(QuboDocument::from_json(&doc(r#"[[1,0,"2"]]"#)).is_err());
        assert!(QuboDocument::from_json(&doc(r#"[[0,1,"2"],[0,1,"3"]]"#)).is_err());
        assert!(QuboDocument::from_json(&doc(r#"[[0,3,"2"]]"#)).is_err());
        assert!(QuboDocument::from_json(&doc(r#"[[0,2,"2"]]"#)).is_ok());
        let wrong_version = r#"{"version":2,"num_vars":0,"offset":"0","linear":{},"quadratic":[]}"#;
        assert!(QuboDocument::from_json(wrong_version).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_and_byte_stability(
            n in 1usize..8,
            lin in prop::collection::vec((0usize..8, any::<i64>()), 0..8),
            quad in prop::collection::vec((0usize..8, 0usize..8, any::<i64>()), 0..12),
            off in any::<i64>(),
        ) {
            let mut m = QuboModel::new(n);
            for (i, c) in lin {
                m.add_linear(i % n, bi(c) * bi(c)).unwrap();
            }
            for (i, j, c) in quad {
                m.add_quadratic(i % n, j % n, bi(c)).unwrap();
            }
            m.add_offset(bi(off));
            let doc = QuboDocument::new(m, json!({"approach": "test"}));
            let text = doc.to_json();
            let back = QuboDocument::from_json(&text).unwrap();
            prop_assert_eq!(&back, &doc);
            prop_assert_eq!(back.to_json(), text);
        }
    }
}
