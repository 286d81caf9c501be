//! Encodings of `x² - y² = N` as QUBO models, and their decoders.
//!
//! Both encodings build `(x′ - y′ - N)²` (plus ordering penalties for the
//! sum-of-odds chains) so that an exact factorization has energy zero. The
//! variable maps carry everything needed to decode an assignment, and
//! round-trip through the metadata block of a [`QuboDocument`].
//!
//! [`QuboDocument`]: crate::qubo::QuboDocument

mod bit_pattern;
mod sum_odds;

pub use bit_pattern::{
    decode_bit_pattern, encode_bit_pattern, encode_bit_pattern_with_depth, pattern_for, BitPatternMap, Pattern,
    MAX_PATTERN_DEPTH,
};
pub use sum_odds::{
    decode_sum_of_odds, default_penalty, encode_sum_of_odds, encode_sum_of_odds_with_cap, SumOfOddsMap,
    DEFAULT_VAR_CAP,
};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::fermat::FermatError;
use crate::integers::isqrt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error(transparent)]
    Fermat(#[from] FermatError),
    #[error("encoding needs {count} variables, cap is {cap}")]
    TooManyVariables { count: u128, cap: usize },
    #[error("assignment has {got} entries, map expects {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("pattern depth {0} exceeds the supported maximum")]
    DepthTooLarge(u32),
    #[error("invalid encoder metadata: {0}")]
    Metadata(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Approach {
    SumOdds,
    BitPattern,
}

impl Approach {
    pub fn as_str(self) -> &'static str {
        match self {
            Approach::SumOdds => "sum-odds",
            Approach::BitPattern => "bit-pattern",
        }
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Approach {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum-odds" => Ok(Approach::SumOdds),
            "bit-pattern" => Ok(Approach::BitPattern),
            other => Err(format!("unknown approach `{other}` (expected sum-odds or bit-pattern)")),
        }
    }
}

/// Decoding metadata for either encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarMap {
    SumOfOdds(SumOfOddsMap),
    BitPattern(BitPatternMap),
}

impl VarMap {
    pub fn approach(&self) -> Approach {
        match self {
            VarMap::SumOfOdds(_) => Approach::SumOdds,
            VarMap::BitPattern(_) => Approach::BitPattern,
        }
    }

    pub fn num_vars(&self) -> usize {
        match self {
            VarMap::SumOfOdds(m) => m.num_vars(),
            VarMap::BitPattern(m) => m.num_vars(),
        }
    }

    /// Candidate `(x, y)` roots, or `None` when the assignment cannot be a pair
    /// of squares (broken prefix chain, or a non-square decoded value).
    ///
    /// The caller still has to check `x² - y² = N`.
    pub fn decode_roots(&self, assignment: &[bool]) -> Result<Option<(BigUint, BigUint)>, EncodeError> {
        match self {
            VarMap::SumOfOdds(m) => {
                Ok(decode_sum_of_odds(m, assignment)?.map(|(x2, y2)| (isqrt(&x2), isqrt(&y2))))
            }
            VarMap::BitPattern(m) => decode_bit_pattern(m, assignment),
        }
    }

    /// Metadata block for a QUBO document: `N`, approach tag and the map.
    pub fn to_metadata(&self, n: &BigUint) -> Value {
        let map = match self {
            VarMap::SumOfOdds(m) => m.to_json(),
            VarMap::BitPattern(m) => m.to_json(),
        };
        json!({
            "N": n.to_string(),
            "approach": self.approach().as_str(),
            "map": map,
        })
    }

    pub fn from_metadata(metadata: &Value) -> Result<(BigUint, VarMap), EncodeError> {
        let n = field_big(metadata, "N")?;
        let approach: Approach = field_str(metadata, "approach")?.parse().map_err(EncodeError::Metadata)?;
        let map = metadata.get("map").ok_or_else(|| missing("map"))?;
        let var_map = match approach {
            Approach::SumOdds => VarMap::SumOfOdds(SumOfOddsMap::from_json(map)?),
            Approach::BitPattern => VarMap::BitPattern(BitPatternMap::from_json(map)?),
        };
        Ok((n, var_map))
    }
}

fn missing(field: &str) -> EncodeError {
    EncodeError::Metadata(format!("missing or malformed field `{field}`"))
}

fn field_str<'a>(v: &'a Value, field: &str) -> Result<&'a str, EncodeError> {
    v.get(field).and_then(Value::as_str).ok_or_else(|| missing(field))
}

fn parse_decimal<T: FromStr>(s: &str, field: &str) -> Result<T, EncodeError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(missing(field));
    }
    s.parse().map_err(|_| missing(field))
}

fn field_big(v: &Value, field: &str) -> Result<BigUint, EncodeError> {
    parse_decimal(field_str(v, field)?, field)
}

fn field_num<T: FromStr>(v: &Value, field: &str) -> Result<T, EncodeError> {
    parse_decimal(field_str(v, field)?, field)
}

fn decimal_list<T: ToString>(items: &[T]) -> Value {
    Value::Array(items.iter().map(|i| Value::String(i.to_string())).collect())
}

fn field_num_list<T: FromStr>(v: &Value, field: &str) -> Result<Vec<T>, EncodeError> {
    v.get(field)
        .and_then(Value::as_array)
        .ok_or_else(|| missing(field))?
        .iter()
        .map(|item| parse_decimal(item.as_str().ok_or_else(|| missing(field))?, field))
        .collect()
}

fn object(entries: Vec<(&str, Value)>) -> Value {
    Value::Object(entries.into_iter().map(|(k, v)| (k.to_owned(), v)).collect::<Map<_, _>>())
}

fn check_len(expected: usize, assignment: &[bool]) -> Result<(), EncodeError> {
    if assignment.len() != expected {
        Err(EncodeError::LengthMismatch { expected, got: assignment.len() })
    } else {
        Ok(())
    }
}
