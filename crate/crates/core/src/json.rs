//! Serde adapters that write arbitrary-precision integers as decimal strings.
//!
//! Readers accept either a JSON string or a JSON integer so hand-written
//! inputs like `{"r":0,"c1":[0,0,0,0,0,0],"a":1}` work; writers always emit
//! strings.

use num_bigint::BigInt;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Str(String),
    Num(serde_json::Number),
}

fn parse_repr<E: de::Error>(repr: IntRepr) -> Result<BigInt, E> {
    let text = match repr {
        IntRepr::Str(s) => s,
        IntRepr::Num(n) => {
            if n.is_f64() {
                return Err(E::custom(format!("expected an integer, found {n}")));
            }
            n.to_string()
        }
    };
    text.trim()
        .parse::<BigInt>()
        .map_err(|_| E::custom(format!("invalid integer literal {text:?}")))
}

pub mod int {
    use super::*;

    pub fn serialize<S: Serializer>(value: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        parse_repr(IntRepr::deserialize(d)?)
    }
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(value: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(value.len()))?;
        for x in value {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<IntRepr>::deserialize(d)?
            .into_iter()
            .map(parse_repr)
            .collect()
    }
}

pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(value: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = value
            .iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect())
            .collect();
        s.collect_seq(rows)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<IntRepr>>::deserialize(d)?
            .into_iter()
            .map(|row| row.into_iter().map(parse_repr).collect())
            .collect()
    }
}

pub mod opt_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(
        value: &Option<Vec<Vec<BigInt>>>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        match value {
            Some(m) => super::matrix::serialize(m, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Option<Vec<Vec<BigInt>>>, D::Error> {
        Option::<Vec<Vec<IntRepr>>>::deserialize(d)?
            .map(|rows| {
                rows.into_iter()
                    .map(|row| row.into_iter().map(parse_repr).collect())
                    .collect()
            })
            .transpose()
    }
}

/// Decimal-string rendering of an integer matrix, for hand-built reports.
pub fn matrix_value(m: &[Vec<BigInt>]) -> serde_json::Value {
    serde_json::Value::Array(
        m.iter()
            .map(|row| serde_json::Value::Array(row.iter().map(|x| x.to_string().into()).collect()))
            .collect(),
    )
}

pub fn vec_value(v: &[BigInt]) -> serde_json::Value {
    serde_json::Value::Array(v.iter().map(|x| x.to_string().into()).collect())
}

/// Serializes to a `Value` first so objects come out with sorted keys.
pub fn to_canonical_string<T: serde::Serialize>(value: &T) -> serde_json::Result<String> {
    let v = serde_json::to_value(value)?;
    serde_json::to_string_pretty(&v)
}
