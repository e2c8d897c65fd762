//! Exact rational helpers and the `{"num": "...", "den": "..."}` wire encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn floor_i64(v: &Q) -> i64 {
    i64::try_from(v.floor().to_integer()).expect("value fits in i64")
}

pub fn ceil_i64(v: &Q) -> i64 {
    i64::try_from(v.ceil().to_integer()).expect("value fits in i64")
}

/// Largest power of two not exceeding `v` (for `v > 0`).
pub fn pow2_below(v: &Q) -> Q {
    assert!(v.is_positive());
    let mut p = Q::one();
    while &p > v {
        p /= q(2);
    }
    while &(&p * q(2)) <= v {
        p *= q(2);
    }
    p
}

pub fn to_f64(v: &Q) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(0.0)
}

#[derive(Serialize, Deserialize)]
struct Wire {
    num: String,
    den: String,
}

pub fn encode(v: &Q) -> serde_json::Value {
    serde_json::json!({ "num": v.numer().to_string(), "den": v.denom().to_string() })
}

fn from_wire(w: Wire) -> Result<Q, String> {
    let num: BigInt = w.num.trim().parse().map_err(|_| format!("bad numerator {:?}", w.num))?;
    let den: BigInt = w.den.trim().parse().map_err(|_| format!("bad denominator {:?}", w.den))?;
    if !den.is_positive() {
        return Err(format!("denominator must be positive, got {}", den));
    }
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(Q::new(num, den))
}

pub fn serialize<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
    Wire { num: v.numer().to_string(), den: v.denom().to_string() }.serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
    from_wire(Wire::deserialize(d)?).map_err(D::Error::custom)
}

pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref()
            .map(|v| Wire { num: v.numer().to_string(), den: v.denom().to_string() })
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        Option::<Wire>::deserialize(d)?.map(from_wire).transpose().map_err(D::Error::custom)
    }
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|v| Wire { num: v.numer().to_string(), den: v.denom().to_string() })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        Vec::<Wire>::deserialize(d)?
            .into_iter()
            .map(from_wire)
            .collect::<Result<_, _>>()
            .map_err(D::Error::custom)
    }
}

pub fn parse_decimal(text: &str) -> Option<Q> {
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let digits = format!("{}{}", int, frac);
    let n: BigInt = digits.parse().ok()?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    let v = Q::new(n, d);
    Some(if neg { -v } else { v })
}

pub fn display(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_round_trip() {
        let v = qr(-7, 12);
        let j = encode(&v);
        assert_eq!(j, serde_json::json!({"num": "-7", "den": "12"}));
        let w: Wire = serde_json::from_value(j).unwrap();
        assert_eq!(from_wire(w).unwrap(), v);
    }

    #[test]
    fn rejects_nonpositive_denominator() {
        assert!(from_wire(Wire { num: "1".into(), den: "-2".into() }).is_err());
        assert!(from_wire(Wire { num: "1".into(), den: "0".into() }).is_err());
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_decimal("0.125"), Some(qr(1, 8)));
        assert_eq!(parse_decimal("-3/6"), Some(qr(-1, 2)));
        assert_eq!(parse_decimal("4"), Some(q(4)));
        assert_eq!(parse_decimal("x"), None);
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(pow2_below(&qr(3, 10)), qr(1, 4));
        assert_eq!(pow2_below(&q(5)), q(4));
        assert_eq!(pow2_below(&q(1)), q(1));
    }
}
