//! Exact rationals, the edge probability type, and their JSON and decimal forms.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{LabError, Result};

pub type Rational = BigRational;

/// Edge probability as a reduced fraction on the closed interval [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Prob {
    num: u64,
    den: u64,
}

impl Prob {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(LabError::invalid("probability denominator must be positive"));
        }
        if num > den {
            return Err(LabError::invalid(format!("probability {num}/{den} exceeds 1")));
        }
        let g = num.gcd(&den);
        Ok(Prob { num: num / g, den: den / g })
    }

    pub const HALF: Prob = Prob { num: 1, den: 2 };
    pub const ZERO: Prob = Prob { num: 0, den: 1 };
    pub const ONE: Prob = Prob { num: 1, den: 1 };

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn complement(&self) -> Prob {
        Prob { num: self.den - self.num, den: self.den }
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    /// `p^k` exactly.
    pub fn pow(&self, k: usize) -> Rational {
        rational_pow(&self.to_rational(), k)
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Prob {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((a, b)) => {
                let a = a.trim().parse().map_err(|_| LabError::invalid(format!("bad probability {s:?}")))?;
                let b = b.trim().parse().map_err(|_| LabError::invalid(format!("bad probability {s:?}")))?;
                Prob::new(a, b)
            }
            None => {
                let a = s.parse().map_err(|_| LabError::invalid(format!("bad probability {s:?}")))?;
                Prob::new(a, 1)
            }
        }
    }
}

impl Serialize for Prob {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rational_to_json(&self.to_rational()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Prob {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        let r = rational_from_json(&v).map_err(serde::de::Error::custom)?;
        let num = r.numer().to_u64();
        let den = r.denom().to_u64();
        match (num, den) {
            (Some(n), Some(d)) => Prob::new(n, d).map_err(serde::de::Error::custom),
            _ => Err(serde::de::Error::custom("probability must lie in [0, 1]")),
        }
    }
}

pub fn rational_pow(base: &Rational, k: usize) -> Rational {
    num_traits::pow(base.clone(), k)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `{"num": "7", "den": "8"}`.
pub fn rational_to_json(r: &Rational) -> Value {
    json!({"num": r.numer().to_string(), "den": r.denom().to_string()})
}

/// Accepts `{"num","den"}` objects (strings or integers), `"a/b"` strings, and plain integers.
pub fn rational_from_json(v: &Value) -> Result<Rational> {
    let bad = || LabError::invalid(format!("not a rational: {v}"));
    let parse_int = |x: &Value| -> Result<BigInt> {
        match x {
            Value::String(s) => s.trim().parse::<BigInt>().map_err(|_| bad()),
            Value::Number(n) => n
                .as_i64()
                .map(BigInt::from)
                .or_else(|| n.as_u64().map(BigInt::from))
                .ok_or_else(bad),
            _ => Err(bad()),
        }
    };
    match v {
        Value::Object(m) => {
            let num = parse_int(m.get("num").ok_or_else(bad)?)?;
            let den = parse_int(m.get("den").ok_or_else(bad)?)?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(num, den))
        }
        Value::String(s) => match s.split_once('/') {
            Some((a, b)) => {
                let num: BigInt = a.trim().parse().map_err(|_| bad())?;
                let den: BigInt = b.trim().parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(Rational::new(num, den))
            }
            None => Ok(Rational::from_integer(s.trim().parse().map_err(|_| bad())?)),
        },
        Value::Number(_) => Ok(Rational::from_integer(parse_int(v)?)),
        _ => Err(bad()),
    }
}

/// Serde adapter for `Rational` fields using the `{"num","den"}` form.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        rational_to_json(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let v = Value::deserialize(d)?;
        rational_from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(r: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        Value::Array(r.iter().map(rational_to_json).collect()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<Value>::deserialize(d)?;
        v.iter()
            .map(|x| rational_from_json(x).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for `Vec<Vec<Rational>>`.
pub mod serde_rational_vec_vec {
    use super::*;

    pub fn serialize<S: Serializer>(r: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        Value::Array(r.iter().map(|row| Value::Array(row.iter().map(rational_to_json).collect())).collect())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let v = Vec::<Vec<Value>>::deserialize(d)?;
        v.iter()
            .map(|row| row.iter().map(|x| rational_from_json(x).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering with exactly `digits` significant digits, rounding half away from zero.
///
/// `7/8` renders as `0.875000000000` at 12 digits. Zero renders as `0.` followed by
/// `digits - 1` zeros.
pub fn to_sig_decimal(r: &Rational, digits: usize) -> String {
    assert!(digits >= 1);
    if r.is_zero() {
        return format!("0.{}", "0".repeat(digits - 1));
    }
    let neg = r.is_negative();
    let a = r.abs();
    let ten = BigInt::from(10);
    // Find e with 10^e <= a < 10^(e+1).
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while a < pow10(e) {
        e -= 1;
    }
    while a >= pow10(e + 1) {
        e += 1;
    }
    let scaled = &a * pow10(digits as i64 - 1 - e);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut n = (scaled + half).floor().to_integer();
    if n >= num_traits::pow(ten.clone(), digits) {
        n /= &ten;
        e += 1;
    }
    let s = n.to_string();
    debug_assert_eq!(s.len(), digits);
    let body = if e >= digits as i64 - 1 {
        format!("{s}{}", "0".repeat((e - digits as i64 + 1) as usize))
    } else if e >= 0 {
        let k = (e + 1) as usize;
        format!("{}.{}", &s[..k], &s[k..])
    } else {
        format!("0.{}{s}", "0".repeat((-e - 1) as usize))
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// `to_sig_decimal` for floats, via the exact binary value of `x`.
pub fn f64_to_sig_decimal(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = Rational::from_float(x).expect("finite float");
    to_sig_decimal(&r, digits)
}
