//! Extended nonnegative values and covering scales.
//!
//! Content values and covering scales both need a genuine "+infinity" that
//! cannot leak into ordinary float arithmetic by accident, so each is an
//! explicit two-variant enum rather than an `f64` sentinel.

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A nonnegative content value, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContentValue {
    Finite(f64),
    Infinite,
}

impl ContentValue {
    pub fn finite(v: f64) -> Self {
        debug_assert!(v.is_finite() && v >= 0.0);
        ContentValue::Finite(v)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ContentValue::Finite(_))
    }

    /// Finite payload, or `None` for the infinite marker.
    pub fn as_finite(self) -> Option<f64> {
        match self {
            ContentValue::Finite(v) => Some(v),
            ContentValue::Infinite => None,
        }
    }

    /// Finite payload; panics on the infinite marker.
    pub fn expect_finite(self) -> f64 {
        self.as_finite().expect("content value is infinite")
    }

    pub fn scale(self, c: f64) -> ContentValue {
        match self {
            ContentValue::Finite(v) => ContentValue::Finite(v * c),
            ContentValue::Infinite => ContentValue::Infinite,
        }
    }
}

impl std::ops::Add for ContentValue {
    type Output = ContentValue;

    fn add(self, other: ContentValue) -> ContentValue {
        match (self, other) {
            (ContentValue::Finite(a), ContentValue::Finite(b)) => ContentValue::Finite(a + b),
            _ => ContentValue::Infinite,
        }
    }
}

impl PartialOrd for ContentValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ContentValue::Finite(a), ContentValue::Finite(b)) => a.partial_cmp(b),
            (ContentValue::Finite(_), ContentValue::Infinite) => Some(Ordering::Less),
            (ContentValue::Infinite, ContentValue::Finite(_)) => Some(Ordering::Greater),
            (ContentValue::Infinite, ContentValue::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for ContentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContentValue::Finite(v) => write!(f, "{v}"),
            ContentValue::Infinite => write!(f, "inf"),
        }
    }
}

/// A covering scale: blocks must have diameter strictly below it.
///
/// `Infinite` recovers the unrestricted content; finite scales must be
/// strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Delta {
    Finite(f64),
    Infinite,
}

impl Delta {
    /// A finite scale; fails unless `0 < d < inf`.
    pub fn finite(d: f64) -> Result<Self> {
        if d.is_finite() && d > 0.0 {
            Ok(Delta::Finite(d))
        } else {
            Err(Error::InvalidDelta(d))
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Delta::Finite(_))
    }

    pub fn as_finite(self) -> Option<f64> {
        match self {
            Delta::Finite(d) => Some(d),
            Delta::Infinite => None,
        }
    }

    /// Does a set of the given diameter fit in a block at this scale?
    pub fn admits(self, diam: f64) -> bool {
        match self {
            Delta::Finite(d) => diam < d,
            Delta::Infinite => true,
        }
    }

    /// Pointwise power; used by snowflake re-indexing.
    pub fn powf(self, t: f64) -> Delta {
        match self {
            Delta::Finite(d) => Delta::Finite(d.powf(t)),
            Delta::Infinite => Delta::Infinite,
        }
    }
}

impl PartialOrd for Delta {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Delta::Finite(a), Delta::Finite(b)) => a.partial_cmp(b),
            (Delta::Finite(_), Delta::Infinite) => Some(Ordering::Less),
            (Delta::Infinite, Delta::Finite(_)) => Some(Ordering::Greater),
            (Delta::Infinite, Delta::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Delta::Finite(d) => write!(f, "{d}"),
            Delta::Infinite => write!(f, "inf"),
        }
    }
}

/// `diam^alpha` with the conventions for nonempty sets: `0^0 = 1`
/// (a nonempty set always costs 1 at alpha = 0) and `0^alpha = 0` for
/// alpha > 0.
pub fn alpha_cost(diam: f64, alpha: f64) -> f64 {
    debug_assert!(diam >= 0.0 && alpha >= 0.0);
    if alpha == 0.0 {
        1.0
    } else if diam == 0.0 {
        0.0
    } else {
        diam.powf(alpha)
    }
}

// JSON form: plain number for finite values, the string "inf" otherwise.

impl Serialize for ContentValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ContentValue::Finite(v) => s.serialize_f64(*v),
            ContentValue::Infinite => s.serialize_str("inf"),
        }
    }
}

impl Serialize for Delta {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Delta::Finite(v) => s.serialize_f64(*v),
            Delta::Infinite => s.serialize_str("inf"),
        }
    }
}

struct ExtendedVisitor;

impl<'de> Visitor<'de> for ExtendedVisitor {
    type Value = Option<f64>;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a nonnegative number or the string \"inf\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
        Ok(Some(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
        Ok(Some(v as f64))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
        Ok(Some(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
        match v {
            "inf" | "+inf" | "infinity" => Ok(None),
            _ => Err(E::custom(format!(
                "expected a number or \"inf\", got {v:?}"
            ))),
        }
    }
}

impl<'de> Deserialize<'de> for ContentValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match d.deserialize_any(ExtendedVisitor)? {
            Some(v) if v.is_finite() && v >= 0.0 => Ok(ContentValue::Finite(v)),
            Some(v) => Err(de::Error::custom(format!("invalid content value {v}"))),
            None => Ok(ContentValue::Infinite),
        }
    }
}

impl<'de> Deserialize<'de> for Delta {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match d.deserialize_any(ExtendedVisitor)? {
            Some(v) if v.is_finite() && v > 0.0 => Ok(Delta::Finite(v)),
            Some(v) => Err(de::Error::custom(format!("invalid delta {v}"))),
            None => Ok(Delta::Infinite),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_cost_conventions() {
        assert_eq!(alpha_cost(0.0, 0.0), 1.0);
        assert_eq!(alpha_cost(0.5, 0.0), 1.0);
        assert_eq!(alpha_cost(0.0, 0.7), 0.0);
        assert_eq!(alpha_cost(2.0, 1.0), 2.0);
        assert!((alpha_cost(4.0, 0.5) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn delta_admits_is_strict() {
        let d = Delta::finite(1.0).unwrap();
        assert!(d.admits(0.999999));
        assert!(!d.admits(1.0));
        assert!(Delta::Infinite.admits(f64::MAX));
    }

    #[test]
    fn rejects_null_delta() {
        assert!(Delta::finite(0.0).is_err());
        assert!(Delta::finite(-1.0).is_err());
        assert!(Delta::finite(f64::INFINITY).is_err());
    }

    #[test]
    fn ordering_puts_infinite_on_top() {
        assert!(ContentValue::Finite(1e300) < ContentValue::Infinite);
        assert!(Delta::Finite(3.0) < Delta::Infinite);
    }

    #[test]
    fn json_round_trip() {
        let v: ContentValue = serde_json::from_str("1.5").unwrap();
        assert_eq!(v, ContentValue::Finite(1.5));
        let v: ContentValue = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(v, ContentValue::Infinite);
        assert_eq!(serde_json::to_string(&Delta::Infinite).unwrap(), "\"inf\"");
        let d: Delta = serde_json::from_str("0.25").unwrap();
        assert_eq!(d, Delta::Finite(0.25));
        assert!(serde_json::from_str::<Delta>("0.0").is_err());
    }
}
