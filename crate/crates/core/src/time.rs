//! Timestamps with an explicit unknown marker, and validity intervals.
//!
//! Time values are integer UTC seconds since the Unix epoch. The unknown
//! marker serializes as JSON `null` and renders as ISO-8601 otherwise.
//! Ordering comparisons involving an unknown endpoint are rejected rather
//! than defaulted, so `Timestamp` deliberately does not implement
//! `PartialOrd`; use [`Timestamp::try_cmp`].

use std::cmp::Ordering;
use std::fmt;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CoreError;

pub const SECONDS_PER_DAY: i64 = 86_400;

/// A point in time: known UTC seconds since the epoch, or unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Timestamp {
    Known(i64),
    Unknown,
}

impl Timestamp {
    pub fn known(&self) -> Option<i64> {
        match self {
            Timestamp::Known(v) => Some(*v),
            Timestamp::Unknown => None,
        }
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Timestamp::Unknown)
    }

    /// Total ordering over known timestamps; unknown operands are an error.
    pub fn try_cmp(&self, other: &Timestamp) -> Result<Ordering, CoreError> {
        match (self, other) {
            (Timestamp::Known(a), Timestamp::Known(b)) => Ok(a.cmp(b)),
            _ => Err(CoreError::UnknownOrdering),
        }
    }

    /// Parse an ISO-8601 / RFC 3339 string; `null` is handled by serde.
    pub fn parse_iso(s: &str) -> Result<Timestamp, CoreError> {
        DateTime::parse_from_rfc3339(s)
            .map(|dt| Timestamp::Known(dt.timestamp()))
            .map_err(|e| CoreError::validation(format!("bad timestamp `{s}`: {e}")))
    }

    /// ISO-8601 rendering of a known timestamp; `"unknown time"` otherwise.
    pub fn render(&self) -> String {
        match self {
            Timestamp::Known(secs) => iso(*secs),
            Timestamp::Unknown => "unknown time".to_string(),
        }
    }

    /// Difference `self - earlier` in fractional days; unknown operands error.
    pub fn days_since(&self, earlier: &Timestamp) -> Result<f64, CoreError> {
        match (self, earlier) {
            (Timestamp::Known(a), Timestamp::Known(b)) => {
                Ok((*a - *b) as f64 / SECONDS_PER_DAY as f64)
            }
            _ => Err(CoreError::UnknownOrdering),
        }
    }
}

fn iso(secs: i64) -> String {
    match DateTime::<Utc>::from_timestamp(secs, 0) {
        Some(dt) => dt.to_rfc3339_opts(SecondsFormat::Secs, true),
        None => format!("@{secs}"),
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for Timestamp {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Timestamp::Known(secs) => serializer.serialize_str(&iso(*secs)),
            Timestamp::Unknown => serializer.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: Option<String> = Option::deserialize(deserializer)?;
        match raw {
            None => Ok(Timestamp::Unknown),
            Some(s) => Timestamp::parse_iso(&s).map_err(D::Error::custom),
        }
    }
}

/// Validity window attached to an edge. Either endpoint may be unknown;
/// when both are known, `start <= end` is enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TemporalInterval {
    pub start: Timestamp,
    pub end: Timestamp,
}

impl TemporalInterval {
    pub fn new(start: Timestamp, end: Timestamp) -> Result<Self, CoreError> {
        if let (Timestamp::Known(a), Timestamp::Known(b)) = (&start, &end) {
            if a > b {
                return Err(CoreError::InvalidInterval);
            }
        }
        Ok(TemporalInterval { start, end })
    }

    pub fn unknown() -> Self {
        TemporalInterval {
            start: Timestamp::Unknown,
            end: Timestamp::Unknown,
        }
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        TemporalInterval::new(self.start, self.end).map(|_| ())
    }
}
