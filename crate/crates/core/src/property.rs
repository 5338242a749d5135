//! Property maps: plain values plus candidate sets for exclusive relations.
//!
//! An exclusive relation slot keeps every value ever observed, each with a
//! confidence, extraction contexts, and the frequency/recency/source inputs
//! the confidence was computed from. Candidates are never overwritten.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::CoreError;
use crate::time::Timestamp;

/// Maximum extraction contexts retained per candidate; oldest evicted first.
pub const MAX_CONTEXTS_PER_CANDIDATE: usize = 16;

/// One retained value for an exclusive slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCandidate {
    pub value: String,
    pub confidence: f64,
    /// Extraction contexts, bounded to [`MAX_CONTEXTS_PER_CANDIDATE`].
    pub context: Vec<String>,
    pub frequency_count: u64,
    pub last_seen: Timestamp,
    pub source_weight: f64,
}

impl PropertyCandidate {
    pub fn validate(&self) -> Result<(), CoreError> {
        if self.value.is_empty() {
            return Err(CoreError::validation("candidate value must be non-empty"));
        }
        if !(0.0..=1.0).contains(&self.confidence) {
            return Err(CoreError::validation("confidence must be in [0,1]"));
        }
        if !(self.source_weight > 0.0 && self.source_weight <= 1.0) {
            return Err(CoreError::validation("source_weight must be in (0,1]"));
        }
        if self.frequency_count == 0 {
            return Err(CoreError::validation("frequency_count must be >= 1"));
        }
        Ok(())
    }

    /// Record another context, evicting the oldest past the cap.
    pub fn push_context(&mut self, ctx: String) {
        self.context.push(ctx);
        if self.context.len() > MAX_CONTEXTS_PER_CANDIDATE {
            let excess = self.context.len() - MAX_CONTEXTS_PER_CANDIDATE;
            self.context.drain(0..excess);
        }
    }
}

/// A property slot: one plain string, or the ordered candidate set of an
/// exclusive relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PropertyValue {
    Plain(String),
    Candidates(Vec<PropertyCandidate>),
}

impl PropertyValue {
    pub fn as_plain(&self) -> Option<&str> {
        match self {
            PropertyValue::Plain(s) => Some(s),
            PropertyValue::Candidates(_) => None,
        }
    }

    pub fn as_candidates(&self) -> Option<&[PropertyCandidate]> {
        match self {
            PropertyValue::Plain(_) => None,
            PropertyValue::Candidates(c) => Some(c),
        }
    }
}

/// Ordered map from relation name to property value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PropertyMap {
    pub entries: BTreeMap<String, PropertyValue>,
}

impl PropertyMap {
    pub fn new() -> Self {
        PropertyMap::default()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&PropertyValue> {
        self.entries.get(key)
    }

    pub fn set_plain(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries
            .insert(key.into(), PropertyValue::Plain(value.into()));
    }

    pub fn slot(&self, key: &str) -> Option<&[PropertyCandidate]> {
        self.entries.get(key).and_then(PropertyValue::as_candidates)
    }

    pub fn slot_mut(&mut self, key: &str) -> Option<&mut Vec<PropertyCandidate>> {
        match self.entries.get_mut(key) {
            Some(PropertyValue::Candidates(c)) => Some(c),
            _ => None,
        }
    }

    /// Candidate values within one slot must be pairwise distinct strings.
    pub fn validate(&self) -> Result<(), CoreError> {
        for (key, value) in &self.entries {
            if let PropertyValue::Candidates(set) = value {
                if set.is_empty() {
                    return Err(CoreError::validation(format!(
                        "exclusive slot `{key}` must hold at least one candidate"
                    )));
                }
                let mut seen = std::collections::BTreeSet::new();
                for cand in set {
                    cand.validate()?;
                    if !seen.insert(cand.value.as_str()) {
                        return Err(CoreError::validation(format!(
                            "duplicate candidate value `{}` in slot `{key}`",
                            cand.value
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Key-wise containment: every key of `self` exists in `other` with a
    /// string-equal plain value; for candidate slots, every candidate value of
    /// `self` must be present in `other`'s set.
    pub fn is_subset_of(&self, other: &PropertyMap) -> bool {
        self.entries.iter().all(|(key, value)| {
            let Some(theirs) = other.entries.get(key) else {
                return false;
            };
            match (value, theirs) {
                (PropertyValue::Plain(a), PropertyValue::Plain(b)) => a == b,
                (PropertyValue::Candidates(a), PropertyValue::Candidates(b)) => a
                    .iter()
                    .all(|c| b.iter().any(|d| d.value == c.value)),
                _ => false,
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cand(value: &str) -> PropertyCandidate {
        PropertyCandidate {
            value: value.into(),
            confidence: 0.5,
            context: vec!["doc:1".into()],
            frequency_count: 1,
            last_seen: Timestamp::Known(0),
            source_weight: 0.9,
        }
    }

    #[test]
    fn untagged_serde_distinguishes_plain_and_candidates() {
        let mut map = PropertyMap::new();
        map.set_plain("genre", "drama");
        map.entries.insert(
            "birth year".into(),
            PropertyValue::Candidates(vec![cand("1974")]),
        );
        let js = serde_json::to_string(&map).unwrap();
        let back: PropertyMap = serde_json::from_str(&js).unwrap();
        assert_eq!(back, map);
        assert!(back.get("genre").unwrap().as_plain().is_some());
        assert!(back.slot("birth year").is_some());
    }

    #[test]
    fn subset_is_keywise() {
        let mut small = PropertyMap::new();
        small.set_plain("a", "1");
        let mut big = PropertyMap::new();
        big.set_plain("a", "1");
        big.set_plain("b", "2");
        assert!(small.is_subset_of(&big));
        assert!(!big.is_subset_of(&small));

        let mut conflicting = PropertyMap::new();
        conflicting.set_plain("a", "other");
        assert!(!conflicting.is_subset_of(&big));
    }

    #[test]
    fn subset_on_candidate_slots_checks_value_presence() {
        let mut ours = PropertyMap::new();
        ours.entries
            .insert("by".into(), PropertyValue::Candidates(vec![cand("x")]));
        let mut theirs = PropertyMap::new();
        theirs.entries.insert(
            "by".into(),
            PropertyValue::Candidates(vec![cand("x"), cand("y")]),
        );
        assert!(ours.is_subset_of(&theirs));
        assert!(!theirs.is_subset_of(&ours));
    }

    #[test]
    fn context_list_is_bounded() {
        let mut c = cand("v");
        for i in 0..40 {
            c.push_context(format!("doc:{i}"));
        }
        assert_eq!(c.context.len(), MAX_CONTEXTS_PER_CANDIDATE);
        assert_eq!(c.context.last().unwrap(), "doc:39");
    }

    #[test]
    fn validation_rejects_duplicate_values_and_empty_slots() {
        let mut map = PropertyMap::new();
        map.entries.insert(
            "k".into(),
            PropertyValue::Candidates(vec![cand("x"), cand("x")]),
        );
        assert!(map.validate().is_err());

        let mut empty = PropertyMap::new();
        empty
            .entries
            .insert("k".into(), PropertyValue::Candidates(vec![]));
        assert!(empty.validate().is_err());
    }
}
