//! Text encoders and the canonical concatenation templates.
//!
//! The offline encoder is a feature-hashing bag of words: lowercase, split
//! on non-alphanumerics, hash each token and each adjacent-token bigram with
//! FNV-1a (64-bit) into 256 signed buckets, then L2-normalize. It is a pure
//! function of its input, so golden vectors stay stable across releases.

use crate::error::EmbedError;
use crate::vector::Vector;

pub const DEFAULT_DIMENSION: usize = 256;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// FNV-1a 64-bit over the raw bytes.
pub fn fnv1a_64(bytes: &[u8]) -> u64 {
    let mut hash = FNV_OFFSET;
    for b in bytes {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

/// Anything that can turn text into a vector of a fixed dimension.
pub trait TextEncoder: Send + Sync {
    fn encode(&self, text: &str) -> Result<Vector, EmbedError>;
    fn dimension(&self) -> usize;
}

/// The deterministic feature-hashing encoder.
#[derive(Debug, Clone)]
pub struct HashEncoder {
    dimension: usize,
}

impl Default for HashEncoder {
    fn default() -> Self {
        HashEncoder {
            dimension: DEFAULT_DIMENSION,
        }
    }
}

impl HashEncoder {
    pub fn new(dimension: usize) -> Self {
        HashEncoder { dimension }
    }

    fn bump(&self, components: &mut [f64], feature: &str) {
        let hash = fnv1a_64(feature.as_bytes());
        let bucket = (hash % self.dimension as u64) as usize;
        // top bit decides the contribution sign
        let sign = if hash >> 63 == 0 { 1.0 } else { -1.0 };
        components[bucket] += sign;
    }
}

impl TextEncoder for HashEncoder {
    fn encode(&self, text: &str) -> Result<Vector, EmbedError> {
        let tokens = tokenize(text);
        let mut vector = Vector::zeros(self.dimension);
        if tokens.is_empty() {
            return Ok(vector);
        }
        for token in &tokens {
            self.bump(&mut vector.components, token);
        }
        for pair in tokens.windows(2) {
            self.bump(&mut vector.components, &format!("{} {}", pair[0], pair[1]));
        }
        vector.normalize();
        Ok(vector)
    }

    fn dimension(&self) -> usize {
        self.dimension
    }
}

/// Lowercased alphanumeric token stream; everything else is a separator.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// Canonical template for entity encoding (type, name, description jointly).
pub fn entity_text(entity_type: &str, name: &str, description: &str) -> String {
    format!("type: {entity_type} | name: {name} | desc: {description}")
}

/// Canonical template for a query mention with its temporal context.
pub fn mention_text(mention: &str, temporal_context: &str) -> String {
    format!("mention: {mention} | time: {temporal_context}")
}

/// Canonical template for a relation schema triple.
pub fn schema_text(subject_type: &str, relation: &str, object_type: &str) -> String {
    format!("{subject_type} -[{relation}]-> {object_type}")
}

pub fn encode_entity(
    encoder: &dyn TextEncoder,
    entity_type: &str,
    name: &str,
    description: &str,
) -> Result<Vector, EmbedError> {
    if name.is_empty() {
        return Err(EmbedError::validation("entity name must be non-empty"));
    }
    encoder.encode(&entity_text(entity_type, name, description))
}

pub fn encode_mention_with_time(
    encoder: &dyn TextEncoder,
    mention: &str,
    temporal_context: &str,
) -> Result<Vector, EmbedError> {
    if mention.is_empty() {
        return Err(EmbedError::validation("mention must be non-empty"));
    }
    encoder.encode(&mention_text(mention, temporal_context))
}

pub fn encode_schema(
    encoder: &dyn TextEncoder,
    subject_type: &str,
    relation: &str,
    object_type: &str,
) -> Result<Vector, EmbedError> {
    if relation.is_empty() {
        return Err(EmbedError::validation("relation must be non-empty"));
    }
    encoder.encode(&schema_text(subject_type, relation, object_type))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::cosine_sim;

    #[test]
    fn encoding_is_deterministic_and_unit_norm() {
        let enc = HashEncoder::default();
        let a = enc.encode("Which team did Messi join in 2021?").unwrap();
        let b = enc.encode("Which team did Messi join in 2021?").unwrap();
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() < 1e-9);
        assert_eq!(cosine_sim(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn empty_and_whitespace_input_is_zero_vector() {
        let enc = HashEncoder::default();
        assert!(enc.encode("").unwrap().is_zero());
        assert!(enc.encode("  \t\n ").unwrap().is_zero());
        assert!(enc.encode("!!! --- ???").unwrap().is_zero());
    }

    #[test]
    fn temporal_context_changes_the_mention_vector() {
        let enc = HashEncoder::default();
        let v2001 = encode_mention_with_time(&enc, "Oscar Awards", "in 2001").unwrap();
        let v2015 = encode_mention_with_time(&enc, "Oscar Awards", "in 2015").unwrap();
        assert_ne!(v2001, v2015);
        assert!(cosine_sim(&v2001, &v2015).unwrap() < 1.0);
    }

    #[test]
    fn entity_template_is_stable_per_triple() {
        let enc = HashEncoder::default();
        let a = encode_entity(&enc, "Person", "Ada", "engineer").unwrap();
        let b = encode_entity(&enc, "Person", "Ada", "engineer").unwrap();
        assert_eq!(a, b);
        let c = encode_schema(&enc, "Person", "works as", "Job").unwrap();
        let d = encode_schema(&enc, "Person", "works as", "Job").unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn empty_mandatory_fields_are_rejected() {
        let enc = HashEncoder::default();
        assert!(encode_entity(&enc, "Person", "", "x").is_err());
        assert!(encode_mention_with_time(&enc, "", "2001").is_err());
        assert!(encode_schema(&enc, "A", "", "B").is_err());
    }

    #[test]
    fn tokenizer_splits_on_non_alphanumerics() {
        assert_eq!(
            tokenize("Ava-Stone, plays (2019)!"),
            vec!["ava", "stone", "plays", "2019"]
        );
    }
}
