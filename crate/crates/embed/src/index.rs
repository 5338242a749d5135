//! Exact top-k retrieval over an in-memory embedding index.

use serde::{Deserialize, Serialize};

use crate::error::EmbedError;
use crate::vector::{cosine_sim, Vector};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexItem {
    pub key: String,
    pub vector: Vector,
    pub text: String,
}

/// Append-only embedding index with exact scan retrieval.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingIndex {
    pub dimension: usize,
    items: Vec<IndexItem>,
}

impl EmbeddingIndex {
    pub fn new(dimension: usize) -> Self {
        EmbeddingIndex {
            dimension,
            items: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[IndexItem] {
        &self.items
    }

    pub fn contains_key(&self, key: &str) -> bool {
        self.items.iter().any(|item| item.key == key)
    }

    pub fn push(
        &mut self,
        key: impl Into<String>,
        vector: Vector,
        text: impl Into<String>,
    ) -> Result<(), EmbedError> {
        let key = key.into();
        if vector.dimension() != self.dimension {
            return Err(EmbedError::DimensionMismatch {
                left: vector.dimension(),
                right: self.dimension,
            });
        }
        if self.contains_key(&key) {
            return Err(EmbedError::DuplicateKey(key));
        }
        self.items.push(IndexItem {
            key,
            vector,
            text: text.into(),
        });
        Ok(())
    }

    /// Replace the vector/text stored under `key`, inserting if absent.
    pub fn upsert(
        &mut self,
        key: impl Into<String>,
        vector: Vector,
        text: impl Into<String>,
    ) -> Result<(), EmbedError> {
        let key = key.into();
        if vector.dimension() != self.dimension {
            return Err(EmbedError::DimensionMismatch {
                left: vector.dimension(),
                right: self.dimension,
            });
        }
        let text = text.into();
        if let Some(item) = self.items.iter_mut().find(|item| item.key == key) {
            item.vector = vector;
            item.text = text;
            return Ok(());
        }
        self.items.push(IndexItem { key, vector, text });
        Ok(())
    }

    pub fn remove(&mut self, key: &str) -> bool {
        let before = self.items.len();
        self.items.retain(|item| item.key != key);
        before != self.items.len()
    }

    /// The `k` highest-cosine items, descending score, ties broken by
    /// ascending key. Exact: a full scan followed by a full sort.
    pub fn topk(&self, query: &Vector, k: usize) -> Result<Vec<(String, f64)>, EmbedError> {
        if k == 0 {
            return Err(EmbedError::validation("k must be >= 1"));
        }
        let mut scored: Vec<(String, f64)> = Vec::with_capacity(self.items.len());
        for item in &self.items {
            let score = cosine_sim(query, &item.vector)?;
            scored.push((item.key.clone(), score));
        }
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        scored.truncate(k);
        Ok(scored)
    }
}
