//! Optional remote encoder behind the same [`TextEncoder`] interface.
//!
//! Vectors are cached by input hash in a JSONL file so repeated runs never
//! re-issue requests for the same text. The deterministic [`HashEncoder`]
//! remains the default; this backend exists for parity with hosted
//! embedding services.
//!
//! [`HashEncoder`]: crate::encoder::HashEncoder

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::encoder::TextEncoder;
use crate::error::EmbedError;
use crate::vector::Vector;

#[derive(Debug, Serialize, Deserialize)]
struct CacheRecord {
    input_hash: String,
    dimension: usize,
    components: Vec<f64>,
}

/// SHA-256 hex digest used as the cache key for an input text.
pub fn input_hash(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    format!("{:x}", hasher.finalize())
}

/// File-backed vector cache (JSONL of `{input_hash, dimension, components}`).
#[derive(Debug)]
pub struct VectorCache {
    path: Option<PathBuf>,
    entries: Mutex<HashMap<String, Vec<f64>>>,
}

impl VectorCache {
    pub fn in_memory() -> Self {
        VectorCache {
            path: None,
            entries: Mutex::new(HashMap::new()),
        }
    }

    pub fn open(path: impl Into<PathBuf>) -> Result<Self, EmbedError> {
        let path = path.into();
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (idx, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let record: CacheRecord = serde_json::from_str(&line).map_err(|e| {
                    EmbedError::Cache(format!("bad cache record at line {}: {e}", idx + 1))
                })?;
                entries.insert(record.input_hash, record.components);
            }
        }
        Ok(VectorCache {
            path: Some(path),
            entries: Mutex::new(entries),
        })
    }

    pub fn get(&self, hash: &str) -> Option<Vec<f64>> {
        self.entries.lock().unwrap().get(hash).cloned()
    }

    pub fn put(&self, hash: String, components: Vec<f64>) -> Result<(), EmbedError> {
        let record = CacheRecord {
            input_hash: hash.clone(),
            dimension: components.len(),
            components: components.clone(),
        };
        if let Some(path) = &self.path {
            let mut file = OpenOptions::new().create(true).append(true).open(path)?;
            writeln!(file, "{}", serde_json::to_string(&record).expect("record serializes"))?;
        }
        self.entries.lock().unwrap().insert(hash, components);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Serialize)]
struct EmbeddingRequest<'a> {
    model: &'a str,
    input: &'a str,
}

#[derive(Deserialize)]
struct EmbeddingResponse {
    data: Vec<EmbeddingItem>,
}

#[derive(Deserialize)]
struct EmbeddingItem {
    embedding: Vec<f64>,
}

/// OpenAI-style `/embeddings` client with a write-through cache.
pub struct RemoteEncoder {
    endpoint_url: String,
    model: String,
    api_key: Option<String>,
    dimension: usize,
    cache: VectorCache,
    client: reqwest::blocking::Client,
}

impl RemoteEncoder {
    pub fn new(
        endpoint_url: impl Into<String>,
        model: impl Into<String>,
        api_key: Option<String>,
        dimension: usize,
        cache: VectorCache,
    ) -> Self {
        RemoteEncoder {
            endpoint_url: endpoint_url.into(),
            model: model.into(),
            api_key,
            dimension,
            cache,
            client: reqwest::blocking::Client::new(),
        }
    }

    fn fetch(&self, text: &str) -> Result<Vec<f64>, EmbedError> {
        let url = format!("{}/embeddings", self.endpoint_url.trim_end_matches('/'));
        let mut request = self.client.post(&url).json(&EmbeddingRequest {
            model: &self.model,
            input: text,
        });
        if let Some(key) = &self.api_key {
            request = request.bearer_auth(key);
        }
        let response = request
            .send()
            .map_err(|e| EmbedError::Transport(e.to_string()))?;
        if !response.status().is_success() {
            return Err(EmbedError::Transport(format!(
                "embedding endpoint returned {}",
                response.status()
            )));
        }
        let parsed: EmbeddingResponse = response
            .json()
            .map_err(|e| EmbedError::Transport(e.to_string()))?;
        let item = parsed
            .data
            .into_iter()
            .next()
            .ok_or_else(|| EmbedError::Transport("empty embedding response".into()))?;
        Ok(item.embedding)
    }
}

impl std::fmt::Debug for RemoteEncoder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RemoteEncoder")
            .field("endpoint_url", &self.endpoint_url)
            .field("model", &self.model)
            .field("dimension", &self.dimension)
            .finish_non_exhaustive()
    }
}

impl TextEncoder for RemoteEncoder {
    fn encode(&self, text: &str) -> Result<Vector, EmbedError> {
        if text.trim().is_empty() {
            return Ok(Vector::zeros(self.dimension));
        }
        let hash = input_hash(text);
        if let Some(components) = self.cache.get(&hash) {
            return Ok(Vector { components });
        }
        let components = self.fetch(text)?;
        if components.len() != self.dimension {
            return Err(EmbedError::DimensionMismatch {
                left: components.len(),
                right: self.dimension,
            });
        }
        let mut vector = Vector { components };
        vector.normalize();
        self.cache.put(hash, vector.components.clone())?;
        Ok(vector)
    }

    fn dimension(&self) -> usize {
        self.dimension
    }
}
