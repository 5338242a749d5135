//! Text encoding and similarity for the temporal KG engine: a deterministic
//! feature-hashing encoder, an optional remote encoder with a vector cache,
//! cosine similarity, and exact top-k retrieval.

mod encoder;
mod error;
mod graph_index;
mod index;
mod remote;
mod vector;

pub use encoder::{
    encode_entity, encode_mention_with_time, encode_schema, entity_text, fnv1a_64, mention_text,
    schema_text, tokenize, HashEncoder, TextEncoder, DEFAULT_DIMENSION,
};
pub use error::EmbedError;
pub use graph_index::{schema_key, GraphIndexes};
pub use index::{EmbeddingIndex, IndexItem};
pub use remote::{input_hash, RemoteEncoder, VectorCache};
pub use vector::{cosine_sim, Vector};
