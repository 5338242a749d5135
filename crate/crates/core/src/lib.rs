//! Temporal property-graph data model and store.
//!
//! Entities carry property maps whose exclusive-relation slots hold candidate
//! sets; edges carry validity intervals with optional unknown endpoints.
//! Snapshots round-trip through a line-oriented JSONL format.

mod error;
mod graph;
mod property;
mod snapshot;
mod time;

pub use error::CoreError;
pub use graph::{Edge, EdgeId, Entity, EntityId, GraphStore, RelationSchema};
pub use property::{PropertyCandidate, PropertyMap, PropertyValue, MAX_CONTEXTS_PER_CANDIDATE};
pub use snapshot::{
    snapshot_load, snapshot_load_path, snapshot_save, snapshot_save_path, FORMAT_VERSION,
};
pub use time::{TemporalInterval, Timestamp, SECONDS_PER_DAY};
