//! JSONL snapshot codec for [`GraphStore`].
//!
//! One record per line. The first line is a header carrying the format
//! version and store revision; the remaining lines are `schema`, `entity`,
//! and `edge` records, emitted in sorted order so identical stores produce
//! byte-identical snapshots.

use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::CoreError;
use crate::graph::{Edge, Entity, GraphStore, RelationSchema};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Record {
    Header { format_version: u32, revision: u64 },
    Schema(RelationSchema),
    Entity(Entity),
    Edge(Edge),
}

pub fn snapshot_save<W: Write>(store: &GraphStore, mut dest: W) -> Result<(), CoreError> {
    let header = Record::Header {
        format_version: FORMAT_VERSION,
        revision: store.revision(),
    };
    writeln!(dest, "{}", serde_json::to_string(&header).expect("header serializes"))?;
    for schema in store.schemas() {
        let line = serde_json::to_string(&Record::Schema(schema.clone())).expect("schema serializes");
        writeln!(dest, "{line}")?;
    }
    for entity in store.entities() {
        let line = serde_json::to_string(&Record::Entity(entity.clone())).expect("entity serializes");
        writeln!(dest, "{line}")?;
    }
    for edge in store.edges() {
        let line = serde_json::to_string(&Record::Edge(edge.clone())).expect("edge serializes");
        writeln!(dest, "{line}")?;
    }
    Ok(())
}

pub fn snapshot_save_path(store: &GraphStore, path: impl AsRef<Path>) -> Result<(), CoreError> {
    let file = File::create(path)?;
    let mut writer = BufWriter::new(file);
    snapshot_save(store, &mut writer)?;
    writer.flush()?;
    Ok(())
}

pub fn snapshot_load<R: Read>(source: R) -> Result<GraphStore, CoreError> {
    let reader = BufReader::new(source);
    let mut store = GraphStore::new();
    let mut header: Option<u64> = None;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(&line).map_err(|e| CoreError::SnapshotParse {
            line: line_no,
            message: e.to_string(),
        })?;
        match record {
            Record::Header {
                format_version,
                revision,
            } => {
                if format_version != FORMAT_VERSION {
                    return Err(CoreError::SnapshotParse {
                        line: line_no,
                        message: format!("unsupported format_version {format_version}"),
                    });
                }
                if header.replace(revision).is_some() {
                    return Err(CoreError::SnapshotParse {
                        line: line_no,
                        message: "duplicate header record".into(),
                    });
                }
            }
            Record::Schema(schema) => {
                store
                    .register_schema(schema)
                    .map_err(|e| CoreError::SnapshotParse {
                        line: line_no,
                        message: e.to_string(),
                    })?;
            }
            Record::Entity(entity) => {
                if store.entity(&entity.id).is_some() {
                    return Err(CoreError::SnapshotParse {
                        line: line_no,
                        message: format!("duplicate entity id `{}`", entity.id),
                    });
                }
                store
                    .upsert_entity(entity)
                    .map_err(|e| CoreError::SnapshotParse {
                        line: line_no,
                        message: e.to_string(),
                    })?;
            }
            Record::Edge(edge) => {
                if store.edge(&edge.id).is_some() {
                    return Err(CoreError::SnapshotParse {
                        line: line_no,
                        message: format!("duplicate edge id `{}`", edge.id),
                    });
                }
                store
                    .insert_edge(edge)
                    .map_err(|e| CoreError::SnapshotParse {
                        line: line_no,
                        message: e.to_string(),
                    })?;
            }
        }
    }
    let revision = header.ok_or(CoreError::SnapshotParse {
        line: 0,
        message: "missing header record".into(),
    })?;
    store.set_revision(revision);
    store.audit()?;
    Ok(store)
}

pub fn snapshot_load_path(path: impl AsRef<Path>) -> Result<GraphStore, CoreError> {
    snapshot_load(File::open(path)?)
}
