//! Embedding indexes kept alongside a graph store: one over entities
//! (joint type/name/description encoding) and one over relation schemas.

use tkg_core::{Entity, GraphStore, RelationSchema};

use crate::encoder::{entity_text, schema_text, TextEncoder};
use crate::error::EmbedError;
use crate::index::EmbeddingIndex;

/// Key for a schema index entry; round-trips the schema triple.
pub fn schema_key(schema: &RelationSchema) -> String {
    format!(
        "{}|{}|{}",
        schema.subject_type, schema.relation, schema.object_type
    )
}

#[derive(Debug, Clone)]
pub struct GraphIndexes {
    pub entities: EmbeddingIndex,
    pub schemas: EmbeddingIndex,
    /// (entity id, embedding_version) pairs the entity index was built from.
    versions: std::collections::BTreeMap<String, u64>,
}

impl GraphIndexes {
    pub fn build(store: &GraphStore, encoder: &dyn TextEncoder) -> Result<Self, EmbedError> {
        let mut indexes = GraphIndexes {
            entities: EmbeddingIndex::new(encoder.dimension()),
            schemas: EmbeddingIndex::new(encoder.dimension()),
            versions: Default::default(),
        };
        for entity in store.entities() {
            indexes.add_entity(entity, encoder)?;
        }
        for schema in store.schemas() {
            indexes.add_schema(schema, encoder)?;
        }
        Ok(indexes)
    }

    pub fn add_entity(
        &mut self,
        entity: &Entity,
        encoder: &dyn TextEncoder,
    ) -> Result<(), EmbedError> {
        let text = entity_text(&entity.entity_type, &entity.name, &entity.description);
        let vector = encoder.encode(&text)?;
        self.entities.upsert(entity.id.as_str(), vector, text)?;
        self.versions
            .insert(entity.id.as_str().to_string(), entity.embedding_version);
        Ok(())
    }

    pub fn add_schema(
        &mut self,
        schema: &RelationSchema,
        encoder: &dyn TextEncoder,
    ) -> Result<(), EmbedError> {
        let key = schema_key(schema);
        if self.schemas.contains_key(&key) {
            return Ok(());
        }
        let text = schema_text(&schema.subject_type, &schema.relation, &schema.object_type);
        let vector = encoder.encode(&text)?;
        self.schemas.push(key, vector, text)?;
        Ok(())
    }

    /// Re-encode entities whose embedding_version moved, add missing ones,
    /// drop removed ones, and pick up new schemas.
    pub fn refresh(
        &mut self,
        store: &GraphStore,
        encoder: &dyn TextEncoder,
    ) -> Result<(), EmbedError> {
        let mut live: std::collections::BTreeSet<String> = Default::default();
        for entity in store.entities() {
            live.insert(entity.id.as_str().to_string());
            let stale = self
                .versions
                .get(entity.id.as_str())
                .map_or(true, |v| *v != entity.embedding_version);
            if stale {
                self.add_entity(entity, encoder)?;
            }
        }
        let gone: Vec<String> = self
            .versions
            .keys()
            .filter(|k| !live.contains(*k))
            .cloned()
            .collect();
        for key in gone {
            self.entities.remove(&key);
            self.versions.remove(&key);
        }
        for schema in store.schemas() {
            self.add_schema(schema, encoder)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::HashEncoder;
    use tkg_core::Entity;

    #[test]
    fn build_and_refresh_track_the_store() {
        let encoder = HashEncoder::default();
        let mut store = GraphStore::new();
        store
            .upsert_entity(Entity::new("e1", "Person", "Ada", ""))
            .unwrap();
        store
            .register_schema(RelationSchema::new("Person", "plays for", "Team", false))
            .unwrap();

        let mut indexes = GraphIndexes::build(&store, &encoder).unwrap();
        assert_eq!(indexes.entities.len(), 1);
        assert_eq!(indexes.schemas.len(), 1);

        let mut renamed = store.entity(&tkg_core::EntityId::new("e1")).unwrap().clone();
        renamed.name = "Ada Lovelace".into();
        renamed.embedding_version += 1;
        store.upsert_entity(renamed).unwrap();
        store
            .upsert_entity(Entity::new("e2", "Team", "Falcons", ""))
            .unwrap();

        indexes.refresh(&store, &encoder).unwrap();
        assert_eq!(indexes.entities.len(), 2);
        let item = indexes
            .entities
            .items()
            .iter()
            .find(|i| i.key == "e1")
            .unwrap();
        assert!(item.text.contains("Ada Lovelace"));

        store.remove_entity(&tkg_core::EntityId::new("e2")).unwrap();
        indexes.refresh(&store, &encoder).unwrap();
        assert_eq!(indexes.entities.len(), 1);
    }
}
