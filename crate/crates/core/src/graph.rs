//! In-memory temporal property graph: entities, interval-qualified edges,
//! relation schemas, and adjacency indexes.
//!
//! Mutations are serialized through `&mut` access (single writer); reads
//! borrow immutably and never observe a half-applied batch. Iteration is
//! ordered by id throughout so downstream top-k stays reproducible.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::CoreError;
use crate::property::{PropertyMap, PropertyValue};
use crate::time::TemporalInterval;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityId(pub String);

impl EntityId {
    pub fn new(id: impl Into<String>) -> Self {
        EntityId(id.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub String);

impl EdgeId {
    pub fn new(id: impl Into<String>) -> Self {
        EdgeId(id.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Typed node with a property map. Exclusive-relation slots inside
/// `properties` hold candidate sets instead of single values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entity {
    pub id: EntityId,
    #[serde(rename = "type")]
    pub entity_type: String,
    pub name: String,
    pub description: String,
    pub properties: PropertyMap,
    pub embedding_version: u64,
}

impl Entity {
    pub fn new(
        id: impl Into<String>,
        entity_type: impl Into<String>,
        name: impl Into<String>,
        description: impl Into<String>,
    ) -> Self {
        Entity {
            id: EntityId::new(id),
            entity_type: entity_type.into(),
            name: name.into(),
            description: description.into(),
            properties: PropertyMap::new(),
            embedding_version: 0,
        }
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if self.name.is_empty() {
            return Err(CoreError::validation(format!(
                "entity `{}` has an empty name",
                self.id
            )));
        }
        self.properties.validate()
    }
}

/// Interval-qualified directed edge between stored entities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub source: EntityId,
    pub relation: String,
    pub target: EntityId,
    pub interval: TemporalInterval,
    pub properties: PropertyMap,
}

impl Edge {
    pub fn new(
        id: impl Into<String>,
        source: EntityId,
        relation: impl Into<String>,
        target: EntityId,
        interval: TemporalInterval,
    ) -> Self {
        Edge {
            id: EdgeId::new(id),
            source,
            relation: relation.into(),
            target,
            interval,
            properties: PropertyMap::new(),
        }
    }

    /// Dedup identity: (source, relation, target, interval).
    pub fn identity(&self) -> (EntityId, String, EntityId, TemporalInterval) {
        (
            self.source.clone(),
            self.relation.clone(),
            self.target.clone(),
            self.interval,
        )
    }
}

/// Typed relation schema; the exclusive flag partitions relations into
/// property-slot facts vs interval-qualified edges.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelationSchema {
    pub subject_type: String,
    pub relation: String,
    pub object_type: String,
    pub exclusive: bool,
}

impl RelationSchema {
    pub fn new(
        subject_type: impl Into<String>,
        relation: impl Into<String>,
        object_type: impl Into<String>,
        exclusive: bool,
    ) -> Self {
        RelationSchema {
            subject_type: subject_type.into(),
            relation: relation.into(),
            object_type: object_type.into(),
            exclusive,
        }
    }

    pub fn key(&self) -> (String, String, String) {
        (
            self.subject_type.clone(),
            self.relation.clone(),
            self.object_type.clone(),
        )
    }
}

type AdjacencyIndex = BTreeMap<EntityId, BTreeMap<String, BTreeSet<EdgeId>>>;

/// The graph store. `revision` increments on every mutation batch; batched
/// callers clone the store, mutate the clone, and swap it back in.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GraphStore {
    entities: BTreeMap<EntityId, Entity>,
    edges: BTreeMap<EdgeId, Edge>,
    out_index: AdjacencyIndex,
    in_index: AdjacencyIndex,
    schemas: BTreeMap<(String, String, String), RelationSchema>,
    revision: u64,
}

impl GraphStore {
    pub fn new() -> Self {
        GraphStore::default()
    }

    pub fn revision(&self) -> u64 {
        self.revision
    }

    /// Used by snapshot load and batch commit to restore an exact revision.
    pub fn set_revision(&mut self, revision: u64) {
        self.revision = revision;
    }

    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn entity(&self, id: &EntityId) -> Option<&Entity> {
        self.entities.get(id)
    }

    pub fn edge(&self, id: &EdgeId) -> Option<&Edge> {
        self.edges.get(id)
    }

    pub fn entities(&self) -> impl Iterator<Item = &Entity> {
        self.entities.values()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn schemas(&self) -> impl Iterator<Item = &RelationSchema> {
        self.schemas.values()
    }

    pub fn schema(&self, subject_type: &str, relation: &str, object_type: &str) -> Option<&RelationSchema> {
        self.schemas.get(&(
            subject_type.to_string(),
            relation.to_string(),
            object_type.to_string(),
        ))
    }

    /// Whether `relation` is registered exclusive; `None` when unregistered.
    pub fn is_exclusive(&self, relation: &str) -> Option<bool> {
        self.schemas
            .values()
            .find(|s| s.relation == relation)
            .map(|s| s.exclusive)
    }

    /// Find an entity by exact name, deterministic (first by id).
    pub fn entity_by_name(&self, name: &str) -> Option<&Entity> {
        self.entities.values().find(|e| e.name == name)
    }

    pub fn register_schema(&mut self, schema: RelationSchema) -> Result<(), CoreError> {
        if let Some(existing) = self.schemas.get(&schema.key()) {
            if existing.exclusive != schema.exclusive {
                return Err(CoreError::SchemaConflict(schema.relation));
            }
            return Ok(()); // re-registration of an identical schema is a no-op
        }
        if let Some(flag) = self.is_exclusive(&schema.relation) {
            if flag != schema.exclusive {
                return Err(CoreError::SchemaConflict(schema.relation));
            }
        }
        self.schemas.insert(schema.key(), schema);
        self.revision += 1;
        Ok(())
    }

    /// Insert or wholesale-replace an entity.
    pub fn upsert_entity(&mut self, entity: Entity) -> Result<EntityId, CoreError> {
        entity.validate()?;
        let id = entity.id.clone();
        self.entities.insert(id.clone(), entity);
        self.revision += 1;
        Ok(id)
    }

    pub fn insert_edge(&mut self, edge: Edge) -> Result<EdgeId, CoreError> {
        edge.interval.validate()?;
        edge.properties.validate()?;
        if !self.entities.contains_key(&edge.source) {
            return Err(CoreError::DanglingEndpoint {
                edge: edge.id.0,
                entity: edge.source.0,
            });
        }
        if !self.entities.contains_key(&edge.target) {
            return Err(CoreError::DanglingEndpoint {
                edge: edge.id.0,
                entity: edge.target.0,
            });
        }
        if self.find_matching_edge(&edge.source, &edge.relation, &edge.target, &edge.interval).is_some() {
            return Err(CoreError::DuplicateEdge {
                subject: edge.source.0,
                relation: edge.relation,
                object: edge.target.0,
            });
        }
        let id = edge.id.clone();
        self.index_edge(&edge);
        self.edges.insert(id.clone(), edge);
        self.revision += 1;
        Ok(id)
    }

    /// Replace an existing edge's properties (used by merge updates).
    pub fn update_edge_properties(
        &mut self,
        id: &EdgeId,
        properties: PropertyMap,
    ) -> Result<(), CoreError> {
        properties.validate()?;
        let edge = self
            .edges
            .get_mut(id)
            .ok_or_else(|| CoreError::UnknownEdge(id.0.clone()))?;
        edge.properties = properties;
        self.revision += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, id: &EdgeId) -> Result<Edge, CoreError> {
        let edge = self
            .edges
            .remove(id)
            .ok_or_else(|| CoreError::UnknownEdge(id.0.clone()))?;
        self.unindex_edge(&edge);
        self.revision += 1;
        Ok(edge)
    }

    /// Remove an entity and every edge attached to it.
    pub fn remove_entity(&mut self, id: &EntityId) -> Result<Entity, CoreError> {
        let entity = self
            .entities
            .remove(id)
            .ok_or_else(|| CoreError::UnknownEntity(id.0.clone()))?;
        let attached: Vec<EdgeId> = self
            .edges
            .values()
            .filter(|e| &e.source == id || &e.target == id)
            .map(|e| e.id.clone())
            .collect();
        for edge_id in attached {
            let edge = self.edges.remove(&edge_id).expect("edge listed above");
            self.unindex_edge(&edge);
        }
        self.revision += 1;
        Ok(entity)
    }

    /// All edges from `source`, optionally filtered by relation and target.
    /// Deterministic order (by edge id). This is the R_existing query used
    /// by edge-merge resolution.
    pub fn find_edges(
        &self,
        source: &EntityId,
        relation: Option<&str>,
        target: Option<&EntityId>,
    ) -> Result<Vec<&Edge>, CoreError> {
        if !self.entities.contains_key(source) {
            return Err(CoreError::UnknownEntity(source.0.clone()));
        }
        let Some(by_relation) = self.out_index.get(source) else {
            return Ok(Vec::new());
        };
        let mut out: Vec<&Edge> = Vec::new();
        for (rel, edge_ids) in by_relation {
            if let Some(filter) = relation {
                if rel != filter {
                    continue;
                }
            }
            for edge_id in edge_ids {
                let edge = &self.edges[edge_id];
                if let Some(t) = target {
                    if &edge.target != t {
                        continue;
                    }
                }
                out.push(edge);
            }
        }
        out.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(out)
    }

    /// Exact-identity lookup: (source, relation, target, interval).
    pub fn find_matching_edge(
        &self,
        source: &EntityId,
        relation: &str,
        target: &EntityId,
        interval: &TemporalInterval,
    ) -> Option<&Edge> {
        let ids = self.out_index.get(source)?.get(relation)?;
        ids.iter()
            .map(|id| &self.edges[id])
            .find(|e| &e.target == target && &e.interval == interval)
    }

    /// Distinct outgoing relation names with edge counts. Supplies the
    /// branching and fanout statistics used by route cost estimation.
    pub fn out_relations(&self, entity: &EntityId) -> Result<BTreeMap<String, usize>, CoreError> {
        if !self.entities.contains_key(entity) {
            return Err(CoreError::UnknownEntity(entity.0.clone()));
        }
        let mut out = BTreeMap::new();
        if let Some(by_relation) = self.out_index.get(entity) {
            for (rel, ids) in by_relation {
                if !ids.is_empty() {
                    out.insert(rel.clone(), ids.len());
                }
            }
        }
        Ok(out)
    }

    pub fn incoming_edges(&self, entity: &EntityId) -> Vec<&Edge> {
        let mut out: Vec<&Edge> = Vec::new();
        if let Some(by_relation) = self.in_index.get(entity) {
            for ids in by_relation.values() {
                out.extend(ids.iter().map(|id| &self.edges[id]));
            }
        }
        out.sort_by(|a, b| a.id.cmp(&b.id));
        out
    }

    /// Consistency audit: both indexes exactly mirror the edge set, every
    /// endpoint resolves, and property maps respect the schema registry
    /// (candidate sets iff the relation is registered exclusive).
    pub fn audit(&self) -> Result<(), CoreError> {
        let mut expect_out: AdjacencyIndex = BTreeMap::new();
        let mut expect_in: AdjacencyIndex = BTreeMap::new();
        for edge in self.edges.values() {
            if !self.entities.contains_key(&edge.source) {
                return Err(CoreError::AuditFailure(format!(
                    "edge {} has dangling source {}",
                    edge.id, edge.source
                )));
            }
            if !self.entities.contains_key(&edge.target) {
                return Err(CoreError::AuditFailure(format!(
                    "edge {} has dangling target {}",
                    edge.id, edge.target
                )));
            }
            expect_out
                .entry(edge.source.clone())
                .or_default()
                .entry(edge.relation.clone())
                .or_default()
                .insert(edge.id.clone());
            expect_in
                .entry(edge.target.clone())
                .or_default()
                .entry(edge.relation.clone())
                .or_default()
                .insert(edge.id.clone());
        }
        if expect_out != self.out_index {
            return Err(CoreError::AuditFailure("out_index drifted from edges".into()));
        }
        if expect_in != self.in_index {
            return Err(CoreError::AuditFailure("in_index drifted from edges".into()));
        }
        for entity in self.entities.values() {
            entity.validate().map_err(|e| {
                CoreError::AuditFailure(format!("entity {} invalid: {e}", entity.id))
            })?;
            for (key, value) in &entity.properties.entries {
                let registered = self.is_exclusive(key);
                match (value, registered) {
                    (PropertyValue::Candidates(_), Some(true)) => {}
                    (PropertyValue::Candidates(_), _) => {
                        return Err(CoreError::AuditFailure(format!(
                            "entity {} slot `{key}` holds candidates but relation is not registered exclusive",
                            entity.id
                        )));
                    }
                    (PropertyValue::Plain(_), Some(true)) => {
                        return Err(CoreError::AuditFailure(format!(
                            "entity {} slot `{key}` is plain but relation is registered exclusive",
                            entity.id
                        )));
                    }
                    (PropertyValue::Plain(_), _) => {}
                }
            }
        }
        Ok(())
    }

    fn index_edge(&mut self, edge: &Edge) {
        self.out_index
            .entry(edge.source.clone())
            .or_default()
            .entry(edge.relation.clone())
            .or_default()
            .insert(edge.id.clone());
        self.in_index
            .entry(edge.target.clone())
            .or_default()
            .entry(edge.relation.clone())
            .or_default()
            .insert(edge.id.clone());
    }

    fn unindex_edge(&mut self, edge: &Edge) {
        let prune = |index: &mut AdjacencyIndex, key: &EntityId| {
            if let Some(by_relation) = index.get_mut(key) {
                if let Some(ids) = by_relation.get_mut(&edge.relation) {
                    ids.remove(&edge.id);
                    if ids.is_empty() {
                        by_relation.remove(&edge.relation);
                    }
                }
                if by_relation.is_empty() {
                    index.remove(key);
                }
            }
        };
        prune(&mut self.out_index, &edge.source);
        prune(&mut self.in_index, &edge.target);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::Timestamp;

    fn interval(a: i64, b: i64) -> TemporalInterval {
        TemporalInterval::new(Timestamp::Known(a), Timestamp::Known(b)).unwrap()
    }

    fn seeded_store() -> GraphStore {
        let mut store = GraphStore::new();
        store
            .upsert_entity(Entity::new("e1", "Person", "Ada", "engineer"))
            .unwrap();
        store
            .upsert_entity(Entity::new("e2", "Team", "Falcons", "club"))
            .unwrap();
        store
    }

    #[test]
    fn upsert_fresh_then_replace() {
        let mut store = GraphStore::new();
        store
            .upsert_entity(Entity::new("e1", "Person", "Ada", ""))
            .unwrap();
        assert_eq!(store.entity_count(), 1);
        store
            .upsert_entity(Entity::new("e1", "Person", "Ada Lovelace", "renamed"))
            .unwrap();
        assert_eq!(store.entity_count(), 1);
        assert_eq!(store.entity(&EntityId::new("e1")).unwrap().name, "Ada Lovelace");
    }

    #[test]
    fn upsert_rejects_empty_name() {
        let mut store = GraphStore::new();
        let err = store
            .upsert_entity(Entity::new("e1", "Person", "", ""))
            .unwrap_err();
        assert!(matches!(err, CoreError::Validation(_)));
    }

    #[test]
    fn insert_edge_updates_both_indexes() {
        let mut store = seeded_store();
        let edge = Edge::new(
            "g1",
            EntityId::new("e1"),
            "plays for",
            EntityId::new("e2"),
            interval(0, 10),
        );
        store.insert_edge(edge).unwrap();
        let out = store
            .find_edges(&EntityId::new("e1"), Some("plays for"), None)
            .unwrap();
        assert_eq!(out.len(), 1);
        let incoming = store.incoming_edges(&EntityId::new("e2"));
        assert_eq!(incoming.len(), 1);
        store.audit().unwrap();
    }

    #[test]
    fn edge_with_unknown_start_is_accepted() {
        let mut store = seeded_store();
        let edge = Edge::new(
            "g1",
            EntityId::new("e1"),
            "plays for",
            EntityId::new("e2"),
            TemporalInterval::new(Timestamp::Unknown, Timestamp::Known(10)).unwrap(),
        );
        assert!(store.insert_edge(edge).is_ok());
    }

    #[test]
    fn edge_with_missing_target_is_referential_error() {
        let mut store = seeded_store();
        let edge = Edge::new(
            "g1",
            EntityId::new("e1"),
            "plays for",
            EntityId::new("missing"),
            interval(0, 10),
        );
        assert!(matches!(
            store.insert_edge(edge),
            Err(CoreError::DanglingEndpoint { .. })
        ));
    }

    #[test]
    fn find_edges_filters_and_orders() {
        let mut store = seeded_store();
        store
            .insert_edge(Edge::new(
                "g2",
                EntityId::new("e1"),
                "captains",
                EntityId::new("e2"),
                interval(0, 1),
            ))
            .unwrap();
        store
            .insert_edge(Edge::new(
                "g1",
                EntityId::new("e1"),
                "plays for",
                EntityId::new("e2"),
                interval(0, 1),
            ))
            .unwrap();

        // no edges between an unrelated pair
        let none = store
            .find_edges(&EntityId::new("e2"), None, Some(&EntityId::new("e1")))
            .unwrap();
        assert!(none.is_empty());

        let filtered = store
            .find_edges(&EntityId::new("e1"), Some("plays for"), Some(&EntityId::new("e2")))
            .unwrap();
        assert_eq!(filtered.len(), 1);
        assert_eq!(filtered[0].relation, "plays for");

        let all = store.find_edges(&EntityId::new("e1"), None, None).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].id.as_str(), "g1"); // ordered by edge id

        assert!(store
            .find_edges(&EntityId::new("nope"), None, None)
            .is_err());
    }

    #[test]
    fn out_relations_counts_and_forgets_removed() {
        let mut store = seeded_store();
        for i in 0..3 {
            store
                .insert_edge(Edge::new(
                    format!("g{i}"),
                    EntityId::new("e1"),
                    "plays for",
                    EntityId::new("e2"),
                    interval(i, i + 1),
                ))
                .unwrap();
        }
        store
            .insert_edge(Edge::new(
                "g9",
                EntityId::new("e1"),
                "born in",
                EntityId::new("e2"),
                interval(0, 1),
            ))
            .unwrap();

        let rels = store.out_relations(&EntityId::new("e1")).unwrap();
        assert_eq!(rels.get("plays for"), Some(&3));
        assert_eq!(rels.get("born in"), Some(&1));

        // leaf node has no outgoing relations
        assert!(store.out_relations(&EntityId::new("e2")).unwrap().is_empty());

        store.remove_edge(&EdgeId::new("g9")).unwrap();
        let rels = store.out_relations(&EntityId::new("e1")).unwrap();
        assert!(!rels.contains_key("born in"));
        store.audit().unwrap();
    }

    #[test]
    fn duplicate_edge_identity_is_rejected() {
        let mut store = seeded_store();
        let make = || {
            Edge::new(
                "gx",
                EntityId::new("e1"),
                "plays for",
                EntityId::new("e2"),
                interval(0, 10),
            )
        };
        store.insert_edge(make()).unwrap();
        let mut dup = make();
        dup.id = EdgeId::new("gy");
        assert!(matches!(
            store.insert_edge(dup),
            Err(CoreError::DuplicateEdge { .. })
        ));
        // same triple, different interval, is a distinct temporal fact
        let mut other = make();
        other.id = EdgeId::new("gz");
        other.interval = interval(20, 30);
        assert!(store.insert_edge(other).is_ok());
    }

    #[test]
    fn schema_exclusive_flag_is_immutable() {
        let mut store = GraphStore::new();
        store
            .register_schema(RelationSchema::new("Person", "birth year", "Year", true))
            .unwrap();
        assert!(store
            .register_schema(RelationSchema::new("Person", "birth year", "Year", false))
            .is_err());
        // same relation name under a different subject type must agree too
        assert!(store
            .register_schema(RelationSchema::new("Animal", "birth year", "Year", false))
            .is_err());
        assert_eq!(store.is_exclusive("birth year"), Some(true));
    }

    #[test]
    fn remove_entity_cascades() {
        let mut store = seeded_store();
        store
            .insert_edge(Edge::new(
                "g1",
                EntityId::new("e1"),
                "plays for",
                EntityId::new("e2"),
                interval(0, 1),
            ))
            .unwrap();
        store.remove_entity(&EntityId::new("e2")).unwrap();
        assert_eq!(store.edge_count(), 0);
        store.audit().unwrap();
    }

    #[test]
    fn revision_increments_per_mutation() {
        let mut store = GraphStore::new();
        assert_eq!(store.revision(), 0);
        store
            .upsert_entity(Entity::new("e1", "Person", "Ada", ""))
            .unwrap();
        store
            .upsert_entity(Entity::new("e2", "Person", "Bob", ""))
            .unwrap();
        assert_eq!(store.revision(), 2);
    }
}
