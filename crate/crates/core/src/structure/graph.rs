//! Per-window knowledge graph: transcript entities and relations, one node
//! per danmaku cluster, each attached to its most relevant entity.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::extract::{Extraction, MAX_ENTITIES};
use super::windows::KgWindow;
use crate::classify::DisplayCategory;
use crate::semantics::{embed, DanmakuCluster};
use crate::text::normalize;

/// Node id of the implicit segment hub.
pub const HUB_ID: &str = "hub";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityNode {
    pub id: String,
    pub label: String,
    pub salience: f64,
    pub hub: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationEdge {
    pub subject: String,
    pub predicate: String,
    pub object: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DanmakuNode {
    pub id: String,
    pub cluster_id: usize,
    pub category: DisplayCategory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attachment {
    pub danmaku: String,
    pub entity: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnowledgeGraph {
    pub window_id: usize,
    /// Hub first, then extracted entities by salience.
    pub entities: Vec<EntityNode>,
    pub relations: Vec<RelationEdge>,
    pub danmaku: Vec<DanmakuNode>,
    pub attachments: Vec<Attachment>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("graph {window}: duplicate node id `{id}`")]
    DuplicateNode { window: usize, id: String },
    #[error("graph {window}: duplicate entity label `{label}`")]
    DuplicateLabel { window: usize, label: String },
    #[error("graph {window}: edge references missing node `{id}`")]
    DanglingEdge { window: usize, id: String },
    #[error("graph {window}: danmaku node `{id}` has {count} attachments (expected 1)")]
    Attachments { window: usize, id: String, count: usize },
}

pub fn danmaku_node_id(cluster_id: usize) -> String {
    format!("d{cluster_id}")
}

impl KnowledgeGraph {
    pub fn entity(&self, id: &str) -> Option<&EntityNode> {
        self.entities.iter().find(|e| e.id == id)
    }

    pub fn attachment_of(&self, cluster_id: usize) -> Option<&Attachment> {
        let id = danmaku_node_id(cluster_id);
        self.attachments.iter().find(|a| a.danmaku == id)
    }

    /// Referential integrity: unique ids and labels, every edge endpoint
    /// exists, every danmaku node has exactly one attachment.
    pub fn validate(&self) -> Result<(), GraphError> {
        let w = self.window_id;
        let mut ids = HashSet::new();
        let mut labels = HashSet::new();
        for e in &self.entities {
            if !ids.insert(e.id.as_str()) {
                return Err(GraphError::DuplicateNode { window: w, id: e.id.clone() });
            }
            if !e.hub && !labels.insert(e.label.as_str()) {
                return Err(GraphError::DuplicateLabel { window: w, label: e.label.clone() });
            }
        }
        let entity_ids = ids.clone();
        for d in &self.danmaku {
            if !ids.insert(d.id.as_str()) {
                return Err(GraphError::DuplicateNode { window: w, id: d.id.clone() });
            }
        }
        for r in &self.relations {
            for id in [&r.subject, &r.object] {
                if !entity_ids.contains(id.as_str()) {
                    return Err(GraphError::DanglingEdge { window: w, id: id.clone() });
                }
            }
        }
        let mut per_node: HashMap<&str, usize> = HashMap::new();
        for a in &self.attachments {
            if !entity_ids.contains(a.entity.as_str()) {
                return Err(GraphError::DanglingEdge { window: w, id: a.entity.clone() });
            }
            if !self.danmaku.iter().any(|d| d.id == a.danmaku) {
                return Err(GraphError::DanglingEdge { window: w, id: a.danmaku.clone() });
            }
            *per_node.entry(a.danmaku.as_str()).or_insert(0) += 1;
        }
        for d in &self.danmaku {
            let count = per_node.get(d.id.as_str()).copied().unwrap_or(0);
            if count != 1 {
                return Err(GraphError::Attachments { window: w, id: d.id.clone(), count });
            }
        }
        Ok(())
    }
}

/// Assemble the graph of one window. `clusters` pairs each cluster in the
/// window with its representative's text. A cluster attaches to the entity
/// maximizing `cos(representative, label + source line)`; below `tau_attach`
/// (or with no entities) it attaches to the hub.
pub fn build_graph(window: &KgWindow, clusters: &[(&DanmakuCluster, &str)], extraction: Extraction, tau_attach: f64) -> KnowledgeGraph {
    let mut entities = vec![EntityNode { id: HUB_ID.into(), label: "segment".into(), salience: 0.0, hub: true }];
    let mut by_label: HashMap<String, String> = HashMap::new();
    let mut extracted = extraction.entities;
    extracted.retain(|e| !normalize(&e.label).is_empty() && e.salience.is_finite());
    // stable: equal salience keeps extractor order
    extracted.sort_by(|a, b| b.salience.total_cmp(&a.salience));
    for e in extracted {
        let key = normalize(&e.label);
        if by_label.contains_key(&key) || by_label.len() >= MAX_ENTITIES {
            continue;
        }
        let id = format!("e{}", by_label.len());
        by_label.insert(key, id.clone());
        entities.push(EntityNode { id, label: e.label, salience: e.salience, hub: false });
    }

    let mut relations = Vec::new();
    let mut seen = HashSet::new();
    for r in extraction.relations {
        let (Some(s), Some(o)) = (by_label.get(&normalize(&r.subject)), by_label.get(&normalize(&r.object))) else {
            continue;
        };
        if s != o && seen.insert((s.clone(), o.clone())) {
            relations.push(RelationEdge { subject: s.clone(), predicate: r.predicate, object: o.clone() });
        }
    }

    let lines: Vec<String> = window.lines().map(str::to_string).collect();
    let profiles: Vec<(&str, crate::semantics::Embedding)> = entities[1..]
        .iter()
        .map(|e| {
            let key = normalize(&e.label);
            let source = lines.iter().find(|l| normalize(l).contains(&key)).map_or("", String::as_str);
            (e.id.as_str(), embed(&format!("{} {}", e.label, source)))
        })
        .collect();

    let mut danmaku = Vec::with_capacity(clusters.len());
    let mut attachments = Vec::with_capacity(clusters.len());
    for (cluster, rep_text) in clusters {
        let node_id = danmaku_node_id(cluster.cluster_id);
        let rep = embed(rep_text);
        let mut best: Option<(&str, f64)> = None;
        for (id, emb) in &profiles {
            let s = rep.cosine(emb);
            if best.is_none_or(|(_, bs)| s > bs) {
                best = Some((id, s));
            }
        }
        let (entity, score) = match best {
            Some((id, s)) if s >= tau_attach => (id.to_string(), s),
            Some((_, s)) => (HUB_ID.to_string(), s),
            None => (HUB_ID.to_string(), 0.0),
        };
        danmaku.push(DanmakuNode { id: node_id.clone(), cluster_id: cluster.cluster_id, category: cluster.category });
        attachments.push(Attachment { danmaku: node_id, entity, score });
    }
    KnowledgeGraph { window_id: window.index, entities, relations, danmaku, attachments }
}
