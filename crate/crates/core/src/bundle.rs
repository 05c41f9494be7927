//! The persisted pipeline output for one video and its canonical JSON form.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::classify::KnowledgeLabel;
use crate::config::PipelineConfig;
use crate::ingest::{DanmakuComment, TranscriptLine, VideoMeta};
use crate::presentation::{StreamBucket, WordstreamLayout};
use crate::semantics::{DanmakuCluster, SegmentAssignment};
use crate::structure::graph::danmaku_node_id;
use crate::structure::{GraphError, KgWindow, KnowledgeGraph, VideoSection};

pub const FORMAT_VERSION: u32 = 1;
const SIGNIFICANT_DIGITS: usize = 6;
const TILE_EPS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleComment {
    pub comment: DanmakuComment,
    pub label: KnowledgeLabel,
    /// Representative word; knowledge comments only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub keyword: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster_id: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Wordstream {
    pub buckets: Vec<StreamBucket>,
    pub layout: WordstreamLayout,
    pub simplified: WordstreamLayout,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub pipeline_version: String,
    pub input_hash: String,
    /// Stage name to backend descriptor.
    pub backends: BTreeMap<String, String>,
    /// The effective configuration.
    pub tunables: Value,
    /// Built-in constants that are design choices rather than measured values.
    pub invented_constants: BTreeMap<String, f64>,
    pub fallback_count: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnowledgeBundle {
    pub format_version: u32,
    pub meta: VideoMeta,
    pub transcript: Vec<TranscriptLine>,
    pub sections: Vec<VideoSection>,
    pub windows: Vec<KgWindow>,
    /// All comments in time order, with labels.
    pub comments: Vec<BundleComment>,
    pub clusters: Vec<DanmakuCluster>,
    /// One per knowledge comment.
    pub assignments: Vec<SegmentAssignment>,
    /// One per window, indexed by window.
    pub graphs: Vec<KnowledgeGraph>,
    pub wordstream: Wordstream,
    pub provenance: Provenance,
}

#[derive(Debug, thiserror::Error)]
pub enum BundleError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("bundle is not valid JSON: {0}")]
    Parse(String),
    #[error("bundle fails validation: {0}")]
    Invalid(String),
    #[error("bundle fails validation: {0}")]
    Graph(#[from] GraphError),
}

fn invalid(msg: impl Into<String>) -> BundleError {
    BundleError::Invalid(msg.into())
}

/// Round to six significant digits and print the shortest decimal that
/// reads back to the rounded value.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses");
    let s = rounded.to_string();
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

fn write_canonical(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                out.push_str(&n.to_string());
            } else {
                out.push_str(&format_float(n.as_f64().unwrap_or(0.0)));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).expect("string serializes"));
                out.push(':');
                write_canonical(&map[k], out);
            }
            out.push('}');
        }
    }
}

/// Canonical JSON: sorted keys, no whitespace, floats at six significant digits.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String, serde_json::Error> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_canonical(&v, &mut out);
    Ok(out)
}

impl KnowledgeBundle {
    pub fn to_canonical_json(&self) -> String {
        to_canonical_json(self).expect("bundle serializes")
    }

    /// Pass through canonical JSON so in-memory floats equal what a reload
    /// would produce.
    pub fn canonicalize(self) -> Result<Self, BundleError> {
        Self::from_json(self.to_canonical_json().as_bytes())
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, BundleError> {
        serde_json::from_slice(bytes).map_err(|e| BundleError::Parse(e.to_string()))
    }

    /// The pipeline configuration recorded in the provenance tunables.
    pub fn config(&self) -> Result<PipelineConfig, BundleError> {
        serde_json::from_value(self.provenance.tunables.clone()).map_err(|e| invalid(format!("provenance tunables: {e}")))
    }

    pub fn comment(&self, id: &str) -> Option<&BundleComment> {
        self.comments.iter().find(|c| c.comment.id == id)
    }

    /// Check every cross-reference: comment to cluster, cluster to window
    /// and graph, assignment to comment and window, and the tiling of
    /// sections and windows over the duration.
    pub fn validate(&self) -> Result<(), BundleError> {
        let duration = self.meta.duration;
        if !(duration > 0.0) {
            return Err(invalid(format!("duration {duration} is not positive")));
        }
        tiles("section", self.sections.iter().map(|s| (s.index, s.start, s.end)), duration)?;
        tiles("window", self.windows.iter().map(|w| (w.index, w.start, w.end)), duration)?;
        for s in &self.sections {
            if s.line_start > s.line_end || s.line_end > self.transcript.len() {
                return Err(invalid(format!("section {} line span {}..{} outside transcript of {} lines", s.index, s.line_start, s.line_end, self.transcript.len())));
            }
        }

        let mut by_id: HashMap<&str, &BundleComment> = HashMap::new();
        for c in &self.comments {
            if by_id.insert(c.comment.id.as_str(), c).is_some() {
                return Err(invalid(format!("duplicate comment id `{}`", c.comment.id)));
            }
        }
        let n_windows = self.windows.len();
        let mut member_of: HashMap<&str, usize> = HashMap::new();
        for (i, cl) in self.clusters.iter().enumerate() {
            if cl.cluster_id != i {
                return Err(invalid(format!("cluster at position {i} has id {}", cl.cluster_id)));
            }
            if cl.window_id >= n_windows {
                return Err(invalid(format!("cluster {} references missing window {}", cl.cluster_id, cl.window_id)));
            }
            if cl.member_ids.is_empty() || cl.size != cl.member_ids.len() {
                return Err(invalid(format!("cluster {} has size {} but {} members", cl.cluster_id, cl.size, cl.member_ids.len())));
            }
            if !cl.member_ids.contains(&cl.representative_id) {
                return Err(invalid(format!("cluster {} representative `{}` is not a member", cl.cluster_id, cl.representative_id)));
            }
            for m in &cl.member_ids {
                let Some(c) = by_id.get(m.as_str()) else {
                    return Err(invalid(format!("cluster {} references missing comment `{m}`", cl.cluster_id)));
                };
                if c.label.category() != Some(cl.category) {
                    return Err(invalid(format!("comment `{m}` in cluster {} has label {}", cl.cluster_id, c.label.slug())));
                }
                if member_of.insert(m.as_str(), cl.cluster_id).is_some() {
                    return Err(invalid(format!("comment `{m}` belongs to more than one cluster")));
                }
            }
        }
        for c in &self.comments {
            let id = c.comment.id.as_str();
            match (c.label.is_knowledge(), c.cluster_id, member_of.get(id)) {
                (false, None, None) => {}
                (true, Some(cid), Some(&m)) if cid == m => {}
                (_, cid, m) => {
                    return Err(invalid(format!("comment `{id}` cluster reference {cid:?} disagrees with cluster membership {m:?}")));
                }
            }
        }

        let mut assigned = HashSet::new();
        for a in &self.assignments {
            let Some(c) = by_id.get(a.comment_id.as_str()) else {
                return Err(invalid(format!("assignment references missing comment `{}`", a.comment_id)));
            };
            if a.window_id >= n_windows {
                return Err(invalid(format!("assignment of `{}` references missing window {}", a.comment_id, a.window_id)));
            }
            if !assigned.insert(a.comment_id.as_str()) {
                return Err(invalid(format!("comment `{}` assigned twice", a.comment_id)));
            }
            if let Some(cid) = c.cluster_id {
                if self.clusters[cid].window_id != a.window_id {
                    return Err(invalid(format!("comment `{}` assigned to window {} but its cluster {cid} is in window {}", a.comment_id, a.window_id, self.clusters[cid].window_id)));
                }
            }
        }
        if assigned.len() != member_of.len() {
            return Err(invalid(format!("{} knowledge comments but {} assignments", member_of.len(), assigned.len())));
        }

        if self.graphs.len() != n_windows {
            return Err(invalid(format!("{} graphs for {n_windows} windows", self.graphs.len())));
        }
        let mut seen_nodes = HashSet::new();
        for (i, g) in self.graphs.iter().enumerate() {
            if g.window_id != i {
                return Err(invalid(format!("graph at position {i} claims window {}", g.window_id)));
            }
            g.validate()?;
            for d in &g.danmaku {
                let Some(cl) = self.clusters.get(d.cluster_id) else {
                    return Err(invalid(format!("graph {i} node `{}` references missing cluster {}", d.id, d.cluster_id)));
                };
                if cl.window_id != i || d.id != danmaku_node_id(cl.cluster_id) || d.category != cl.category {
                    return Err(invalid(format!("graph {i} node `{}` does not match cluster {} in window {}", d.id, cl.cluster_id, cl.window_id)));
                }
                seen_nodes.insert(d.cluster_id);
            }
        }
        if let Some(cl) = self.clusters.iter().find(|c| !seen_nodes.contains(&c.cluster_id)) {
            return Err(invalid(format!("cluster {} has no node in graph {}", cl.cluster_id, cl.window_id)));
        }
        Ok(())
    }
}

fn tiles(kind: &str, spans: impl Iterator<Item = (usize, f64, f64)>, duration: f64) -> Result<(), BundleError> {
    let mut expected_start = 0.0;
    let mut count = 0;
    for (i, (index, start, end)) in spans.enumerate() {
        if index != i {
            return Err(invalid(format!("{kind} at position {i} has index {index}")));
        }
        if (start - expected_start).abs() > TILE_EPS || !(end > start) {
            return Err(invalid(format!("{kind} {index} spans [{start}, {end}) but should start at {expected_start}")));
        }
        expected_start = end;
        count += 1;
    }
    if count == 0 || (expected_start - duration).abs() > TILE_EPS {
        return Err(invalid(format!("{kind}s end at {expected_start} instead of {duration}")));
    }
    Ok(())
}

pub fn save_bundle(bundle: &KnowledgeBundle, path: &Path) -> Result<(), BundleError> {
    std::fs::write(path, bundle.to_canonical_json()).map_err(|source| BundleError::Io { path: path.to_path_buf(), source })
}

/// Read and fully validate a bundle.
pub fn load_bundle(path: &Path) -> Result<KnowledgeBundle, BundleError> {
    let bytes = std::fs::read(path).map_err(|source| BundleError::Io { path: path.to_path_buf(), source })?;
    let bundle = KnowledgeBundle::from_json(&bytes)?;
    if bundle.format_version != FORMAT_VERSION {
        return Err(invalid(format!("unsupported format_version {}", bundle.format_version)));
    }
    bundle.validate()?;
    Ok(bundle)
}
