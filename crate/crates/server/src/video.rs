//! One loaded bundle plus the lookup tables derived from it, and the pure
//! projections behind each endpoint.

use std::collections::HashMap;
use std::sync::Arc;

use ck_core::backend::BackendRegistry;
use ck_core::bundle::{BundleComment, KnowledgeBundle, Provenance, Wordstream};
use ck_core::classify::{CategorySet, DisplayCategory};
use ck_core::config::PipelineConfig;
use ck_core::explain::{ExplainRequest, Explainer, Explanation};
use ck_core::ingest::{TranscriptLine, VideoMeta};
use ck_core::presentation::{bucketize, layout_wordstream, scroll_spec, simplify_stream, PresentationError, ScrollSpec};
use ck_core::semantics::{embed, related_danmaku, RelatedCandidate};
use ck_core::structure::graph::danmaku_node_id;
use ck_core::structure::windows::window_index;
use ck_core::structure::{KgWindow, KnowledgeGraph, VideoSection, HUB_ID};
use serde::Serialize;

use crate::error::{ApiError, ServerError};

/// Half-open time range `[from, to)` with an optional category filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeQuery {
    pub from: f64,
    pub to: f64,
    pub categories: CategorySet,
}

#[derive(Debug, Clone, Serialize)]
pub struct VideoSummary {
    pub video_id: String,
    pub title: String,
    pub duration: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VideoDetail<'a> {
    pub meta: &'a VideoMeta,
    pub window_width: f64,
    pub windows: usize,
    pub sections: usize,
    pub comments: usize,
    pub knowledge_comments: usize,
    pub clusters: usize,
    pub provenance: &'a Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct WordstreamView<'a> {
    pub from: f64,
    pub to: f64,
    pub categories: Vec<DisplayCategory>,
    #[serde(flatten)]
    pub stream: std::borrow::Cow<'a, Wordstream>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DanmakuView<'a> {
    pub cluster_id: usize,
    pub node_id: String,
    pub representative_id: &'a str,
    pub t: f64,
    pub text: &'a str,
    pub category: DisplayCategory,
    pub size: usize,
    pub window_id: usize,
    pub keyword: Option<&'a str>,
    pub scroll: ScrollSpec,
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowRef {
    pub index: usize,
    pub start: f64,
    pub end: f64,
}

impl From<&KgWindow> for WindowRef {
    fn from(w: &KgWindow) -> Self {
        WindowRef { index: w.index, start: w.start, end: w.end }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphView<'a> {
    pub window: WindowRef,
    pub graph: &'a KnowledgeGraph,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelatedItem<'a> {
    pub id: &'a str,
    pub t: f64,
    pub text: &'a str,
    pub category: Option<DisplayCategory>,
    pub cosine: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelatedView<'a> {
    pub id: &'a str,
    pub radius: f64,
    pub tau: f64,
    pub related: Vec<RelatedItem<'a>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExplanationView<'a> {
    pub id: &'a str,
    pub window: WindowRef,
    pub entity: Option<String>,
    pub relations: Vec<String>,
    #[serde(flatten)]
    pub explanation: Explanation,
}

/// An immutable bundle with its derived indexes.
pub struct Video {
    pub bundle: KnowledgeBundle,
    pub config: PipelineConfig,
    explainer: Arc<dyn Explainer>,
    fallback_explainer: Arc<dyn Explainer>,
    comment_index: HashMap<String, usize>,
    candidates: Vec<RelatedCandidate>,
}

impl Video {
    pub fn new(bundle: KnowledgeBundle, registry: &BackendRegistry) -> Result<Self, ServerError> {
        let id = bundle.meta.video_id.clone();
        let wrap = |message: String| ServerError::Setup { video_id: id.clone(), message };
        let config = bundle.config().map_err(|e| wrap(e.to_string()))?;
        let (lexicon, stopwords) = config.load_data().map_err(|e| wrap(e.to_string()))?;
        let explainer = registry
            .explainers
            .build(&config.explainer.backend, &config.settings(&config.explainer.endpoint, &lexicon, &stopwords))
            .map_err(|e| wrap(e.to_string()))?;
        let fallback_explainer = registry.explainers.build("offline", &config.settings(&None, &lexicon, &stopwords)).map_err(|e| wrap(e.to_string()))?;

        let comment_index = bundle.comments.iter().enumerate().map(|(i, c)| (c.comment.id.clone(), i)).collect();
        let candidates = bundle
            .comments
            .iter()
            .filter_map(|c| {
                let cid = c.cluster_id?;
                Some(RelatedCandidate {
                    id: c.comment.id.clone(),
                    t: c.comment.t,
                    embedding: embed(&c.comment.text),
                    entity: attached_entity(&bundle, cid).map(|(label, _)| label.to_string()),
                })
            })
            .collect();
        Ok(Video { bundle, config, explainer, fallback_explainer, comment_index, candidates })
    }

    pub fn id(&self) -> &str {
        &self.bundle.meta.video_id
    }

    pub fn duration(&self) -> f64 {
        self.bundle.meta.duration
    }

    pub fn summary(&self) -> VideoSummary {
        let m = &self.bundle.meta;
        VideoSummary { video_id: m.video_id.clone(), title: m.title.clone(), duration: m.duration }
    }

    pub fn detail(&self) -> VideoDetail<'_> {
        let b = &self.bundle;
        VideoDetail {
            meta: &b.meta,
            window_width: self.config.windows.width,
            windows: b.windows.len(),
            sections: b.sections.len(),
            comments: b.comments.len(),
            knowledge_comments: b.comments.iter().filter(|c| c.label.is_knowledge()).count(),
            clusters: b.clusters.len(),
            provenance: &b.provenance,
        }
    }

    pub fn sections(&self) -> &[VideoSection] {
        &self.bundle.sections
    }

    /// The stored wordstream for the full range and every category;
    /// otherwise one recomputed for the zoom range and filter.
    pub fn wordstream(&self, q: RangeQuery) -> Result<WordstreamView<'_>, ApiError> {
        let b = &self.bundle;
        let categories = q.categories.iter().collect();
        if q.from == 0.0 && q.to == self.duration() && q.categories == CategorySet::all() {
            return Ok(WordstreamView { from: q.from, to: q.to, categories, stream: std::borrow::Cow::Borrowed(&b.wordstream) });
        }
        if q.from < 0.0 || q.to > self.duration() {
            return Err(ApiError::bad_request(PresentationError::OutOfRange { from: q.from, to: q.to, duration: self.duration() }.to_string()));
        }
        let keywords: HashMap<&str, &str> = b.comments.iter().filter_map(|c| Some((c.comment.id.as_str(), c.keyword.as_deref()?))).collect();
        let ws = &self.config.wordstream;
        let buckets = bucketize(&b.clusters, &b.windows, &keywords, ws.bucket_width, q.from, q.to).map_err(ApiError::bad_request)?;
        let layout = layout_wordstream(&buckets, q.categories, &ws.layout_params()).map_err(ApiError::bad_request)?;
        let simplified = simplify_stream(&layout, ws.simplified_height).map_err(ApiError::bad_request)?;
        Ok(WordstreamView { from: q.from, to: q.to, categories, stream: std::borrow::Cow::Owned(Wordstream { buckets, layout, simplified }) })
    }

    /// Cluster representatives whose window midpoint lies in `[from, to)`,
    /// ordered by time.
    pub fn danmaku(&self, q: RangeQuery) -> Vec<DanmakuView<'_>> {
        let b = &self.bundle;
        let mut out: Vec<DanmakuView<'_>> = b
            .clusters
            .iter()
            .filter(|c| q.categories.contains(c.category))
            .filter(|c| b.windows.get(c.window_id).is_some_and(|w| w.midpoint() >= q.from && w.midpoint() < q.to))
            .filter_map(|c| {
                let rep = self.comment(&c.representative_id)?;
                Some(DanmakuView {
                    cluster_id: c.cluster_id,
                    node_id: danmaku_node_id(c.cluster_id),
                    representative_id: &c.representative_id,
                    t: rep.comment.t,
                    text: &rep.comment.text,
                    category: c.category,
                    size: c.size,
                    window_id: c.window_id,
                    keyword: rep.keyword.as_deref(),
                    scroll: scroll_spec(rep.comment.text.chars().count(), c.size),
                })
            })
            .collect();
        out.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.cluster_id.cmp(&b.cluster_id)));
        out
    }

    /// Graph of the fixed-width window containing `t`.
    pub fn graph_at(&self, t: f64) -> Result<GraphView<'_>, ApiError> {
        if !(0.0..=self.duration()).contains(&t) {
            return Err(ApiError::bad_request(format!("t={t} is outside [0, {}]", self.duration())));
        }
        let b = &self.bundle;
        let i = window_index(t, self.config.windows.width, b.windows.len());
        let graph = b.graphs.iter().find(|g| g.window_id == i).ok_or_else(|| ApiError::internal(format!("no graph for window {i}")))?;
        Ok(GraphView { window: (&b.windows[i]).into(), graph })
    }

    /// Transcript lines overlapping `[from, to)`.
    pub fn transcript(&self, from: f64, to: f64) -> Vec<&TranscriptLine> {
        self.bundle.transcript.iter().filter(|l| l.end > from && l.start < to).collect()
    }

    fn comment(&self, id: &str) -> Option<&BundleComment> {
        self.comment_index.get(id).map(|&i| &self.bundle.comments[i])
    }

    /// A comment by id, or the representative behind a graph node id.
    pub fn resolve(&self, did: &str) -> Result<&BundleComment, ApiError> {
        if let Some(c) = self.comment(did) {
            return Ok(c);
        }
        did.strip_prefix('d')
            .and_then(|n| n.parse::<usize>().ok())
            .and_then(|cid| self.bundle.clusters.iter().find(|c| c.cluster_id == cid))
            .and_then(|c| self.comment(&c.representative_id))
            .ok_or_else(|| ApiError::not_found(format!("unknown danmaku `{did}` in video `{}`", self.id())))
    }

    pub fn related(&self, did: &str) -> Result<RelatedView<'_>, ApiError> {
        let target = self.resolve(did)?;
        let id = target.comment.id.as_str();
        let (radius, tau) = (self.config.related.radius, self.config.related.tau);
        let related = if self.candidates.iter().any(|c| c.id == id) {
            related_danmaku(id, &self.candidates, radius, tau).map_err(|e| ApiError::internal(e.to_string()))?
        } else {
            // not a knowledge comment: compare against the knowledge set
            let mut with_target = self.candidates.clone();
            with_target.push(RelatedCandidate { id: id.to_string(), t: target.comment.t, embedding: embed(&target.comment.text), entity: None });
            related_danmaku(id, &with_target, radius, tau).map_err(|e| ApiError::internal(e.to_string()))?
        };
        let related = related
            .into_iter()
            .filter_map(|h| {
                let c = self.comment(&h.id)?;
                Some(RelatedItem { id: &c.comment.id, t: c.comment.t, text: &c.comment.text, category: c.label.category(), cosine: h.cosine, dt: h.dt })
            })
            .collect();
        Ok(RelatedView { id, radius, tau, related })
    }

    /// Inputs for the explainer: the comment, its window's transcript, the
    /// entity its cluster is attached to and that entity's relations.
    pub fn explain_request(&self, did: &str) -> Result<(&str, WindowRef, ExplainRequest), ApiError> {
        let target = self.resolve(did)?;
        let b = &self.bundle;
        let cluster = target.cluster_id.and_then(|cid| b.clusters.iter().find(|c| c.cluster_id == cid));
        let window_id = match cluster {
            Some(c) => c.window_id,
            None => window_index(target.comment.t, self.config.windows.width, b.windows.len()),
        };
        let window = &b.windows[window_id];
        let (entity, relations) = match cluster.and_then(|c| attached_entity(b, c.cluster_id)) {
            Some((label, eid)) => {
                let graph = b.graphs.iter().find(|g| g.window_id == window_id).ok_or_else(|| ApiError::internal(format!("no graph for window {window_id}")))?;
                let name = |id: &str| graph.entity(id).map(|e| e.label.clone()).unwrap_or_default();
                let rels = graph
                    .relations
                    .iter()
                    .filter(|r| r.subject == eid || r.object == eid)
                    .map(|r| format!("{} {} {}", name(&r.subject), r.predicate, name(&r.object)))
                    .collect();
                (Some(label.to_string()), rels)
            }
            None => (None, Vec::new()),
        };
        let req = ExplainRequest { comment: target.comment.text.clone(), excerpt: window.lines().collect::<Vec<_>>().join(" "), entity, relations };
        Ok((&target.comment.id, window.into(), req))
    }

    /// Runs the configured explainer; a failing remote backend degrades to
    /// the offline template.
    pub fn explain(&self, req: &ExplainRequest) -> Explanation {
        match self.explainer.explain(req) {
            Ok(e) => e,
            Err(err) => {
                tracing::warn!(video = self.id(), "explainer failed, using offline template: {err}");
                self.fallback_explainer.explain(req).expect("offline explainer is infallible")
            }
        }
    }
}

/// Label and id of the non-hub entity a cluster is attached to.
fn attached_entity(b: &KnowledgeBundle, cluster_id: usize) -> Option<(&str, &str)> {
    let cluster = b.clusters.iter().find(|c| c.cluster_id == cluster_id)?;
    let graph = b.graphs.iter().find(|g| g.window_id == cluster.window_id)?;
    let a = graph.attachment_of(cluster_id)?;
    if a.entity == HUB_ID {
        return None;
    }
    graph.entity(&a.entity).map(|e| (e.label.as_str(), e.id.as_str()))
}
