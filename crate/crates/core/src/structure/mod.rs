//! Video sections with summaries, fixed-width knowledge-graph windows and
//! the per-window graphs.

pub mod extract;
pub mod graph;
pub mod segment;
pub mod summary;
pub mod windows;

pub use extract::{baseline_extract, Entity, ExtractorBackend, Extraction, Relation};
pub use graph::{build_graph, Attachment, DanmakuNode, EntityNode, GraphError, KnowledgeGraph, RelationEdge, HUB_ID};
pub use segment::{segment_video, SegmentParams, VideoSection};
pub use summary::{summarize_section, Summarizer};
pub use windows::{make_windows, KgWindow};
