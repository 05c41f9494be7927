//! Text embeddings, density clustering with medoid representatives,
//! delay-aware segment mapping, keyword extraction and related-comment
//! lookup.

pub mod cluster;
pub mod dbscan;
pub mod embed;
pub mod keyword;
pub mod mapping;
pub mod related;

pub use cluster::{cluster_danmaku, ClusterItem, DanmakuCluster};
pub use dbscan::{dbscan, DbscanLabel};
pub use embed::{embed, Embedding, EMBEDDING_DIM};
pub use keyword::{extract_keyword, CorpusStats};
pub use mapping::{map_to_window, MappingError, MappingParams, SegmentAssignment, WindowProfile};
pub use related::{related_danmaku, RelatedCandidate, RelatedError, RelatedHit};
