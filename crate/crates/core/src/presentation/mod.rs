//! Render-ready geometry: Wordstream buckets and layout, the compressed
//! stream for Focused mode, scroll dynamics and a static SVG emitter.

pub mod layout;
pub mod scroll;
pub mod stream;
pub mod svg;

pub use layout::{layout_wordstream, simplify_stream, Band, KeywordBox, LayoutParams, WordstreamLayout};
pub use scroll::{scroll_spec, ScrollSpec};
pub use stream::{bucketize, KeywordWeight, StreamBucket, DEFAULT_BUCKET_SECS};
pub use svg::render_svg;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PresentationError {
    #[error("empty zoom range [{from}, {to})")]
    EmptyRange { from: f64, to: f64 },
    #[error("zoom range [{from}, {to}) is outside [0, {duration}]")]
    OutOfRange { from: f64, to: f64, duration: f64 },
    #[error("bucket width must be positive, got {0}")]
    BadWidth(f64),
    #[error("viewport must be positive, got {width}x{height}")]
    BadViewport { width: f64, height: f64 },
}
