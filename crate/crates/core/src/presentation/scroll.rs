use serde::{Deserialize, Serialize};

pub const MIN_CROSSING_SECS: f64 = 4.0;
pub const MAX_CROSSING_SECS: f64 = 12.0;
pub const MIN_FONT_SCALE: f64 = 1.0;
pub const MAX_FONT_SCALE: f64 = 1.6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScrollSpec {
    /// Seconds to cross the viewport.
    pub duration: f64,
    pub font_scale: f64,
    /// Cluster size shown next to the comment, when at least 2.
    pub badge: Option<usize>,
}

/// Longer comments and bigger clusters scroll more slowly; bigger clusters
/// are drawn larger. `len` is in characters; both arguments are taken as at
/// least 1.
pub fn scroll_spec(len: usize, cluster_size: usize) -> ScrollSpec {
    let l = len.max(1) as f64;
    let c = cluster_size.max(1);
    let log_c = (c as f64).log2();
    let duration = 6.0 * (1.0 + 0.5 * (l - 12.0).max(0.0) / 12.0) * (1.0 + 0.15 * log_c);
    ScrollSpec {
        duration: duration.clamp(MIN_CROSSING_SECS, MAX_CROSSING_SECS),
        font_scale: (1.0 + 0.2 * log_c).clamp(MIN_FONT_SCALE, MAX_FONT_SCALE),
        badge: (c >= 2).then_some(c),
    }
}
