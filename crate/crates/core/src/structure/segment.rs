//! TextTiling-style segmentation of the transcript into directory sections.

use serde::{Deserialize, Serialize};

use crate::ingest::TranscriptLine;
use crate::semantics::embed;

const BLOCK_LINES: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VideoSection {
    pub index: usize,
    pub start: f64,
    pub end: f64,
    pub summary: String,
    /// Transcript line indices `[line_start, line_end)` starting inside the section.
    pub line_start: usize,
    pub line_end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SegmentParams {
    pub max_sections: usize,
    /// Minimum section length, seconds.
    pub min_len: f64,
}

impl Default for SegmentParams {
    fn default() -> Self {
        SegmentParams { max_sections: 12, min_len: 30.0 }
    }
}

/// Similarity between the blocks of up to three lines either side of each
/// gap between consecutive lines.
pub fn gap_similarities(lines: &[TranscriptLine]) -> Vec<f64> {
    let block = |range: std::ops::Range<usize>| {
        embed(&lines[range].iter().map(|l| l.text.as_str()).collect::<Vec<_>>().join(" "))
    };
    (0..lines.len().saturating_sub(1))
        .map(|g| {
            let left = block((g + 1).saturating_sub(BLOCK_LINES)..g + 1);
            let right = block(g + 1..(g + 1 + BLOCK_LINES).min(lines.len()));
            left.cosine(&right)
        })
        .collect()
}

/// Depth of each similarity valley: climb to the nearest peak on each side.
pub fn depth_scores(sims: &[f64]) -> Vec<f64> {
    (0..sims.len())
        .map(|g| {
            let mut l = g;
            while l > 0 && sims[l - 1] >= sims[l] {
                l -= 1;
            }
            let mut r = g;
            while r + 1 < sims.len() && sims[r + 1] >= sims[r] {
                r += 1;
            }
            (sims[l] - sims[g]) + (sims[r] - sims[g])
        })
        .collect()
}

/// Partition `[0, duration]` into sections. Boundaries sit at the start of
/// the line after a local depth maximum and are taken greedily by
/// descending depth as long as every section stays at least `min_len` long
/// and the count stays within `max_sections`. Summaries are left empty.
pub fn segment_video(lines: &[TranscriptLine], duration: f64, params: SegmentParams) -> Vec<VideoSection> {
    let mut boundaries: Vec<f64> = Vec::new();
    if duration >= params.min_len && lines.len() >= 2 {
        let depth = depth_scores(&gap_similarities(lines));
        let mut candidates: Vec<usize> = (0..depth.len())
            .filter(|&g| {
                depth[g] > 1e-12
                    && (g == 0 || depth[g] >= depth[g - 1])
                    && (g + 1 == depth.len() || depth[g] >= depth[g + 1])
            })
            .collect();
        candidates.sort_by(|&a, &b| depth[b].total_cmp(&depth[a]).then(a.cmp(&b)));
        for g in candidates {
            if boundaries.len() + 1 >= params.max_sections {
                break;
            }
            let b = lines[g + 1].start;
            if b <= 0.0 || b >= duration {
                continue;
            }
            let pos = boundaries.partition_point(|&x| x < b);
            let prev = if pos == 0 { 0.0 } else { boundaries[pos - 1] };
            let next = boundaries.get(pos).copied().unwrap_or(duration);
            if b - prev >= params.min_len && next - b >= params.min_len {
                boundaries.insert(pos, b);
            }
        }
    }
    let mut edges = Vec::with_capacity(boundaries.len() + 2);
    edges.push(0.0);
    edges.extend(boundaries);
    edges.push(duration);
    edges
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let line_start = lines.partition_point(|l| l.start < w[0]);
            let line_end = if i + 2 == edges.len() { lines.len() } else { lines.partition_point(|l| l.start < w[1]) };
            VideoSection { index: i, start: w[0], end: w[1], summary: String::new(), line_start, line_end }
        })
        .collect()
}
