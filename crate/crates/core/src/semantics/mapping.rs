//! Reassign delayed comments to the window whose content they address.

use serde::{Deserialize, Serialize};

use super::embed::Embedding;

const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct WindowProfile {
    pub index: usize,
    pub start: f64,
    pub end: f64,
    /// Embedding of the window's transcript text.
    pub embedding: Embedding,
    /// Whether this is the final window (closed on the right).
    pub last: bool,
}

impl WindowProfile {
    fn contains(&self, t: f64) -> bool {
        self.start <= t && (t < self.end || (self.last && t >= self.end))
    }

    fn distance(&self, t: f64) -> f64 {
        if self.contains(t) {
            0.0
        } else if t < self.start {
            self.start - t
        } else {
            t - self.end
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MappingParams {
    /// Weight of semantic similarity.
    pub lambda: f64,
    /// Weight of the normalized delay penalty.
    pub mu: f64,
    /// Longest accepted lag behind a window's end, seconds.
    pub max_delay: f64,
    /// How far a window may start after the comment, seconds.
    pub forward_slack: f64,
}

impl Default for MappingParams {
    fn default() -> Self {
        MappingParams { lambda: 1.0, mu: 0.5, max_delay: 30.0, forward_slack: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentAssignment {
    pub comment_id: String,
    pub window_id: usize,
    pub score: f64,
    /// `t - window.end`, clamped at 0.
    pub delay: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MappingError {
    #[error("no candidate window for comment {id} at t={t}")]
    NoCandidate { id: String, t: f64 },
}

impl MappingParams {
    pub fn score(&self, similarity: f64, delay: f64) -> f64 {
        self.lambda * similarity - self.mu * delay.max(0.0) / self.max_delay
    }
}

/// Pick the candidate window maximizing
/// `lambda * cos(comment, window) - mu * delay / max_delay`. Candidates
/// start no later than `t + forward_slack` and end no earlier than
/// `t - max_delay`. Ties prefer the window containing `t`, then the
/// temporally nearest, then the lowest index.
pub fn map_to_window(
    comment_id: &str,
    t: f64,
    embedding: &Embedding,
    windows: &[WindowProfile],
    params: &MappingParams,
) -> Result<SegmentAssignment, MappingError> {
    let mut best: Option<(&WindowProfile, f64, f64)> = None;
    for w in windows {
        let delay = (t - w.end).max(0.0);
        if w.start > t + params.forward_slack || t - w.end > params.max_delay {
            continue;
        }
        let score = params.score(embedding.cosine(&w.embedding), delay);
        let better = match best {
            None => true,
            Some((b, bs, _)) => {
                if score > bs + TIE_EPS {
                    true
                } else if score < bs - TIE_EPS {
                    false
                } else {
                    (w.contains(t), -w.distance(t)) > (b.contains(t), -b.distance(t))
                }
            }
        };
        if better {
            best = Some((w, score, delay));
        }
    }
    let (w, score, delay) = best.ok_or_else(|| MappingError::NoCandidate { id: comment_id.to_string(), t })?;
    Ok(SegmentAssignment { comment_id: comment_id.to_string(), window_id: w.index, score, delay })
}
