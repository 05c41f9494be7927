//! Comments posted near a selected comment and linked to it, either by a
//! shared knowledge-graph entity or by text similarity.

use super::embed::Embedding;

#[derive(Debug, Clone)]
pub struct RelatedCandidate {
    pub id: String,
    pub t: f64,
    pub embedding: Embedding,
    /// Entity the comment's cluster is attached to, if any.
    pub entity: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelatedHit {
    pub id: String,
    pub cosine: f64,
    /// Signed time offset from the selected comment.
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RelatedError {
    #[error("unknown comment id `{0}`")]
    UnknownId(String),
}

/// Candidates within `radius` seconds of the target that share its entity
/// or reach cosine `tau`, sorted by descending cosine then ascending `|dt|`
/// (then id). The target itself is excluded.
pub fn related_danmaku(target_id: &str, candidates: &[RelatedCandidate], radius: f64, tau: f64) -> Result<Vec<RelatedHit>, RelatedError> {
    let target = candidates.iter().find(|c| c.id == target_id).ok_or_else(|| RelatedError::UnknownId(target_id.to_string()))?;
    let mut hits: Vec<RelatedHit> = candidates
        .iter()
        .filter(|c| c.id != target.id && (c.t - target.t).abs() <= radius)
        .filter_map(|c| {
            let cosine = target.embedding.cosine(&c.embedding);
            let same_entity = target.entity.is_some() && c.entity == target.entity;
            (same_entity || cosine >= tau).then(|| RelatedHit { id: c.id.clone(), cosine, dt: c.t - target.t })
        })
        .collect();
    hits.sort_by(|a, b| {
        b.cosine
            .total_cmp(&a.cosine)
            .then_with(|| a.dt.abs().total_cmp(&b.dt.abs()))
            .then_with(|| a.id.cmp(&b.id))
    });
    Ok(hits)
}
