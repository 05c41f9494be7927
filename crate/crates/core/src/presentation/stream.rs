use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::PresentationError;
use crate::classify::DisplayCategory;
use crate::semantics::DanmakuCluster;
use crate::structure::KgWindow;

pub const DEFAULT_BUCKET_SECS: f64 = 15.0;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordWeight {
    pub token: String,
    pub weight: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamBucket {
    pub t_start: f64,
    pub width: f64,
    /// Summed cluster sizes per category.
    pub counts: BTreeMap<DisplayCategory, usize>,
    /// Per category, by descending weight then token.
    pub keywords: BTreeMap<DisplayCategory, Vec<KeywordWeight>>,
}

impl StreamBucket {
    pub fn center(&self) -> f64 {
        self.t_start + self.width / 2.0
    }

    pub fn count(&self, c: DisplayCategory) -> usize {
        self.counts.get(&c).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }
}

/// Buckets of `width` seconds tiling `[from, to)` (the last may be short).
/// Each cluster lands in the bucket holding its window's midpoint and adds
/// its size to that bucket's category count; each member with a keyword
/// adds 1 to that keyword's weight.
pub fn bucketize(
    clusters: &[DanmakuCluster],
    windows: &[KgWindow],
    keywords: &HashMap<&str, &str>,
    width: f64,
    from: f64,
    to: f64,
) -> Result<Vec<StreamBucket>, PresentationError> {
    if !(width > 0.0) || !width.is_finite() {
        return Err(PresentationError::BadWidth(width));
    }
    if !(to > from) || !from.is_finite() || !to.is_finite() {
        return Err(PresentationError::EmptyRange { from, to });
    }
    let n = ((to - from) / width).ceil() as usize;
    let mut buckets: Vec<StreamBucket> = (0..n)
        .map(|i| {
            let start = from + i as f64 * width;
            let end = if i + 1 == n { to } else { from + (i + 1) as f64 * width };
            StreamBucket { t_start: start, width: end - start, counts: BTreeMap::new(), keywords: BTreeMap::new() }
        })
        .collect();
    let mut weights: Vec<BTreeMap<DisplayCategory, HashMap<&str, usize>>> = vec![BTreeMap::new(); n];
    for c in clusters {
        let Some(w) = windows.get(c.window_id) else { continue };
        let mid = w.midpoint();
        if mid < from || mid >= to {
            continue;
        }
        let b = (((mid - from) / width).floor() as usize).min(n - 1);
        *buckets[b].counts.entry(c.category).or_insert(0) += c.size;
        let kw = weights[b].entry(c.category).or_default();
        for m in &c.member_ids {
            if let Some(tok) = keywords.get(m.as_str()) {
                *kw.entry(tok).or_insert(0) += 1;
            }
        }
    }
    for (bucket, per_cat) in buckets.iter_mut().zip(weights) {
        for (cat, map) in per_cat {
            if map.is_empty() {
                continue;
            }
            let mut list: Vec<KeywordWeight> = map.into_iter().map(|(t, w)| KeywordWeight { token: t.to_string(), weight: w }).collect();
            list.sort_by(|a, b| b.weight.cmp(&a.weight).then_with(|| a.token.cmp(&b.token)));
            bucket.keywords.insert(cat, list);
        }
    }
    Ok(buckets)
}
