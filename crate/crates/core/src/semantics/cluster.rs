use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dbscan::{dbscan, DbscanLabel};
use super::embed::Embedding;
use crate::classify::DisplayCategory;

/// Mean similarities within this distance count as tied.
const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct ClusterItem<'a> {
    pub comment_id: &'a str,
    pub t: f64,
    pub embedding: &'a Embedding,
    pub category: DisplayCategory,
    pub window_id: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DanmakuCluster {
    pub cluster_id: usize,
    pub category: DisplayCategory,
    /// Ordered by time, then id.
    pub member_ids: Vec<String>,
    pub representative_id: String,
    pub window_id: usize,
    pub size: usize,
}

/// Cluster comments independently within each (window, category) bucket.
/// Noise points become singleton clusters, so every input lands in exactly
/// one cluster. Cluster ids follow (window, legend order, earliest member).
pub fn cluster_danmaku(items: &[ClusterItem<'_>], eps: f64, min_pts: usize) -> Vec<DanmakuCluster> {
    let mut buckets: BTreeMap<(usize, DisplayCategory), Vec<&ClusterItem<'_>>> = BTreeMap::new();
    for item in items {
        buckets.entry((item.window_id, item.category)).or_default().push(item);
    }
    let groups: Vec<Vec<DanmakuCluster>> = buckets
        .into_par_iter()
        .map(|((window_id, category), mut members)| {
            members.sort_by(|a, b| a.t.total_cmp(&b.t).then_with(|| a.comment_id.cmp(b.comment_id)));
            let points: Vec<&Embedding> = members.iter().map(|m| m.embedding).collect();
            let labels = dbscan(&points, eps, min_pts);
            // group indices; noise points get their own group
            let mut groups: Vec<Vec<usize>> = Vec::new();
            let mut by_cluster: BTreeMap<usize, usize> = BTreeMap::new();
            for (i, label) in labels.iter().enumerate() {
                match label {
                    DbscanLabel::Cluster(c) => {
                        let g = *by_cluster.entry(*c).or_insert_with(|| {
                            groups.push(Vec::new());
                            groups.len() - 1
                        });
                        groups[g].push(i);
                    }
                    DbscanLabel::Noise => groups.push(vec![i]),
                }
            }
            groups
                .into_iter()
                .map(|idx| {
                    let group: Vec<&ClusterItem<'_>> = idx.iter().map(|&i| members[i]).collect();
                    let rep = medoid(&group);
                    DanmakuCluster {
                        cluster_id: 0,
                        category,
                        member_ids: group.iter().map(|m| m.comment_id.to_string()).collect(),
                        representative_id: group[rep].comment_id.to_string(),
                        window_id,
                        size: group.len(),
                    }
                })
                .collect()
        })
        .collect();
    let mut out: Vec<DanmakuCluster> = groups.into_iter().flatten().collect();
    for (i, c) in out.iter_mut().enumerate() {
        c.cluster_id = i;
    }
    out
}

/// Index of the member with the highest mean cosine similarity to the other
/// members; ties go to the earliest time, then the lowest id. `group` must
/// already be sorted by (t, id).
pub fn medoid(group: &[&ClusterItem<'_>]) -> usize {
    if group.len() == 1 {
        return 0;
    }
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for (i, m) in group.iter().enumerate() {
        let total: f64 = group.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, o)| m.embedding.cosine(o.embedding)).sum();
        let score = total / (group.len() - 1) as f64;
        if score > best_score + TIE_EPS {
            best = i;
            best_score = score;
        }
    }
    best
}
