//! DBSCAN over cosine distance (`1 - cos`).
//!
//! A point is core when at least `min_pts` points (itself included) lie
//! within `eps`. Clusters are numbered in order of their lowest-index core
//! point; a border point reachable from several clusters joins the lowest
//! numbered one.

use std::collections::VecDeque;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DbscanLabel {
    Cluster(usize),
    Noise,
}

impl DbscanLabel {
    pub fn cluster(self) -> Option<usize> {
        match self {
            DbscanLabel::Cluster(c) => Some(c),
            DbscanLabel::Noise => None,
        }
    }
}

pub fn dbscan<P: AsRef<[f64]>>(points: &[P], eps: f64, min_pts: usize) -> Vec<DbscanLabel> {
    let n = points.len();
    let norms: Vec<f64> = points.iter().map(|p| p.as_ref().iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    let distance = |i: usize, j: usize| {
        if norms[i] == 0.0 || norms[j] == 0.0 {
            return 1.0;
        }
        let dot: f64 = points[i].as_ref().iter().zip(points[j].as_ref()).map(|(a, b)| a * b).sum();
        1.0 - dot / (norms[i] * norms[j])
    };
    let neighbors: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| i == j || distance(i, j) <= eps).collect()).collect();
    let is_core: Vec<bool> = neighbors.iter().map(|nb| nb.len() >= min_pts).collect();

    let mut labels = vec![DbscanLabel::Noise; n];
    let mut next = 0;
    for seed in 0..n {
        if !is_core[seed] || labels[seed] != DbscanLabel::Noise {
            continue;
        }
        let id = next;
        next += 1;
        labels[seed] = DbscanLabel::Cluster(id);
        let mut queue = VecDeque::from([seed]);
        while let Some(p) = queue.pop_front() {
            for &q in &neighbors[p] {
                if labels[q] != DbscanLabel::Noise {
                    continue;
                }
                labels[q] = DbscanLabel::Cluster(id);
                if is_core[q] {
                    queue.push_back(q);
                }
            }
        }
    }
    labels
}
