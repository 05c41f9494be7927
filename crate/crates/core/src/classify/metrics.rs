//! Agreement and accuracy metrics, plus the category distribution table.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::hash::Hash;

use serde::Serialize;

use super::{DisplayCategory, KnowledgeLabel, Theme};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("label vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("no labels")]
    Empty,
    #[error("kappa is undefined: chance agreement is 1 (both raters constant and equal)")]
    UndefinedKappa,
    #[error("confusion matrix must be k x k with k >= 2 and k class names")]
    BadShape,
    #[error("confusion matrix has no observations")]
    AllZero,
}

/// Cohen's kappa, `(p_o - p_e) / (1 - p_e)`, over the joint contingency
/// table of the two raters.
pub fn cohens_kappa<T: Eq + Hash>(a: &[T], b: &[T]) -> Result<f64, MetricError> {
    if a.len() != b.len() {
        return Err(MetricError::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(MetricError::Empty);
    }
    let mut index: HashMap<&T, usize> = HashMap::new();
    for x in a.iter().chain(b) {
        let next = index.len();
        index.entry(x).or_insert(next);
    }
    let k = index.len();
    let mut table = vec![0u64; k * k];
    for (x, y) in a.iter().zip(b) {
        table[index[x] * k + index[y]] += 1;
    }
    // integer numerators keep the result independent of class order:
    // kappa = (n * agree - sum row_i * col_i) / (n^2 - sum row_i * col_i)
    let n = a.len() as u128;
    let agree: u128 = (0..k).map(|i| table[i * k + i] as u128).sum();
    let chance: u128 = (0..k)
        .map(|i| {
            let row: u64 = (0..k).map(|j| table[i * k + j]).sum();
            let col: u64 = (0..k).map(|j| table[j * k + i]).sum();
            row as u128 * col as u128
        })
        .sum();
    if chance == n * n {
        return Err(MetricError::UndefinedKappa);
    }
    Ok(((n * agree) as f64 - chance as f64) / (n * n - chance) as f64)
}

/// Rows are true classes, columns predicted classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    classes: Vec<String>,
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(classes: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self, MetricError> {
        let k = classes.len();
        if k < 2 || counts.len() != k || counts.iter().any(|r| r.len() != k) {
            return Err(MetricError::BadShape);
        }
        Ok(ConfusionMatrix { classes, counts })
    }

    /// Tally (truth, prediction) pairs over a fixed class list.
    pub fn from_pairs<T: Eq + Hash>(classes: &[T], names: Vec<String>, pairs: impl IntoIterator<Item = (T, T)>) -> Result<Self, MetricError> {
        let pos: HashMap<&T, usize> = classes.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut counts = vec![vec![0; classes.len()]; classes.len()];
        for (t, p) in pairs {
            if let (Some(&i), Some(&j)) = (pos.get(&t), pos.get(&p)) {
                counts[i][j] += 1;
            }
        }
        Self::new(names, counts)
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn count(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth][predicted]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassScore {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
    /// Set when the class has neither true nor predicted members.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct F1Report {
    pub per_class: Vec<ClassScore>,
    pub macro_f1: f64,
}

/// Per-class precision, recall and F1, macro averaged over all classes.
pub fn f1_report(m: &ConfusionMatrix) -> Result<F1Report, MetricError> {
    let k = m.k();
    let total: u64 = m.counts.iter().flatten().sum();
    if total == 0 {
        return Err(MetricError::AllZero);
    }
    let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let per_class: Vec<ClassScore> = (0..k)
        .map(|c| {
            let tp = m.count(c, c);
            let support: u64 = m.counts[c].iter().sum();
            let predicted: u64 = (0..k).map(|r| m.count(r, c)).sum();
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, support);
            // 2tp / (2tp + fp + fn)
            let f1 = ratio(2 * tp, support + predicted);
            ClassScore { class: m.classes[c].clone(), precision, recall, f1, support, flagged: support == 0 && predicted == 0 }
        })
        .collect();
    let macro_f1 = per_class.iter().map(|s| s.f1).sum::<f64>() / k as f64;
    Ok(F1Report { per_class, macro_f1 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionRow {
    pub name: String,
    pub slug: String,
    pub count: usize,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionReport {
    pub total_comments: usize,
    pub knowledge_comments: usize,
    /// One row per theme, in taxonomy order.
    pub themes: Vec<DistributionRow>,
    /// Seven display categories, interpretation split by stance.
    pub categories: Vec<DistributionRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn distribution_report(labels: &[KnowledgeLabel]) -> DistributionReport {
    let knowledge: Vec<DisplayCategory> = labels.iter().filter_map(|l| l.category()).collect();
    let n = knowledge.len();
    if n == 0 {
        return DistributionReport {
            total_comments: labels.len(),
            knowledge_comments: 0,
            themes: Vec::new(),
            categories: Vec::new(),
            note: Some("no knowledge comments; distribution is empty".into()),
        };
    }
    let pct = |c: usize| c as f64 * 100.0 / n as f64;
    let themes = Theme::ALL
        .iter()
        .map(|&t| {
            let count = knowledge.iter().filter(|c| c.theme() == t).count();
            DistributionRow { name: t.display_name().into(), slug: theme_slug(t).into(), count, percent: pct(count) }
        })
        .collect();
    let categories = DisplayCategory::ALL
        .iter()
        .map(|&c| {
            let count = knowledge.iter().filter(|&&k| k == c).count();
            DistributionRow { name: c.display_name().into(), slug: c.slug().into(), count, percent: pct(count) }
        })
        .collect();
    DistributionReport { total_comments: labels.len(), knowledge_comments: n, themes, categories, note: None }
}

fn theme_slug(t: Theme) -> &'static str {
    match t {
        Theme::Interpretation => "interpretation",
        Theme::Inquiry => "inquiry",
        Theme::ExperienceSharing => "experience-sharing",
        Theme::ConceptNoting => "concept-noting",
        Theme::SupplementaryKnowledge => "supplementary-knowledge",
    }
}

impl DistributionReport {
    /// Aligned text table: theme rows with frequency, interpretation rows
    /// broken out by stance underneath.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "knowledge comments: {} of {}", self.knowledge_comments, self.total_comments);
        if let Some(note) = &self.note {
            let _ = writeln!(out, "{note}");
            return out;
        }
        let _ = writeln!(out, "{:<32} {:>7} {:>9}", "Category", "Count", "Frequency");
        for row in &self.themes {
            let _ = writeln!(out, "{:<32} {:>7} {:>8.1}%", row.name, row.count, row.percent);
            if row.slug == "interpretation" {
                for sub in self.categories.iter().take(3) {
                    let _ = writeln!(out, "  {:<30} {:>7} {:>8.1}%", sub.name, sub.count, sub.percent);
                }
            }
        }
        out
    }
}
