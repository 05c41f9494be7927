use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::wilcoxon::{wilcoxon_signed_rank, TestMethod, WilcoxonError, WilcoxonResult};
use crate::text::normalize;

/// Below this many corpora the study runs but warns.
pub const RECOMMENDED_CORPORA: usize = 5;

/// Number of `entities` whose surface form or an alias occurs as a
/// substring of any text, after case folding and whitespace collapsing.
pub fn entity_coverage(entities: &[String], texts: &[String], aliases: &BTreeMap<String, Vec<String>>) -> usize {
    let texts: Vec<String> = texts.iter().map(|t| normalize(t)).collect();
    entities
        .iter()
        .filter(|e| {
            let forms = std::iter::once(e.as_str()).chain(aliases.get(*e).into_iter().flatten().map(String::as_str));
            forms.map(normalize).filter(|f| !f.is_empty()).any(|f| texts.iter().any(|t| t.contains(&f)))
        })
        .count()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyCorpus {
    pub video_id: String,
    pub entities: Vec<String>,
    pub danmaku: Vec<String>,
    pub comments: Vec<String>,
    #[serde(default)]
    pub aliases: BTreeMap<String, Vec<String>>,
}

/// On-disk study description: `{"corpora": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyFile {
    pub corpora: Vec<StudyCorpus>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveragePair {
    pub video_id: String,
    pub entity_count: usize,
    pub covered_by_danmaku: usize,
    pub covered_by_comments: usize,
    pub danmaku_rate: f64,
    pub comment_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageStudy {
    pub pairs: Vec<CoveragePair>,
    /// Test on (danmaku rate, comment rate); `None` when undefined.
    pub test: Option<WilcoxonResult>,
    pub direction: String,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StudyError {
    #[error("a coverage study needs at least 2 corpora, got {0}")]
    TooFew(usize),
    #[error("corpus `{0}` lists no entities")]
    NoEntities(String),
}

pub fn coverage_study(corpora: &[StudyCorpus]) -> Result<CoverageStudy, StudyError> {
    if corpora.len() < 2 {
        return Err(StudyError::TooFew(corpora.len()));
    }
    let mut notes = Vec::new();
    if corpora.len() < RECOMMENDED_CORPORA {
        notes.push(format!("warning: only {} corpora; at least {RECOMMENDED_CORPORA} are recommended", corpora.len()));
    }
    let mut pairs = Vec::with_capacity(corpora.len());
    for c in corpora {
        if c.entities.is_empty() {
            return Err(StudyError::NoEntities(c.video_id.clone()));
        }
        let n = c.entities.len();
        let d = entity_coverage(&c.entities, &c.danmaku, &c.aliases);
        let m = entity_coverage(&c.entities, &c.comments, &c.aliases);
        pairs.push(CoveragePair {
            video_id: c.video_id.clone(),
            entity_count: n,
            covered_by_danmaku: d,
            covered_by_comments: m,
            danmaku_rate: d as f64 / n as f64,
            comment_rate: m as f64 / n as f64,
        });
    }
    let rates: Vec<(f64, f64)> = pairs.iter().map(|p| (p.danmaku_rate, p.comment_rate)).collect();
    let (test, direction) = match wilcoxon_signed_rank(&rates) {
        Ok(r) => {
            if r.zeros_dropped > 0 {
                notes.push(format!("{} pair(s) with equal coverage excluded from the test", r.zeros_dropped));
            }
            let dir = if r.w_plus > r.w_minus {
                "danmaku higher"
            } else if r.w_plus < r.w_minus {
                "comments higher"
            } else {
                "no difference"
            };
            (Some(r), dir.to_string())
        }
        Err(e @ WilcoxonError::Degenerate(_)) => {
            notes.push(format!("degenerate input: {e}"));
            (None, "no difference".to_string())
        }
        Err(e) => {
            notes.push(format!("test not computed: {e}"));
            (None, "undetermined".to_string())
        }
    };
    Ok(CoverageStudy { pairs, test, direction, notes })
}

impl CoverageStudy {
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let id_w = self.pairs.iter().map(|p| p.video_id.chars().count()).max().unwrap_or(0).max(8);
        let _ = writeln!(out, "{:<id_w$}  {:>8}  {:>8}  {:>8}  {:>8}  {:>8}", "video", "entities", "danmaku", "rate", "comments", "rate");
        for p in &self.pairs {
            let _ = writeln!(
                out,
                "{:<id_w$}  {:>8}  {:>8}  {:>8.3}  {:>8}  {:>8.3}",
                p.video_id, p.entity_count, p.covered_by_danmaku, p.danmaku_rate, p.covered_by_comments, p.comment_rate
            );
        }
        out.push('\n');
        match &self.test {
            Some(t) => {
                let method = match t.method {
                    TestMethod::Exact => "exact enumeration",
                    TestMethod::NormalApprox => "normal approximation",
                };
                let _ = writeln!(out, "Wilcoxon signed-rank (danmaku - comments), n = {} ({} zero differences dropped)", t.n_effective, t.zeros_dropped);
                let _ = writeln!(out, "  W = {}  W+ = {}  W- = {}", t.w, t.w_plus, t.w_minus);
                let _ = writeln!(out, "  p (two-sided, {method}) = {:.3} [{}]", t.p_two_sided, t.p_two_sided);
                if let Some(pe) = t.p_exact {
                    let _ = writeln!(out, "  p exact = {pe:.6}");
                }
                let _ = writeln!(out, "  Z (normal approx., tie and continuity corrected) = {:.3}  p = {:.4}", t.z, t.p_normal);
                let _ = writeln!(out, "  effect size = {:.3}", t.effect_size);
            }
            None => out.push_str("Wilcoxon signed-rank: not computed\n"),
        }
        let _ = writeln!(out, "  direction: {}", self.direction);
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}
