use crate::semantics::embed;
use crate::text::truncate_with_ellipsis;

pub const MAX_SUMMARY_CHARS: usize = 120;

pub trait Summarizer: Send + Sync {
    fn descriptor(&self) -> String;
    fn summarize(&self, lines: &[&str]) -> String;
}

/// Picks the most central line of the section.
pub struct ExtractiveSummarizer;

impl Summarizer for ExtractiveSummarizer {
    fn descriptor(&self) -> String {
        "extractive/1".into()
    }

    fn summarize(&self, lines: &[&str]) -> String {
        summarize_section(lines)
    }
}

/// The line with the highest mean cosine similarity to the other lines,
/// truncated to 120 characters. Ties go to the earliest line.
pub fn summarize_section(lines: &[&str]) -> String {
    let Some(first) = lines.first() else {
        return String::new();
    };
    if lines.len() == 1 {
        return truncate_with_ellipsis(first.trim(), MAX_SUMMARY_CHARS);
    }
    let embs: Vec<_> = lines.iter().map(|l| embed(l)).collect();
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for (i, e) in embs.iter().enumerate() {
        let score = embs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, o)| e.cosine(o)).sum::<f64>();
        if score > best_score + 1e-12 {
            best = i;
            best_score = score;
        }
    }
    truncate_with_ellipsis(lines[best].trim(), MAX_SUMMARY_CHARS)
}
