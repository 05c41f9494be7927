//! Representative-word selection by TF-IDF within one comment.

use std::collections::{HashMap, HashSet};

use crate::lexicon::Stopwords;
use crate::text::{char_len, tokenize};

/// Document frequencies over the video's knowledge comments.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorpusStats {
    pub documents: usize,
    pub df: HashMap<String, usize>,
}

impl CorpusStats {
    pub fn from_texts<'a>(texts: impl IntoIterator<Item = &'a str>) -> Self {
        let mut stats = CorpusStats::default();
        for text in texts {
            stats.documents += 1;
            let unique: HashSet<String> = tokenize(text).into_iter().map(|t| t.text).collect();
            for tok in unique {
                *stats.df.entry(tok).or_insert(0) += 1;
            }
        }
        stats
    }

    /// Smoothed IDF: `ln((N + 1) / (df + 1)) + 1`.
    pub fn idf(&self, token: &str) -> f64 {
        let df = self.df.get(token).copied().unwrap_or(0);
        ((self.documents as f64 + 1.0) / (df as f64 + 1.0)).ln() + 1.0
    }
}

/// Token with maximal TF-IDF in `text`, stopwords excluded; ties go to the
/// earliest token. A comment made only of stopwords yields its longest
/// token. `None` only when the text has no tokens at all.
pub fn extract_keyword(text: &str, stats: &CorpusStats, stopwords: &Stopwords) -> Option<String> {
    let tokens = tokenize(text);
    if tokens.is_empty() {
        return None;
    }
    let mut tf: HashMap<&str, usize> = HashMap::new();
    for t in &tokens {
        *tf.entry(t.text.as_str()).or_insert(0) += 1;
    }
    let mut best: Option<(&str, f64)> = None;
    for t in tokens.iter().filter(|t| !stopwords.contains(&t.text)) {
        let score = tf[t.text.as_str()] as f64 * stats.idf(&t.text);
        if best.is_none_or(|(_, s)| score > s) {
            best = Some((&t.text, score));
        }
    }
    if let Some((tok, _)) = best {
        return Some(tok.to_string());
    }
    let mut longest = &tokens[0].text;
    for t in &tokens[1..] {
        if char_len(&t.text) > char_len(longest) {
            longest = &t.text;
        }
    }
    Some(longest.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats(texts: &[&str]) -> CorpusStats {
        CorpusStats::from_texts(texts.iter().copied())
    }

    #[test]
    fn unique_token_wins() {
        let s = stats(&["nitrogen fixation matters", "nitrogen fixation again", "nitrogen nodules"]);
        assert_eq!(extract_keyword("nitrogen nodules", &s, &Stopwords::builtin()).unwrap(), "nodules");
    }

    #[test]
    fn single_token_comment() {
        let s = stats(&["rhizobia"]);
        assert_eq!(extract_keyword("Rhizobia", &s, &Stopwords::builtin()).unwrap(), "rhizobia");
    }

    #[test]
    fn tie_goes_to_earliest() {
        // all tokens appear once and in every document: equal TF-IDF
        let s = stats(&["alpha beta gamma delta epsilon"]);
        assert_eq!(extract_keyword("the alpha of beta gamma delta", &s, &Stopwords::builtin()).unwrap(), "alpha");
    }

    #[test]
    fn all_stopwords_gives_longest() {
        let s = stats(&["this is it"]);
        assert_eq!(extract_keyword("this is it", &s, &Stopwords::builtin()).unwrap(), "this");
        assert_eq!(extract_keyword("...", &s, &Stopwords::builtin()), None);
    }

    #[test]
    fn idf_formula() {
        let s = stats(&["a b", "a"]);
        assert!((s.idf("a") - ((3.0f64 / 3.0).ln() + 1.0)).abs() < 1e-15);
        assert!((s.idf("b") - ((3.0f64 / 2.0).ln() + 1.0)).abs() < 1e-15);
        assert!((s.idf("zz") - (3.0f64.ln() + 1.0)).abs() < 1e-15);
    }
}
