//! Sectioned cue lists (`[section]` headers, one cue per line).

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use crate::text::{self, is_cjk};

pub const BUILTIN_LEXICON: &str = include_str!("../data/lexicon.txt");
pub const BUILTIN_STOPWORDS: &str = include_str!("../data/stopwords.txt");

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("line {line}: cue outside of any [section]")]
    NoSection { line: usize },
    #[error("line {line}: malformed section header")]
    BadHeader { line: usize },
    #[error("{path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Cue {
    /// Consecutive lowercase words.
    Words(Vec<String>),
    /// Normalized substring (any cue containing CJK).
    Substring(String),
}

/// Text pre-digested for cue matching.
#[derive(Debug, Clone)]
pub struct Analyzed {
    pub norm: String,
    pub words: Vec<String>,
}

impl Analyzed {
    pub fn new(s: &str) -> Self {
        Analyzed { norm: text::normalize(s), words: text::words(s) }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    sections: BTreeMap<String, Vec<Cue>>,
}

impl Lexicon {
    pub fn parse(src: &str) -> Result<Self, LexiconError> {
        let mut sections: BTreeMap<String, Vec<Cue>> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (i, raw) in src.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or(LexiconError::BadHeader { line: i + 1 })?.trim();
                if name.is_empty() {
                    return Err(LexiconError::BadHeader { line: i + 1 });
                }
                sections.entry(name.to_string()).or_default();
                current = Some(name.to_string());
                continue;
            }
            let section = current.as_ref().ok_or(LexiconError::NoSection { line: i + 1 })?;
            let cue = if line.chars().any(is_cjk) {
                Cue::Substring(text::normalize(line))
            } else {
                let words = text::words(line);
                if words.is_empty() {
                    continue;
                }
                Cue::Words(words)
            };
            sections.get_mut(section).expect("section exists").push(cue);
        }
        Ok(Lexicon { sections })
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        let src = std::fs::read_to_string(path).map_err(|source| LexiconError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&src)
    }

    pub fn builtin() -> Self {
        Self::parse(BUILTIN_LEXICON).expect("builtin lexicon parses")
    }

    pub fn has_section(&self, name: &str) -> bool {
        self.sections.contains_key(name)
    }

    /// Total number of cue occurrences from `section` in `text`.
    pub fn count(&self, section: &str, text: &Analyzed) -> usize {
        self.sections.get(section).map_or(0, |cues| cues.iter().map(|c| occurrences(c, text)).sum())
    }

    pub fn any(&self, section: &str, text: &Analyzed) -> bool {
        self.sections.get(section).is_some_and(|cues| cues.iter().any(|c| occurrences(c, text) > 0))
    }

    /// True when some cue of `section` occurs in `text` but not in `other`.
    pub fn any_absent_from(&self, section: &str, text: &Analyzed, other: &Analyzed) -> bool {
        self.sections
            .get(section)
            .is_some_and(|cues| cues.iter().any(|c| occurrences(c, text) > 0 && occurrences(c, other) == 0))
    }

    /// Cues of `section` occurring in `text`, in lexicon order, rendered back
    /// to their normalized surface form.
    pub fn matches(&self, section: &str, text: &Analyzed) -> Vec<String> {
        self.sections
            .get(section)
            .map(|cues| {
                cues.iter()
                    .filter(|c| occurrences(c, text) > 0)
                    .map(|c| match c {
                        Cue::Words(w) => w.join(" "),
                        Cue::Substring(s) => s.clone(),
                    })
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Single-word Latin cues and substring cues of a section, as a set.
    pub fn word_set(&self, section: &str) -> HashSet<String> {
        self.sections
            .get(section)
            .map(|cues| {
                cues.iter()
                    .filter_map(|c| match c {
                        Cue::Words(w) if w.len() == 1 => Some(w[0].clone()),
                        Cue::Substring(s) => Some(s.clone()),
                        _ => None,
                    })
                    .collect()
            })
            .unwrap_or_default()
    }
}

fn occurrences(cue: &Cue, text: &Analyzed) -> usize {
    match cue {
        Cue::Substring(s) => text.norm.matches(s.as_str()).count(),
        Cue::Words(w) => {
            if w.len() > text.words.len() {
                return 0;
            }
            text.words.windows(w.len()).filter(|win| win == &w.as_slice()).count()
        }
    }
}

/// Stopword set used by keyword and entity extraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    pub fn builtin() -> Self {
        Self::from_lexicon(&Lexicon::parse(BUILTIN_STOPWORDS).expect("builtin stopwords parse"))
    }

    pub fn from_lexicon(lex: &Lexicon) -> Self {
        Stopwords(lex.word_set("stopwords"))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.contains(token)
    }
}

impl Default for Stopwords {
    fn default() -> Self {
        Self::builtin()
    }
}
