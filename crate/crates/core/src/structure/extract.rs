//! Entity and relation extraction for a window's transcript.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::backend::{BackendError, JsonClient, RemoteEndpoint};
use crate::lexicon::Stopwords;
use crate::text::{char_len, tokenize};

pub const MAX_ENTITIES: usize = 8;
const MAX_PREDICATE_CHARS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entity {
    pub label: String,
    pub salience: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    #[serde(rename = "s")]
    pub subject: String,
    #[serde(rename = "p")]
    pub predicate: String,
    #[serde(rename = "o")]
    pub object: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Extraction {
    pub entities: Vec<Entity>,
    pub relations: Vec<Relation>,
}

pub trait ExtractorBackend: Send + Sync {
    fn descriptor(&self) -> String;
    /// `text` holds one transcript line per `\n`-separated line.
    fn extract(&self, text: &str) -> Result<Extraction, BackendError>;
}

pub struct BaselineExtractor {
    stopwords: Arc<Stopwords>,
}

impl BaselineExtractor {
    pub fn new(stopwords: Arc<Stopwords>) -> Self {
        BaselineExtractor { stopwords }
    }
}

impl ExtractorBackend for BaselineExtractor {
    fn descriptor(&self) -> String {
        "baseline/1".into()
    }

    fn extract(&self, text: &str) -> Result<Extraction, BackendError> {
        Ok(baseline_extract(text, &self.stopwords))
    }
}

/// HTTP extractor: POSTs `{text}`, expects
/// `{entities: [{label, salience}], relations: [{s, p, o}]}`.
pub struct RemoteExtractor {
    client: JsonClient,
}

impl RemoteExtractor {
    pub fn new(endpoint: RemoteEndpoint) -> Result<Self, BackendError> {
        Ok(RemoteExtractor { client: JsonClient::new(&endpoint)? })
    }
}

#[derive(Serialize)]
struct ExtractRequest<'a> {
    text: &'a str,
}

impl ExtractorBackend for RemoteExtractor {
    fn descriptor(&self) -> String {
        format!("remote/1 ({})", self.client.url())
    }

    fn extract(&self, text: &str) -> Result<Extraction, BackendError> {
        self.client.post(&ExtractRequest { text })
    }
}

/// Entities are non-stopword tokens of two or more characters seen at least
/// twice in the text (salience = count), at most eight, by descending count
/// then first position. Relations link entities mentioned on the same line;
/// the predicate is the text between the two mentions, cut to 12
/// characters, or `related` when nothing lies between them.
pub fn baseline_extract(text: &str, stopwords: &Stopwords) -> Extraction {
    let lines: Vec<&str> = text.split('\n').collect();
    let mut counts: HashMap<String, (usize, usize)> = HashMap::new();
    let mut position = 0usize;
    for line in &lines {
        for tok in tokenize(line) {
            if char_len(&tok.text) >= 2 && !stopwords.contains(&tok.text) {
                let e = counts.entry(tok.text).or_insert((0, position));
                e.0 += 1;
            }
            position += 1;
        }
    }
    let mut ranked: Vec<(String, usize, usize)> =
        counts.into_iter().filter(|(_, (c, _))| *c >= 2).map(|(t, (c, p))| (t, c, p)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
    ranked.truncate(MAX_ENTITIES);
    let entities: Vec<Entity> = ranked.iter().map(|(t, c, _)| Entity { label: t.clone(), salience: *c as f64 }).collect();
    let names: HashSet<&str> = ranked.iter().map(|(t, _, _)| t.as_str()).collect();

    let mut relations = Vec::new();
    let mut seen: HashSet<(String, String)> = HashSet::new();
    for line in &lines {
        // first mention of each entity in this line, in order
        let mut mentions: Vec<(&str, usize, usize)> = Vec::new();
        let toks = tokenize(line);
        for tok in &toks {
            if names.contains(tok.text.as_str()) && !mentions.iter().any(|m| m.0 == tok.text) {
                mentions.push((tok.text.as_str(), tok.start, tok.end));
            }
        }
        for i in 0..mentions.len() {
            for j in i + 1..mentions.len() {
                let (s, _, s_end) = mentions[i];
                let (o, o_start, _) = mentions[j];
                if o_start < s_end {
                    continue;
                }
                let key = if s < o { (s.to_string(), o.to_string()) } else { (o.to_string(), s.to_string()) };
                if !seen.insert(key) {
                    continue;
                }
                let between = line[s_end..o_start].trim_matches(|c: char| c.is_whitespace() || c.is_ascii_punctuation());
                let predicate = if between.is_empty() {
                    "related".to_string()
                } else {
                    between.chars().take(MAX_PREDICATE_CHARS).collect::<String>().trim_end().to_string()
                };
                relations.push(Relation { subject: s.to_string(), predicate, object: o.to_string() });
            }
        }
    }
    Extraction { entities, relations }
}
