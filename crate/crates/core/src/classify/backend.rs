use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{lexicon_classify, KnowledgeLabel};
use crate::backend::{BackendError, JsonClient, RemoteEndpoint};
use crate::ingest::{DanmakuComment, TranscriptLine};
use crate::lexicon::Lexicon;

/// One comment as handed to a classifier backend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyItem {
    pub id: String,
    pub text: String,
    /// Transcript text around the comment's timestamp.
    pub context: String,
}

pub trait ClassifierBackend: Send + Sync {
    /// `name/version` string recorded in bundle provenance.
    fn descriptor(&self) -> String;

    /// Labels aligned with `items`. `None` marks an item the backend could
    /// not label; the caller substitutes the fallback for it. An `Err` fails
    /// the whole batch.
    fn classify_batch(&self, items: &[ClassifyItem]) -> Result<Vec<Option<KnowledgeLabel>>, BackendError>;
}

pub struct LexiconClassifier {
    lexicon: Arc<Lexicon>,
}

impl LexiconClassifier {
    pub fn new(lexicon: Arc<Lexicon>) -> Self {
        LexiconClassifier { lexicon }
    }

    pub fn classify(&self, item: &ClassifyItem) -> KnowledgeLabel {
        lexicon_classify(&self.lexicon, &item.text, &item.context)
    }
}

impl ClassifierBackend for LexiconClassifier {
    fn descriptor(&self) -> String {
        "lexicon/1".to_string()
    }

    fn classify_batch(&self, items: &[ClassifyItem]) -> Result<Vec<Option<KnowledgeLabel>>, BackendError> {
        Ok(items.iter().map(|i| Some(self.classify(i))).collect())
    }
}

/// HTTP classifier: POSTs `[{id, text, context}]`, expects `[{id, label}]`
/// where `label` is a display-category slug or `none`.
pub struct RemoteClassifier {
    client: JsonClient,
}

#[derive(Deserialize)]
struct RemoteLabel {
    id: String,
    label: serde_json::Value,
}

impl RemoteClassifier {
    pub fn new(endpoint: RemoteEndpoint) -> Result<Self, BackendError> {
        Ok(RemoteClassifier { client: JsonClient::new(&endpoint)? })
    }
}

impl ClassifierBackend for RemoteClassifier {
    fn descriptor(&self) -> String {
        format!("remote/1 ({})", self.client.url())
    }

    fn classify_batch(&self, items: &[ClassifyItem]) -> Result<Vec<Option<KnowledgeLabel>>, BackendError> {
        let resp: Vec<RemoteLabel> = self.client.post(items)?;
        let by_id: HashMap<String, serde_json::Value> = resp.into_iter().map(|r| (r.id, r.label)).collect();
        Ok(items
            .iter()
            .map(|i| by_id.get(&i.id).and_then(|v| v.as_str()).and_then(|s| KnowledgeLabel::from_slug(s).ok()))
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub parallelism: usize,
    pub batch_size: usize,
    /// Half-width of the transcript context window, seconds.
    pub context_radius: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { parallelism: 1, batch_size: 32, context_radius: 10.0 }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ClassifyError {
    #[error("parallelism and batch size must be >= 1")]
    BadOptions,
    #[error("classifier backend failed and no fallback is permitted: {0}")]
    BackendUnavailable(#[source] BackendError),
    #[error("classifier returned {got} labels for a batch of {expected}")]
    BatchLength { expected: usize, got: usize },
    #[error("cannot build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedCorpus {
    /// Aligned with the input comments.
    pub labels: Vec<KnowledgeLabel>,
    /// Comments labeled by the fallback backend.
    pub fallback_count: usize,
}

/// Transcript text of lines overlapping `[t - radius, t + radius]`.
pub fn context_for(t: f64, lines: &[TranscriptLine], radius: f64) -> String {
    let (lo, hi) = (t - radius, t + radius);
    lines
        .iter()
        .filter(|l| l.end >= lo && l.start <= hi)
        .map(|l| l.text.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Classify every comment, preserving input order. Batches go to `backend`
/// on a pool of `parallelism` workers; items the backend fails on are
/// relabeled by `fallback` and counted. Without a fallback any backend
/// failure aborts.
pub fn classify_corpus(
    comments: &[DanmakuComment],
    lines: &[TranscriptLine],
    backend: &dyn ClassifierBackend,
    fallback: Option<&dyn ClassifierBackend>,
    opts: ClassifyOptions,
) -> Result<ClassifiedCorpus, ClassifyError> {
    if opts.parallelism == 0 || opts.batch_size == 0 {
        return Err(ClassifyError::BadOptions);
    }
    let items: Vec<ClassifyItem> = comments
        .iter()
        .map(|c| ClassifyItem { id: c.id.clone(), text: c.text.clone(), context: context_for(c.t, lines, opts.context_radius) })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.parallelism)
        .build()
        .map_err(|e| ClassifyError::Pool(e.to_string()))?;

    let run_batch = |batch: &[ClassifyItem]| -> Result<(Vec<KnowledgeLabel>, usize), ClassifyError> {
        let primary = match backend.classify_batch(batch) {
            Ok(labels) if labels.len() == batch.len() => labels,
            Ok(labels) if fallback.is_none() => {
                return Err(ClassifyError::BatchLength { expected: batch.len(), got: labels.len() })
            }
            Err(e) if fallback.is_none() => return Err(ClassifyError::BackendUnavailable(e)),
            _ => vec![None; batch.len()],
        };
        let mut out = Vec::with_capacity(batch.len());
        let mut fell_back = 0;
        for (item, label) in batch.iter().zip(primary) {
            match (label, fallback) {
                (Some(l), _) => out.push(l),
                (None, Some(fb)) => {
                    let l = fb
                        .classify_batch(std::slice::from_ref(item))
                        .map_err(ClassifyError::BackendUnavailable)?
                        .into_iter()
                        .next()
                        .flatten()
                        .unwrap_or(KnowledgeLabel::NOT_KNOWLEDGE);
                    out.push(l);
                    fell_back += 1;
                }
                (None, None) => {
                    return Err(ClassifyError::BackendUnavailable(BackendError::Malformed {
                        url: backend.descriptor(),
                        message: format!("no label for comment {}", item.id),
                    }))
                }
            }
        }
        Ok((out, fell_back))
    };

    let results: Vec<Result<(Vec<KnowledgeLabel>, usize), ClassifyError>> =
        pool.install(|| items.par_chunks(opts.batch_size).map(run_batch).collect());

    let mut labels = Vec::with_capacity(items.len());
    let mut fallback_count = 0;
    for r in results {
        let (l, n) = r?;
        labels.extend(l);
        fallback_count += n;
    }
    Ok(ClassifiedCorpus { labels, fallback_count })
}
