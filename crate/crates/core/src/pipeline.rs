//! End-to-end processing of one video into a [`KnowledgeBundle`].

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use crate::backend::{BackendError, BackendRegistry};
use crate::bundle::{BundleComment, BundleError, KnowledgeBundle, Provenance, Wordstream, FORMAT_VERSION};
use crate::classify::{classify_corpus, CategorySet, ClassifierBackend, ClassifyError, ClassifyOptions};
use crate::config::{ConfigError, PipelineConfig};
use crate::ingest::Corpus;
use crate::presentation::{bucketize, layout_wordstream, simplify_stream, PresentationError};
use crate::semantics::{cluster_danmaku, embed, extract_keyword, map_to_window, ClusterItem, CorpusStats, Embedding, MappingError, WindowProfile};
use crate::structure::extract::{baseline_extract, ExtractorBackend};
use crate::structure::{build_graph, make_windows, segment_video};

pub const PIPELINE_VERSION: &str = concat!("ck-core ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, thiserror::Error)]
pub enum StageError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, thiserror::Error)]
#[error("pipeline stage `{stage}` failed: {source}")]
pub struct PipelineError {
    pub stage: &'static str,
    #[source]
    pub source: StageError,
}

impl PipelineError {
    /// Whether the failure came from a backend (as opposed to bad data or configuration).
    pub fn is_backend(&self) -> bool {
        matches!(
            self.source,
            StageError::Backend(_) | StageError::Classify(ClassifyError::BackendUnavailable(_)) | StageError::Classify(ClassifyError::BatchLength { .. })
        )
    }
}

fn stage<E: Into<StageError>>(stage: &'static str) -> impl FnOnce(E) -> PipelineError {
    move |e| PipelineError { stage, source: e.into() }
}

/// Constants fixed in code that are design choices; recorded in provenance.
fn invented_constants() -> BTreeMap<String, f64> {
    [
        ("scroll.base_secs", 6.0),
        ("scroll.length_pivot_chars", 12.0),
        ("scroll.length_gain", 0.5),
        ("scroll.size_gain", 0.15),
        ("scroll.font_gain", 0.2),
        ("scroll.min_secs", 4.0),
        ("scroll.max_secs", 12.0),
        ("scroll.max_font_scale", 1.6),
        ("ingest.forward_slack_secs", crate::ingest::FORWARD_SLACK_SECS),
        ("structure.max_entities", crate::structure::extract::MAX_ENTITIES as f64),
        ("structure.summary_max_chars", crate::structure::summary::MAX_SUMMARY_CHARS as f64),
        ("segment.block_lines", 3.0),
        ("embed.dimensions", crate::semantics::EMBEDDING_DIM as f64),
        ("layout.latin_em", 0.6),
        ("layout.cjk_em", 1.0),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

/// Run every stage on `corpus` using backends from `registry`.
pub fn run_pipeline_with(corpus: &Corpus, config: &PipelineConfig, registry: &BackendRegistry) -> Result<KnowledgeBundle, PipelineError> {
    config.validate(registry).map_err(stage("config"))?;
    let (lexicon, stopwords) = config.load_data().map_err(stage("config"))?;
    let classifier = registry
        .classifiers
        .build(&config.classifier.backend, &config.settings(&config.classifier.endpoint, &lexicon, &stopwords))
        .map_err(stage("classify"))?;
    let extractor = registry
        .extractors
        .build(&config.extractor.backend, &config.settings(&config.extractor.endpoint, &lexicon, &stopwords))
        .map_err(stage("graphs"))?;
    let summarizer = registry
        .summarizers
        .build(&config.summarizer.backend, &config.settings(&config.summarizer.endpoint, &lexicon, &stopwords))
        .map_err(stage("sections"))?;
    let explainer = registry
        .explainers
        .build(&config.explainer.backend, &config.settings(&config.explainer.endpoint, &lexicon, &stopwords))
        .map_err(stage("config"))?;
    let fallback: Option<Arc<dyn ClassifierBackend>> = if config.classifier.backend != "lexicon" && config.classifier.fallback {
        Some(registry.classifiers.build("lexicon", &config.settings(&None, &lexicon, &stopwords)).map_err(stage("classify"))?)
    } else {
        None
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| PipelineError { stage: "config", source: StageError::Other(e.to_string()) })?;

    let meta = &corpus.meta;
    let lines = &corpus.lines;
    let mut warnings = corpus.warnings.clone();

    // classify
    let opts = ClassifyOptions {
        parallelism: config.parallelism,
        batch_size: config.classifier.batch_size,
        context_radius: config.classifier.context_radius,
    };
    let classified = classify_corpus(&corpus.comments, lines, classifier.as_ref(), fallback.as_deref(), opts).map_err(stage("classify"))?;
    if classified.fallback_count > 0 {
        warnings.push(format!("{} comment(s) labeled by the lexicon fallback", classified.fallback_count));
    }

    // windows and sections
    let windows = make_windows(meta.duration, config.windows.width, lines);
    let mut sections = segment_video(lines, meta.duration, config.segment);
    for s in &mut sections {
        let texts: Vec<&str> = lines[s.line_start..s.line_end].iter().map(|l| l.text.as_str()).collect();
        s.summary = summarizer.summarize(&texts);
    }

    // map knowledge comments to windows
    let knowledge: Vec<usize> = (0..corpus.comments.len()).filter(|&i| classified.labels[i].is_knowledge()).collect();
    let (profiles, embeddings): (Vec<WindowProfile>, Vec<Embedding>) = pool.install(|| {
        let profiles = windows
            .par_iter()
            .map(|w| WindowProfile { index: w.index, start: w.start, end: w.end, embedding: embed(&w.text), last: w.index + 1 == windows.len() })
            .collect();
        let embeddings = knowledge.par_iter().map(|&i| embed(&corpus.comments[i].text)).collect();
        (profiles, embeddings)
    });
    let assignments = pool
        .install(|| {
            knowledge
                .par_iter()
                .zip(&embeddings)
                .map(|(&i, e)| {
                    let c = &corpus.comments[i];
                    map_to_window(&c.id, c.t, e, &profiles, &config.mapping)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .map_err(stage("map"))?;

    // cluster
    let items: Vec<ClusterItem<'_>> = knowledge
        .iter()
        .zip(&embeddings)
        .zip(&assignments)
        .map(|((&i, e), a)| ClusterItem {
            comment_id: &corpus.comments[i].id,
            t: corpus.comments[i].t,
            embedding: e,
            category: classified.labels[i].category().expect("knowledge label has a category"),
            window_id: a.window_id,
        })
        .collect();
    let clusters = pool.install(|| cluster_danmaku(&items, config.cluster.eps, config.cluster.min_pts));
    let mut cluster_of: HashMap<&str, usize> = HashMap::new();
    for c in &clusters {
        for m in &c.member_ids {
            cluster_of.insert(m.as_str(), c.cluster_id);
        }
    }

    // keywords
    let stats = CorpusStats::from_texts(knowledge.iter().map(|&i| corpus.comments[i].text.as_str()));
    let keywords: HashMap<&str, String> = knowledge
        .iter()
        .filter_map(|&i| {
            let c = &corpus.comments[i];
            extract_keyword(&c.text, &stats, &stopwords).map(|k| (c.id.as_str(), k))
        })
        .collect();

    // graphs
    let text_of: HashMap<&str, &str> = corpus.comments.iter().map(|c| (c.id.as_str(), c.text.as_str())).collect();
    let extractor_ref: &dyn ExtractorBackend = extractor.as_ref();
    let graph_results: Vec<(crate::structure::KnowledgeGraph, Option<String>)> = pool.install(|| {
        windows
            .par_iter()
            .map(|w| {
                let (extraction, warning) = match extractor_ref.extract(&w.text) {
                    Ok(x) => (x, None),
                    Err(e) => (baseline_extract(&w.text, &stopwords), Some(format!("window {}: extractor failed ({e}); baseline used", w.index))),
                };
                let in_window: Vec<(&crate::semantics::DanmakuCluster, &str)> =
                    clusters.iter().filter(|c| c.window_id == w.index).map(|c| (c, text_of[c.representative_id.as_str()])).collect();
                (build_graph(w, &in_window, extraction, config.graph.tau_attach), warning)
            })
            .collect()
    });
    let mut graphs = Vec::with_capacity(graph_results.len());
    for (g, w) in graph_results {
        warnings.extend(w);
        graphs.push(g);
    }

    // wordstream
    let kw_refs: HashMap<&str, &str> = keywords.iter().map(|(k, v)| (*k, v.as_str())).collect();
    let buckets = bucketize(&clusters, &windows, &kw_refs, config.wordstream.bucket_width, 0.0, meta.duration).map_err(stage("wordstream"))?;
    let layout = layout_wordstream(&buckets, CategorySet::all(), &config.wordstream.layout_params()).map_err(stage("wordstream"))?;
    let simplified = simplify_stream(&layout, config.wordstream.simplified_height).map_err(stage("wordstream"))?;

    let comments: Vec<BundleComment> = corpus
        .comments
        .iter()
        .zip(&classified.labels)
        .map(|(c, &label)| BundleComment {
            comment: c.clone(),
            label,
            keyword: keywords.get(c.id.as_str()).cloned(),
            cluster_id: cluster_of.get(c.id.as_str()).copied(),
        })
        .collect();

    let backends: BTreeMap<String, String> = [
        ("classifier", classifier.descriptor()),
        ("classifier_fallback", fallback.as_ref().map_or_else(|| "none".to_string(), |f| f.descriptor())),
        ("extractor", extractor.descriptor()),
        ("summarizer", summarizer.descriptor()),
        ("explainer", explainer.descriptor()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    let tunables = serde_json::to_value(config).map_err(|e| PipelineError { stage: "bundle", source: StageError::Other(e.to_string()) })?;

    let bundle = KnowledgeBundle {
        format_version: FORMAT_VERSION,
        meta: meta.clone(),
        transcript: lines.clone(),
        sections,
        windows,
        comments,
        clusters,
        assignments,
        graphs,
        wordstream: Wordstream { buckets, layout, simplified },
        provenance: Provenance {
            pipeline_version: PIPELINE_VERSION.to_string(),
            input_hash: corpus.input_hash.clone(),
            backends,
            tunables,
            invented_constants: invented_constants(),
            fallback_count: classified.fallback_count,
            warnings,
        },
    };
    let bundle = bundle.canonicalize().map_err(stage("bundle"))?;
    bundle.validate().map_err(stage("bundle"))?;
    Ok(bundle)
}

/// [`run_pipeline_with`] using the default backend registry.
pub fn run_pipeline(corpus: &Corpus, config: &PipelineConfig) -> Result<KnowledgeBundle, PipelineError> {
    run_pipeline_with(corpus, config, &BackendRegistry::with_defaults())
}
