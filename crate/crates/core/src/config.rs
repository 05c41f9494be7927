//! Pipeline configuration (TOML). Every section is optional; unknown keys
//! are rejected.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::backend::{BackendError, BackendRegistry, BackendSettings, RemoteEndpoint};
use crate::lexicon::{Lexicon, LexiconError, Stopwords};
use crate::presentation::{LayoutParams, DEFAULT_BUCKET_SECS};
use crate::semantics::MappingParams;
use crate::structure::windows::DEFAULT_WINDOW_SECS;
use crate::structure::SegmentParams;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Parse(String),
    #[error("invalid value for `{key}`: {message}")]
    Invalid { key: &'static str, message: String },
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierConfig {
    pub backend: String,
    /// Relabel comments a non-lexicon backend fails on with the lexicon baseline.
    pub fallback: bool,
    pub batch_size: usize,
    pub context_radius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub endpoint: Option<RemoteEndpoint>,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig { backend: "lexicon".into(), fallback: true, batch_size: 32, context_radius: 10.0, endpoint: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendChoice {
    pub backend: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoint: Option<RemoteEndpoint>,
}

impl BackendChoice {
    fn named(name: &str) -> Self {
        BackendChoice { backend: name.into(), endpoint: None }
    }
}

fn default_extractor() -> BackendChoice {
    BackendChoice::named("baseline")
}
fn default_summarizer() -> BackendChoice {
    BackendChoice::named("extractive")
}
fn default_explainer() -> BackendChoice {
    BackendChoice::named("offline")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowConfig {
    pub width: f64,
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig { width: DEFAULT_WINDOW_SECS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterConfig {
    pub eps: f64,
    pub min_pts: usize,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig { eps: 0.35, min_pts: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GraphConfig {
    pub tau_attach: f64,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig { tau_attach: 0.15 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RelatedConfig {
    pub radius: f64,
    pub tau: f64,
}

impl Default for RelatedConfig {
    fn default() -> Self {
        RelatedConfig { radius: 15.0, tau: 0.35 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WordstreamConfig {
    pub bucket_width: f64,
    pub width: f64,
    pub height: f64,
    pub simplified_height: f64,
    pub k: usize,
    pub font_min: f64,
    pub font_max: f64,
}

impl Default for WordstreamConfig {
    fn default() -> Self {
        let l = LayoutParams::default();
        WordstreamConfig {
            bucket_width: DEFAULT_BUCKET_SECS,
            width: l.width,
            height: l.height,
            simplified_height: 80.0,
            k: l.k,
            font_min: l.font_min,
            font_max: l.font_max,
        }
    }
}

impl WordstreamConfig {
    pub fn layout_params(&self) -> LayoutParams {
        LayoutParams { width: self.width, height: self.height, k: self.k, font_min: self.font_min, font_max: self.font_max }
    }
}

/// Optional replacement cue lists; relative paths resolve against the
/// configuration file's directory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lexicon: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stopwords: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Worker threads for classification, clustering and graph building.
    pub parallelism: usize,
    pub classifier: ClassifierConfig,
    #[serde(default = "default_extractor")]
    pub extractor: BackendChoice,
    #[serde(default = "default_summarizer")]
    pub summarizer: BackendChoice,
    #[serde(default = "default_explainer")]
    pub explainer: BackendChoice,
    pub segment: SegmentParams,
    pub windows: WindowConfig,
    pub mapping: MappingParams,
    pub cluster: ClusterConfig,
    pub graph: GraphConfig,
    pub related: RelatedConfig,
    pub wordstream: WordstreamConfig,
    #[serde(skip_serializing_if = "is_default_data")]
    pub data: DataConfig,
}

fn is_default_data(d: &DataConfig) -> bool {
    *d == DataConfig::default()
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            parallelism: 4,
            classifier: ClassifierConfig::default(),
            extractor: default_extractor(),
            summarizer: default_summarizer(),
            explainer: default_explainer(),
            segment: SegmentParams::default(),
            windows: WindowConfig::default(),
            mapping: MappingParams::default(),
            cluster: ClusterConfig::default(),
            graph: GraphConfig::default(),
            related: RelatedConfig::default(),
            wordstream: WordstreamConfig::default(),
            data: DataConfig::default(),
        }
    }
}

fn check(ok: bool, key: &'static str, message: impl Into<String>) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::Invalid { key, message: message.into() })
    }
}

fn finite_pos(v: f64) -> bool {
    v.is_finite() && v > 0.0
}

fn finite_nonneg(v: f64) -> bool {
    v.is_finite() && v >= 0.0
}

impl PipelineConfig {
    /// Parse and validate TOML text against the default registry.
    pub fn from_toml(src: &str) -> Result<Self, ConfigError> {
        let cfg: PipelineConfig = toml::from_str(src).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate(&BackendRegistry::with_defaults())?;
        Ok(cfg)
    }

    /// Read, parse and validate a file; data paths become absolute.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let src = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        let mut cfg = Self::from_toml(&src)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.data.lexicon, &mut cfg.data.stopwords].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self, registry: &BackendRegistry) -> Result<(), ConfigError> {
        check(self.parallelism >= 1, "parallelism", "must be >= 1")?;
        check(self.classifier.batch_size >= 1, "classifier.batch_size", "must be >= 1")?;
        check(finite_nonneg(self.classifier.context_radius), "classifier.context_radius", "must be >= 0")?;
        check(self.segment.max_sections >= 1, "segment.max_sections", "must be >= 1")?;
        check(finite_nonneg(self.segment.min_len), "segment.min_len", "must be >= 0")?;
        check(finite_pos(self.windows.width), "windows.width", "must be > 0")?;
        let m = &self.mapping;
        check(m.lambda.is_finite() && m.lambda >= 0.0, "mapping.lambda", "must be >= 0")?;
        check(finite_nonneg(m.mu), "mapping.mu", "must be >= 0")?;
        check(finite_pos(m.max_delay), "mapping.max_delay", "must be > 0")?;
        check(finite_nonneg(m.forward_slack), "mapping.forward_slack", "must be >= 0")?;
        check(finite_pos(self.cluster.eps) && self.cluster.eps <= 2.0, "cluster.eps", format!("must be in (0, 2], got {}", self.cluster.eps))?;
        check(self.cluster.min_pts >= 1, "cluster.min_pts", "must be >= 1")?;
        check(self.graph.tau_attach.is_finite(), "graph.tau_attach", "must be finite")?;
        check(finite_nonneg(self.related.radius), "related.radius", "must be >= 0")?;
        check(self.related.tau.is_finite(), "related.tau", "must be finite")?;
        let w = &self.wordstream;
        check(finite_pos(w.bucket_width), "wordstream.bucket_width", "must be > 0")?;
        check(finite_pos(w.width), "wordstream.width", "must be > 0")?;
        check(finite_pos(w.height), "wordstream.height", "must be > 0")?;
        check(finite_pos(w.simplified_height) && w.simplified_height < w.height, "wordstream.simplified_height", "must be in (0, height)")?;
        check(finite_pos(w.font_min), "wordstream.font_min", "must be > 0")?;
        check(w.font_max.is_finite() && w.font_max >= w.font_min, "wordstream.font_max", "must be >= font_min")?;

        let known = |ok: bool, kind: &'static str, name: &str, names: Vec<&str>| {
            if ok {
                Ok(())
            } else {
                Err(ConfigError::Backend(BackendError::Unknown { kind, name: name.to_string(), available: names.join(", ") }))
            }
        };
        known(registry.classifiers.contains(&self.classifier.backend), "classifier", &self.classifier.backend, registry.classifiers.names().collect())?;
        known(registry.extractors.contains(&self.extractor.backend), "extractor", &self.extractor.backend, registry.extractors.names().collect())?;
        known(registry.summarizers.contains(&self.summarizer.backend), "summarizer", &self.summarizer.backend, registry.summarizers.names().collect())?;
        known(registry.explainers.contains(&self.explainer.backend), "explainer", &self.explainer.backend, registry.explainers.names().collect())?;
        for (name, endpoint) in [
            (&self.classifier.backend, &self.classifier.endpoint),
            (&self.extractor.backend, &self.extractor.endpoint),
            (&self.summarizer.backend, &self.summarizer.endpoint),
            (&self.explainer.backend, &self.explainer.endpoint),
        ] {
            if name == "remote" && endpoint.is_none() {
                return Err(ConfigError::Backend(BackendError::MissingEndpoint(name.clone())));
            }
            if let Some(e) = endpoint {
                check(finite_pos(e.timeout_secs), "endpoint.timeout_secs", "must be > 0")?;
            }
        }
        Ok(())
    }

    /// Lexicon and stopword lists named in `[data]`, or the built-in ones.
    pub fn load_data(&self) -> Result<(Arc<Lexicon>, Arc<Stopwords>), ConfigError> {
        let lexicon = match &self.data.lexicon {
            Some(p) => Lexicon::load(p)?,
            None => Lexicon::builtin(),
        };
        let stopwords = match &self.data.stopwords {
            Some(p) => Stopwords::from_lexicon(&Lexicon::load(p)?),
            None => Stopwords::builtin(),
        };
        Ok((Arc::new(lexicon), Arc::new(stopwords)))
    }

    /// Backend settings for one stage.
    pub fn settings(&self, endpoint: &Option<RemoteEndpoint>, lexicon: &Arc<Lexicon>, stopwords: &Arc<Stopwords>) -> BackendSettings {
        BackendSettings { endpoint: endpoint.clone(), lexicon: lexicon.clone(), stopwords: stopwords.clone() }
    }
}
