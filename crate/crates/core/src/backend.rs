//! Named backend registry and the shared HTTP JSON client used by the
//! remote backends.
//!
//! Every pluggable stage (classifier, extractor, summarizer, explainer) is a
//! trait object. Implementations register a factory under a name; the
//! pipeline configuration picks one by name at run time.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::Duration;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::classify::backend::{LexiconClassifier, RemoteClassifier};
use crate::classify::ClassifierBackend;
use crate::explain::{Explainer, RemoteExplainer, TemplateExplainer};
use crate::lexicon::{Lexicon, Stopwords};
use crate::structure::extract::{BaselineExtractor, ExtractorBackend, RemoteExtractor};
use crate::structure::summary::{ExtractiveSummarizer, Summarizer};

#[derive(Debug, thiserror::Error)]
pub enum BackendError {
    #[error("no {kind} backend named `{name}` (available: {available})")]
    Unknown { kind: &'static str, name: String, available: String },
    #[error("{kind} backend `{name}` is already registered")]
    AlreadyRegistered { kind: &'static str, name: String },
    #[error("backend `{0}` needs an endpoint (base_url) in the configuration")]
    MissingEndpoint(String),
    #[error("request to {url} failed: {message}")]
    Transport { url: String, message: String },
    #[error("malformed response from {url}: {message}")]
    Malformed { url: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemoteEndpoint {
    pub base_url: String,
    #[serde(default = "default_timeout")]
    pub timeout_secs: f64,
}

fn default_timeout() -> f64 {
    30.0
}

/// Everything a factory may need to construct a backend.
#[derive(Clone)]
pub struct BackendSettings {
    pub endpoint: Option<RemoteEndpoint>,
    pub lexicon: Arc<Lexicon>,
    pub stopwords: Arc<Stopwords>,
}

impl Default for BackendSettings {
    fn default() -> Self {
        BackendSettings { endpoint: None, lexicon: Arc::new(Lexicon::builtin()), stopwords: Arc::new(Stopwords::builtin()) }
    }
}

impl BackendSettings {
    pub fn require_endpoint(&self, backend: &str) -> Result<&RemoteEndpoint, BackendError> {
        self.endpoint.as_ref().ok_or_else(|| BackendError::MissingEndpoint(backend.to_string()))
    }
}

pub type Factory<T> = Box<dyn Fn(&BackendSettings) -> Result<Arc<T>, BackendError> + Send + Sync>;

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    factories: BTreeMap<String, Factory<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry { kind, factories: BTreeMap::new() }
    }

    pub fn register<F>(&mut self, name: &str, factory: F) -> Result<(), BackendError>
    where
        F: Fn(&BackendSettings) -> Result<Arc<T>, BackendError> + Send + Sync + 'static,
    {
        if self.factories.contains_key(name) {
            return Err(BackendError::AlreadyRegistered { kind: self.kind, name: name.to_string() });
        }
        self.factories.insert(name.to_string(), Box::new(factory));
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.factories.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn build(&self, name: &str, settings: &BackendSettings) -> Result<Arc<T>, BackendError> {
        let factory = self.factories.get(name).ok_or_else(|| BackendError::Unknown {
            kind: self.kind,
            name: name.to_string(),
            available: self.names().collect::<Vec<_>>().join(", "),
        })?;
        factory(settings)
    }
}

impl<T: ?Sized> fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry").field("kind", &self.kind).field("names", &self.factories.keys().collect::<Vec<_>>()).finish()
    }
}

#[derive(Debug)]
pub struct BackendRegistry {
    pub classifiers: Registry<dyn ClassifierBackend>,
    pub extractors: Registry<dyn ExtractorBackend>,
    pub summarizers: Registry<dyn Summarizer>,
    pub explainers: Registry<dyn Explainer>,
}

impl BackendRegistry {
    pub fn empty() -> Self {
        BackendRegistry {
            classifiers: Registry::new("classifier"),
            extractors: Registry::new("extractor"),
            summarizers: Registry::new("summarizer"),
            explainers: Registry::new("explainer"),
        }
    }

    /// Registry with every backend shipped in this crate.
    pub fn with_defaults() -> Self {
        let mut r = Self::empty();
        r.classifiers
            .register("lexicon", |s| Ok(Arc::new(LexiconClassifier::new(s.lexicon.clone())) as Arc<dyn ClassifierBackend>))
            .expect("fresh registry");
        r.classifiers
            .register("remote", |s| Ok(Arc::new(RemoteClassifier::new(s.require_endpoint("remote")?.clone())?) as Arc<dyn ClassifierBackend>))
            .expect("fresh registry");
        r.extractors
            .register("baseline", |s| Ok(Arc::new(BaselineExtractor::new(s.stopwords.clone())) as Arc<dyn ExtractorBackend>))
            .expect("fresh registry");
        r.extractors
            .register("remote", |s| Ok(Arc::new(RemoteExtractor::new(s.require_endpoint("remote")?.clone())?) as Arc<dyn ExtractorBackend>))
            .expect("fresh registry");
        r.summarizers
            .register("extractive", |_| Ok(Arc::new(ExtractiveSummarizer) as Arc<dyn Summarizer>))
            .expect("fresh registry");
        r.explainers
            .register("offline", |_| Ok(Arc::new(TemplateExplainer) as Arc<dyn Explainer>))
            .expect("fresh registry");
        r.explainers
            .register("remote", |s| Ok(Arc::new(RemoteExplainer::new(s.require_endpoint("remote")?.clone())?) as Arc<dyn Explainer>))
            .expect("fresh registry");
        r
    }
}

impl Default for BackendRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}

/// Blocking JSON-over-HTTP POST client shared by the remote backends.
#[derive(Debug, Clone)]
pub struct JsonClient {
    url: String,
    client: reqwest::blocking::Client,
}

impl JsonClient {
    pub fn new(endpoint: &RemoteEndpoint) -> Result<Self, BackendError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs_f64(endpoint.timeout_secs.max(0.001)))
            .build()
            .map_err(|e| BackendError::Transport { url: endpoint.base_url.clone(), message: e.to_string() })?;
        Ok(JsonClient { url: endpoint.base_url.clone(), client })
    }

    pub fn url(&self) -> &str {
        &self.url
    }

    pub fn post<Req: Serialize + ?Sized, Resp: DeserializeOwned>(&self, body: &Req) -> Result<Resp, BackendError> {
        let transport = |e: reqwest::Error| BackendError::Transport { url: self.url.clone(), message: e.to_string() };
        let resp = self.client.post(&self.url).json(body).send().map_err(transport)?;
        let resp = resp.error_for_status().map_err(transport)?;
        let bytes = resp.bytes().map_err(transport)?;
        serde_json::from_slice(&bytes).map_err(|e| BackendError::Malformed { url: self.url.clone(), message: e.to_string() })
    }
}
