//! Explanations linking a selected comment to the transcript it sits on.

use serde::{Deserialize, Serialize};

use crate::backend::{BackendError, JsonClient, RemoteEndpoint};

pub const PROMPT: &str = "explain the relationship between this comment and this transcript excerpt";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplainRequest {
    pub comment: String,
    pub excerpt: String,
    /// Label of the attached entity; `None` when attached to the hub.
    pub entity: Option<String>,
    /// Relation labels touching the attached entity, as `subject predicate object`.
    pub relations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub text: String,
    #[serde(rename = "offline-stub")]
    pub offline_stub: bool,
}

pub trait Explainer: Send + Sync {
    fn descriptor(&self) -> String;
    fn explain(&self, req: &ExplainRequest) -> Result<Explanation, BackendError>;
}

/// Deterministic template used when no model is configured.
pub struct TemplateExplainer;

impl Explainer for TemplateExplainer {
    fn descriptor(&self) -> String {
        "offline-template/1".into()
    }

    fn explain(&self, req: &ExplainRequest) -> Result<Explanation, BackendError> {
        Ok(Explanation { text: template(req), offline_stub: true })
    }
}

pub fn template(req: &ExplainRequest) -> String {
    let mut out = match &req.entity {
        Some(e) => format!("This comment is attached to the entity \"{e}\"."),
        None => "This comment is not anchored to a specific entity in this segment.".to_string(),
    };
    if !req.relations.is_empty() {
        out.push_str(" Related statements: ");
        out.push_str(&req.relations.join("; "));
        out.push('.');
    }
    out.push_str(&format!(" Comment: \"{}\"", req.comment.trim()));
    out
}

/// Remote model: POSTs `{prompt, comment, excerpt, entity, relations}` and
/// expects `{text}`.
pub struct RemoteExplainer {
    client: JsonClient,
}

impl RemoteExplainer {
    pub fn new(endpoint: RemoteEndpoint) -> Result<Self, BackendError> {
        Ok(RemoteExplainer { client: JsonClient::new(&endpoint)? })
    }
}

#[derive(Serialize)]
struct RemoteRequest<'a> {
    prompt: &'static str,
    #[serde(flatten)]
    req: &'a ExplainRequest,
}

#[derive(Deserialize)]
struct RemoteResponse {
    text: String,
}

impl Explainer for RemoteExplainer {
    fn descriptor(&self) -> String {
        format!("remote/1 ({})", self.client.url())
    }

    fn explain(&self, req: &ExplainRequest) -> Result<Explanation, BackendError> {
        let resp: RemoteResponse = self.client.post(&RemoteRequest { prompt: PROMPT, req })?;
        Ok(Explanation { text: resp.text, offline_stub: false })
    }
}
