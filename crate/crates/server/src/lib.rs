//! Read-only JSON API over a directory of knowledge bundles.
//!
//! Bundles are loaded once at startup and never mutate; handlers are pure
//! projections, so every response is canonical JSON and identical bytes
//! are returned for identical requests.

mod error;
mod video;

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::extract::{Path as UrlPath, Query, State};
use axum::http::header;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use ck_core::backend::BackendRegistry;
use ck_core::bundle::{load_bundle, to_canonical_json, KnowledgeBundle};
use ck_core::classify::CategorySet;
use serde::Serialize;
use tower_http::services::ServeDir;

pub use error::{ApiError, ServerError};
pub use video::{RangeQuery, Video};

/// Every loaded video, keyed by id.
pub struct AppState {
    videos: BTreeMap<String, Arc<Video>>,
}

impl AppState {
    pub fn new(bundles: Vec<KnowledgeBundle>, registry: &BackendRegistry) -> Result<Self, ServerError> {
        let mut videos = BTreeMap::new();
        for b in bundles {
            let v = Video::new(b, registry)?;
            let id = v.id().to_string();
            if videos.insert(id.clone(), Arc::new(v)).is_some() {
                return Err(ServerError::DuplicateVideo(id));
            }
        }
        Ok(AppState { videos })
    }

    pub fn video(&self, id: &str) -> Result<&Arc<Video>, ApiError> {
        self.videos.get(id).ok_or_else(|| ApiError::not_found(format!("unknown video `{id}`")))
    }
}

/// Load and validate every `*.json` bundle in `dir`, in file name order.
pub fn load_bundle_dir(dir: &Path) -> Result<Vec<KnowledgeBundle>, ServerError> {
    let io = |source| ServerError::Io { path: dir.to_path_buf(), source };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(io)?
        .into_iter()
        .filter(|p| p.extension().is_some_and(|e| e == "json") && p.is_file())
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(ServerError::NoBundles(dir.to_path_buf()));
    }
    paths.into_iter().map(|p| load_bundle(&p).map_err(|source| ServerError::Bundle { path: p, source })).collect()
}

fn json<T: Serialize>(value: &T) -> Response {
    match to_canonical_json(value) {
        Ok(body) => ([(header::CONTENT_TYPE, "application/json")], body).into_response(),
        Err(e) => ApiError::internal(e).into_response(),
    }
}

type Params = Query<HashMap<String, String>>;

fn number(params: &HashMap<String, String>, key: &str) -> Result<Option<f64>, ApiError> {
    match params.get(key) {
        None => Ok(None),
        Some(raw) => match raw.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Some(v)),
            _ => Err(ApiError::bad_request(format!("`{key}` must be a finite number, got `{raw}`"))),
        },
    }
}

/// `from`/`to` default to the whole video and `categories` to all seven.
fn range(params: &HashMap<String, String>, duration: f64) -> Result<RangeQuery, ApiError> {
    let from = number(params, "from")?.unwrap_or(0.0);
    let to = number(params, "to")?.unwrap_or(duration);
    if from >= to {
        return Err(ApiError::bad_request(format!("empty range: from={from} must be below to={to}")));
    }
    let categories = match params.get("categories") {
        Some(s) => CategorySet::parse_list(s).map_err(ApiError::bad_request)?,
        None => CategorySet::all(),
    };
    Ok(RangeQuery { from, to, categories })
}

async fn list_videos(State(s): State<Arc<AppState>>) -> Response {
    let list: Vec<_> = s.videos.values().map(|v| v.summary()).collect();
    json(&list)
}

async fn get_video(State(s): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<Response, ApiError> {
    Ok(json(&s.video(&id)?.detail()))
}

async fn sections(State(s): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<Response, ApiError> {
    Ok(json(&s.video(&id)?.sections()))
}

async fn wordstream(State(s): State<Arc<AppState>>, UrlPath(id): UrlPath<String>, Query(p): Params) -> Result<Response, ApiError> {
    let v = s.video(&id)?;
    Ok(json(&v.wordstream(range(&p, v.duration())?)?))
}

async fn danmaku(State(s): State<Arc<AppState>>, UrlPath(id): UrlPath<String>, Query(p): Params) -> Result<Response, ApiError> {
    let v = s.video(&id)?;
    Ok(json(&v.danmaku(range(&p, v.duration())?)))
}

async fn graph(State(s): State<Arc<AppState>>, UrlPath(id): UrlPath<String>, Query(p): Params) -> Result<Response, ApiError> {
    let v = s.video(&id)?;
    let t = number(&p, "t")?.ok_or_else(|| ApiError::bad_request("missing `t`"))?;
    Ok(json(&v.graph_at(t)?))
}

async fn related(State(s): State<Arc<AppState>>, UrlPath((id, did)): UrlPath<(String, String)>) -> Result<Response, ApiError> {
    Ok(json(&s.video(&id)?.related(&did)?))
}

async fn explanation(State(s): State<Arc<AppState>>, UrlPath((id, did)): UrlPath<(String, String)>) -> Result<Response, ApiError> {
    let v = s.video(&id)?.clone();
    let (cid, window, req) = v.explain_request(&did)?;
    let (cid, window) = (cid.to_string(), window);
    // a remote explainer blocks on HTTP
    let worker = v.clone();
    let (req, explanation) = tokio::task::spawn_blocking(move || {
        let e = worker.explain(&req);
        (req, e)
    })
    .await
    .map_err(ApiError::internal)?;
    Ok(json(&video::ExplanationView { id: &cid, window, entity: req.entity, relations: req.relations, explanation }))
}

async fn transcript(State(s): State<Arc<AppState>>, UrlPath(id): UrlPath<String>, Query(p): Params) -> Result<Response, ApiError> {
    let v = s.video(&id)?;
    let q = range(&p, v.duration())?;
    Ok(json(&v.transcript(q.from, q.to)))
}

async fn api_not_found() -> ApiError {
    ApiError::not_found("no such endpoint")
}

/// The API router; when `static_dir` is given its files are served for
/// every other path.
pub fn router(state: Arc<AppState>, static_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/videos", get(list_videos))
        .route("/videos/{id}", get(get_video))
        .route("/videos/{id}/sections", get(sections))
        .route("/videos/{id}/wordstream", get(wordstream))
        .route("/videos/{id}/danmaku", get(danmaku))
        .route("/videos/{id}/graph", get(graph))
        .route("/videos/{id}/danmaku/{did}/related", get(related))
        .route("/videos/{id}/danmaku/{did}/explanation", get(explanation))
        .route("/videos/{id}/transcript", get(transcript))
        .fallback(api_not_found)
        .with_state(state);
    let app = Router::new().nest("/api", api);
    match static_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app,
    }
}

/// Load `bundle_dir` and serve until the process is stopped.
pub async fn serve(bundle_dir: &Path, addr: SocketAddr, static_dir: Option<&Path>) -> Result<(), ServerError> {
    let bundles = load_bundle_dir(bundle_dir)?;
    let state = Arc::new(AppState::new(bundles, &BackendRegistry::with_defaults())?);
    let listener = tokio::net::TcpListener::bind(addr).await.map_err(|source| ServerError::Bind { addr: addr.to_string(), source })?;
    tracing::info!("serving {} video(s) on {addr}", state.videos.len());
    axum::serve(listener, router(state, static_dir)).await.map_err(|source| ServerError::Bind { addr: addr.to_string(), source })
}
