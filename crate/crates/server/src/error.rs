use std::path::PathBuf;

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};

#[derive(Debug, thiserror::Error)]
pub enum ServerError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Bundle {
        path: PathBuf,
        #[source]
        source: ck_core::bundle::BundleError,
    },
    #[error("no bundles found in {0}")]
    NoBundles(PathBuf),
    #[error("video `{0}` appears in more than one bundle")]
    DuplicateVideo(String),
    #[error("video `{video_id}`: {message}")]
    Setup { video_id: String, message: String },
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: String,
        #[source]
        source: std::io::Error,
    },
}

/// An error answered as `{"error": message}` with the given status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub message: String,
}

impl ApiError {
    pub fn bad_request(msg: impl ToString) -> Self {
        ApiError { status: StatusCode::BAD_REQUEST, message: msg.to_string() }
    }

    pub fn not_found(msg: impl ToString) -> Self {
        ApiError { status: StatusCode::NOT_FOUND, message: msg.to_string() }
    }

    pub fn internal(msg: impl ToString) -> Self {
        ApiError { status: StatusCode::INTERNAL_SERVER_ERROR, message: msg.to_string() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = serde_json::json!({ "error": self.message }).to_string();
        (self.status, [(axum::http::header::CONTENT_TYPE, "application/json")], body).into_response()
    }
}
