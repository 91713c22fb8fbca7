use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use super::{NewGame, ServiceError, SessionStore};

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        let body = ErrorBody {
            code: self.code().to_string(),
            message: self.to_string(),
        };
        (status, Json(body)).into_response()
    }
}

fn bad_json(e: JsonRejection) -> ServiceError {
    ServiceError::BadRequest(e.body_text())
}

#[derive(Debug, Deserialize)]
struct MoveBody {
    row: usize,
    col: usize,
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ServiceError> + Send + 'static,
) -> Result<T, ServiceError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ServiceError::Io(std::io::Error::other(e.to_string())))?
}

async fn create(
    State(store): State<Arc<SessionStore>>,
    body: Result<Json<NewGame>, JsonRejection>,
) -> Result<impl IntoResponse, ServiceError> {
    let Json(game) = body.map_err(bad_json)?;
    let s = blocking(move || store.create(game)).await?;
    Ok((StatusCode::CREATED, Json(s)))
}

async fn play(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    body: Result<Json<MoveBody>, JsonRejection>,
) -> Result<impl IntoResponse, ServiceError> {
    let Json(m) = body.map_err(bad_json)?;
    let s = blocking(move || store.play(&id, (m.row, m.col))).await?;
    Ok(Json(s))
}

async fn fetch(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> Result<impl IntoResponse, ServiceError> {
    let s = blocking(move || store.get(&id)).await?;
    Ok(Json(s))
}

async fn analysis(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> Result<impl IntoResponse, ServiceError> {
    let a = blocking(move || store.analysis(&id)).await?;
    Ok(Json(a))
}

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/games", post(create))
        .route("/games/:id", get(fetch))
        .route("/games/:id/moves", post(play))
        .route("/games/:id/analysis", get(analysis))
        .with_state(store)
}

/// Serves the API until the process is stopped.
pub async fn serve(addr: SocketAddr, store: Arc<SessionStore>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(store)).await
}
