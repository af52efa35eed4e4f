use std::collections::BTreeMap;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, Method, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::Serialize;

use super::params::{parse_tab, parse_uptake};
use super::{canonical_json, parse_filter, ApiError, Engine, ErrorCode};
use crate::feedback::FeedbackCategory;

type Shared = Arc<Engine>;
type Params = Result<Query<BTreeMap<String, String>>, QueryRejection>;

fn json(status: StatusCode, body: &impl Serialize) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], canonical_json(body)).into_response()
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        json(status, &self)
    }
}

/// Runs a view builder off the async workers and serializes its result.
async fn run<T, F>(engine: Shared, status: StatusCode, f: F) -> Response
where
    T: Serialize + Send + 'static,
    F: FnOnce(&Engine) -> Result<T, ApiError> + Send + 'static,
{
    match tokio::task::spawn_blocking(move || f(&engine)).await {
        Ok(Ok(v)) => json(status, &v),
        Ok(Err(e)) => e.into_response(),
        Err(e) => ApiError::new(ErrorCode::Internal, e.to_string()).into_response(),
    }
}

fn params(q: Params) -> Result<BTreeMap<String, String>, ApiError> {
    q.map(|Query(q)| q).map_err(|e| ApiError::schema(e.body_text()))
}

macro_rules! try_api {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return ApiError::from(e).into_response(),
        }
    };
}

async fn ingest(State(engine): State<Shared>, body: Bytes) -> Response {
    let text = try_api!(String::from_utf8(body.to_vec()).map_err(|e| ApiError::schema(e.to_string())));
    run(engine, StatusCode::CREATED, move |e| e.ingest_json(&text)).await
}

async fn learners(State(engine): State<Shared>) -> Response {
    json(StatusCode::OK, &engine.store().learner_ids())
}

async fn overview(State(engine): State<Shared>, Path(id): Path<String>, q: Params) -> Response {
    let q = try_api!(params(q));
    run(engine, StatusCode::OK, move |e| e.overview(&id, &parse_filter(&q)?)).await
}

async fn corrections(State(engine): State<Shared>, Path(id): Path<String>, q: Params) -> Response {
    let q = try_api!(params(q));
    run(engine, StatusCode::OK, move |e| e.corrections(&id, &parse_filter(&q)?, parse_tab(&q)?, parse_uptake(&q)?))
        .await
}

async fn suggestions(State(engine): State<Shared>, Path(id): Path<String>, q: Params) -> Response {
    let q = try_api!(params(q));
    run(engine, StatusCode::OK, move |e| e.suggestions(&id, &parse_filter(&q)?)).await
}

async fn suggestion_cell(
    State(engine): State<Shared>,
    Path((id, category, tutor)): Path<(String, String, String)>,
    q: Params,
) -> Response {
    let q = try_api!(params(q));
    let category = try_api!(FeedbackCategory::parse(&category)
        .ok_or_else(|| ApiError::schema(format!("unknown suggestion category {category:?}"))));
    run(engine, StatusCode::OK, move |e| e.suggestion_cell(&id, &parse_filter(&q)?, category, &tutor)).await
}

async fn transcript(State(engine): State<Shared>, Path((id, session)): Path<(String, String)>, q: Params) -> Response {
    let q = try_api!(params(q));
    run(engine, StatusCode::OK, move |e| {
        let subject = q.get("subject").map(String::as_str).filter(|s| !s.is_empty());
        e.transcript(&id, &parse_filter(&q)?, &session, subject)
    })
    .await
}

async fn filters(State(engine): State<Shared>, Path(id): Path<String>) -> Response {
    run(engine, StatusCode::OK, move |e| e.filters(&id)).await
}

async fn fallback(method: Method, uri: Uri) -> Response {
    let mut e = ApiError::schema(format!("no route for {method} {}", uri.path()));
    e.status = StatusCode::NOT_FOUND.as_u16();
    e.into_response()
}

pub fn router(engine: Arc<Engine>) -> Router {
    Router::new()
        .route("/api/sessions", post(ingest))
        .route("/api/learners", get(learners))
        .route("/api/learners/{id}/overview", get(overview))
        .route("/api/learners/{id}/corrections", get(corrections))
        .route("/api/learners/{id}/suggestions", get(suggestions))
        .route("/api/learners/{id}/suggestions/{category}/{tutor}", get(suggestion_cell))
        .route("/api/learners/{id}/transcript/{session}", get(transcript))
        .route("/api/learners/{id}/filters", get(filters))
        .fallback(fallback)
        .with_state(engine)
}

/// Serves the API until the process is stopped.
pub async fn serve(engine: Arc<Engine>, host: &str, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind((host, port)).await?;
    eprintln!("rlens listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(engine)).await
}
