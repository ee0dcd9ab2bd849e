use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use maua_core::io::{problem_from_value, problem_to_value, results_json, ParseError};
use maua_core::{
    evaluate_problem, rank_options, sensitivity_report, validate_problem, what_if, DecisionProblem,
    Override, SweepMethod, ValidationReport,
};
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::cors::{Any, CorsLayer};
use tower_http::services::ServeDir;
use tower_http::trace::TraceLayer;

use crate::store::{Store, StoreError};
use crate::{ServeError, ServiceConfig};

const DEFAULT_SAMPLES: usize = 101;

#[derive(Debug)]
enum ApiError {
    Malformed {
        line: usize,
        column: usize,
        message: String,
    },
    NotFound(String),
    Conflict {
        expected: u64,
        current: u64,
    },
    Invalid(ValidationReport),
    Unprocessable(String),
    Internal(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::Malformed {
                line,
                column,
                message,
            } => (
                StatusCode::BAD_REQUEST,
                json!({ "error": "malformed_json", "line": line, "column": column, "message": message }),
            ),
            ApiError::NotFound(id) => (
                StatusCode::NOT_FOUND,
                json!({ "error": "not_found", "message": format!("problem {id} not found") }),
            ),
            ApiError::Conflict { expected, current } => (
                StatusCode::CONFLICT,
                json!({
                    "error": "revision_conflict",
                    "expected_revision": expected,
                    "current_revision": current,
                }),
            ),
            ApiError::Invalid(report) => (
                StatusCode::UNPROCESSABLE_ENTITY,
                json!({ "error": "validation_failed", "ok": report.ok, "issues": report.issues }),
            ),
            ApiError::Unprocessable(message) => (
                StatusCode::UNPROCESSABLE_ENTITY,
                json!({ "error": "unprocessable", "message": message }),
            ),
            ApiError::Internal(message) => {
                tracing::error!(%message, "internal error");
                (
                    StatusCode::INTERNAL_SERVER_ERROR,
                    json!({ "error": "internal", "message": message }),
                )
            }
        };
        (status, Json(body)).into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(err: StoreError) -> Self {
        match err {
            StoreError::NotFound(id) => ApiError::NotFound(id),
            StoreError::Conflict { expected, current } => ApiError::Conflict { expected, current },
            other => ApiError::Internal(other.to_string()),
        }
    }
}

impl From<ParseError> for ApiError {
    fn from(err: ParseError) -> Self {
        match err {
            ParseError::Syntax {
                line,
                column,
                message,
            } => ApiError::Malformed {
                line,
                column,
                message,
            },
            other => {
                let path = other.path().to_owned();
                ApiError::Invalid(ValidationReport::single_error(path, other.to_string()))
            }
        }
    }
}

impl From<maua_core::Error> for ApiError {
    fn from(err: maua_core::Error) -> Self {
        match err {
            maua_core::Error::Invalid(report) => ApiError::Invalid(report),
            other => ApiError::Unprocessable(other.to_string()),
        }
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn json_body(body: &Bytes) -> ApiResult<Value> {
    serde_json::from_slice(body).map_err(|e| ApiError::Malformed {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Deserialize a request envelope; shape mismatches are 422, not 400.
fn envelope<T: serde::de::DeserializeOwned>(value: Value) -> ApiResult<T> {
    serde_json::from_value(value).map_err(|e| {
        ApiError::Invalid(ValidationReport::single_error(
            "$",
            format!("invalid request: {e}"),
        ))
    })
}

fn valid_problem(document: &Value) -> ApiResult<DecisionProblem> {
    let problem = problem_from_value(document)?;
    let report = validate_problem(&problem);
    if !report.ok {
        return Err(ApiError::Invalid(report));
    }
    Ok(problem)
}

fn json_text(status: StatusCode, text: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], text).into_response()
}

fn evaluation_response(problem: &DecisionProblem) -> ApiResult<Response> {
    let result = evaluate_problem(problem)?;
    let ranking = rank_options(&result);
    Ok(json_text(
        StatusCode::OK,
        results_json(&result, &ranking, None),
    ))
}

type AppState = Arc<Store>;

async fn create_problem(State(store): State<AppState>, body: Bytes) -> ApiResult<Response> {
    let problem = valid_problem(&json_body(&body)?)?;
    let stored = store.create(problem)?;
    Ok((
        StatusCode::CREATED,
        Json(json!({ "id": stored.id, "revision": stored.revision })),
    )
        .into_response())
}

async fn list_problems(State(store): State<AppState>) -> Response {
    Json(store.list()).into_response()
}

async fn get_problem(State(store): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let stored = store.get(&id).ok_or(ApiError::NotFound(id))?;
    Ok(Json(json!({
        "id": stored.id,
        "revision": stored.revision,
        "created": stored.created,
        "updated": stored.updated,
        "document": problem_to_value(&stored.problem),
    }))
    .into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UpdateRequest {
    document: Value,
    expected_revision: u64,
}

async fn update_problem(
    State(store): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Response> {
    let request: UpdateRequest = envelope(json_body(&body)?)?;
    if store.get(&id).is_none() {
        return Err(ApiError::NotFound(id));
    }
    let problem = valid_problem(&request.document)?;
    let stored = store.update(&id, problem, request.expected_revision)?;
    Ok(Json(json!({ "id": stored.id, "revision": stored.revision })).into_response())
}

async fn delete_problem(
    State(store): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<StatusCode> {
    store.delete(&id)?;
    Ok(StatusCode::NO_CONTENT)
}

async fn evaluate_stored(
    State(store): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Response> {
    let stored = store.get(&id).ok_or(ApiError::NotFound(id))?;
    evaluation_response(&stored.problem)
}

async fn evaluate_stateless(body: Bytes) -> ApiResult<Response> {
    evaluation_response(&valid_problem(&json_body(&body)?)?)
}

#[derive(Deserialize, Default, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum Mode {
    Sweep,
    #[default]
    Critical,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SensitivityRequest {
    #[serde(default)]
    attribute: Option<String>,
    #[serde(default)]
    mode: Mode,
    #[serde(default)]
    samples: Option<usize>,
}

async fn sensitivity(
    State(store): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Response> {
    let stored = store.get(&id).ok_or(ApiError::NotFound(id))?;
    let request: SensitivityRequest = if body.is_empty() {
        envelope(json!({}))?
    } else {
        envelope(json_body(&body)?)?
    };
    let method = match request.mode {
        Mode::Critical => SweepMethod::Critical,
        Mode::Sweep => SweepMethod::Sweep {
            samples: request.samples.unwrap_or(DEFAULT_SAMPLES),
        },
    };
    let report = sensitivity_report(&stored.problem, request.attribute.as_deref(), method)?;
    Ok(Json(report).into_response())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WhatIfRequest {
    Wrapped { overrides: Vec<Override> },
    Bare(Vec<Override>),
}

async fn whatif(
    State(store): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Response> {
    let stored = store.get(&id).ok_or(ApiError::NotFound(id))?;
    let overrides = match envelope::<WhatIfRequest>(json_body(&body)?)? {
        WhatIfRequest::Wrapped { overrides } | WhatIfRequest::Bare(overrides) => overrides,
    };
    Ok(Json(what_if(&stored.problem, &overrides)?).into_response())
}

/// Build the application router around an open store.
pub fn router(store: Arc<Store>, config: &ServiceConfig) -> Result<Router, ServeError> {
    let cors = match &config.cors_origin {
        None => CorsLayer::new().allow_origin(Any),
        Some(origin) => CorsLayer::new().allow_origin(
            origin
                .parse::<HeaderValue>()
                .map_err(|_| ServeError::CorsOrigin(origin.clone()))?,
        ),
    }
    .allow_methods(Any)
    .allow_headers(Any);

    let api = Router::new()
        .route("/api/problems", post(create_problem).get(list_problems))
        .route(
            "/api/problems/{id}",
            get(get_problem).put(update_problem).delete(delete_problem),
        )
        .route("/api/problems/{id}/evaluate", post(evaluate_stored))
        .route("/api/problems/{id}/sensitivity", post(sensitivity))
        .route("/api/problems/{id}/whatif", post(whatif))
        .route("/api/evaluate", post(evaluate_stateless))
        .with_state(store);

    let app = match &config.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    Ok(app.layer(cors).layer(TraceLayer::new_for_http()))
}
