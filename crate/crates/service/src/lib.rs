//! HTTP JSON API for the citation success index.
//!
//! * `GET /v1/estimate?if_t=&if_r=` with optional `k`, `alpha`, `beta`, `q`
//!   and `ratio_only` returns the IF-only estimate in both directions.
//! * `POST /v1/compare` takes `{"target": [...], "reference": [...]}`, each an
//!   array of rows in the JSON corpus schema, and returns the exact index in
//!   both directions with per-journal summaries.
//! * `GET /v1/health` reports the version and the constants in effect.
//!
//! Everything else is served from the static directory, which holds the
//! calculator bundle.

use std::collections::HashMap;
use std::path::PathBuf;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use citesuccess_core::ingest::load_corpus_json;
use citesuccess_core::{
    success_index_exact, CitationDistribution, CorpusConfig, Estimator, EstimatorMode,
    JournalSummary, ModelConstants, DEFAULT_IF_ADJUSTMENT,
};
use serde::Serialize;
use serde_json::Value;
use tower_http::services::ServeDir;

pub const DEFAULT_PORT: u16 = 8080;
pub const DEFAULT_MAX_BODY_BYTES: usize = 1 << 20;
pub const DEFAULT_STATIC_DIR: &str = "webui/dist";

/// Settings read once at startup.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub port: u16,
    pub constants: ModelConstants,
    pub max_body_bytes: usize,
    pub static_dir: PathBuf,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            port: DEFAULT_PORT,
            constants: ModelConstants::default(),
            max_body_bytes: DEFAULT_MAX_BODY_BYTES,
            static_dir: PathBuf::from(DEFAULT_STATIC_DIR),
        }
    }
}

impl Config {
    pub fn from_env() -> Result<Self, String> {
        Self::from_lookup(|name| std::env::var(name).ok())
    }

    /// Builds the configuration from `CS_*` variables supplied by `lookup`.
    pub fn from_lookup(lookup: impl Fn(&str) -> Option<String>) -> Result<Self, String> {
        fn parse<T: std::str::FromStr>(
            name: &str,
            raw: Option<String>,
        ) -> Result<Option<T>, String> {
            raw.map(|v| {
                v.trim()
                    .parse()
                    .map_err(|_| format!("{name}={v:?} is not a valid value"))
            })
            .transpose()
        }
        let mut config = Config::default();
        if let Some(port) = parse("CS_PORT", lookup("CS_PORT"))? {
            config.port = port;
        }
        if let Some(limit) = parse("CS_MAX_BODY_BYTES", lookup("CS_MAX_BODY_BYTES"))? {
            config.max_body_bytes = limit;
        }
        if let Some(dir) = lookup("CS_STATIC_DIR") {
            config.static_dir = PathBuf::from(dir);
        }
        let c = &mut config.constants;
        for (name, slot) in [
            ("CS_ALPHA", &mut c.alpha),
            ("CS_BETA", &mut c.beta),
            ("CS_Q", &mut c.q),
            ("CS_K", &mut c.k),
        ] {
            if let Some(v) = parse(name, lookup(name))? {
                *slot = v;
            }
        }
        config
            .constants
            .validate()
            .map_err(|e| format!("environment constants rejected: {e}"))?;
        Ok(config)
    }
}

#[derive(Debug, Clone)]
struct AppState {
    constants: ModelConstants,
}

pub fn router(config: &Config) -> Router {
    let state = AppState {
        constants: config.constants,
    };
    Router::new()
        .route("/v1/estimate", get(estimate))
        .route(
            "/v1/compare",
            post(compare).layer(DefaultBodyLimit::max(config.max_body_bytes)),
        )
        .route("/v1/health", get(health))
        .with_state(state)
        .fallback_service(ServeDir::new(&config.static_dir))
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: ErrorDetail,
}

#[derive(Debug, Serialize)]
struct ErrorDetail {
    code: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    parameter: Option<String>,
}

#[derive(Debug)]
struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
    parameter: Option<String>,
}

impl ApiError {
    fn bad_request(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            code,
            message: message.into(),
            parameter: None,
        }
    }

    fn for_parameter(mut self, name: &str) -> Self {
        self.parameter = Some(name.to_owned());
        self
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            error: ErrorDetail {
                code: self.code,
                message: self.message,
                parameter: self.parameter,
            },
        };
        (self.status, Json(body)).into_response()
    }
}

#[derive(Debug, Serialize)]
struct ConstantsBody {
    alpha: f64,
    beta: f64,
    q: f64,
    k: f64,
}

impl From<ModelConstants> for ConstantsBody {
    fn from(c: ModelConstants) -> Self {
        Self {
            alpha: c.alpha,
            beta: c.beta,
            q: c.q,
            k: c.k,
        }
    }
}

#[derive(Debug, Serialize)]
struct HealthBody {
    status: &'static str,
    version: &'static str,
    constants: ConstantsBody,
}

async fn health(State(state): State<AppState>) -> Json<HealthBody> {
    Json(HealthBody {
        status: "ok",
        version: env!("CARGO_PKG_VERSION"),
        constants: state.constants.into(),
    })
}

#[derive(Debug, Serialize)]
struct EstimateBody {
    if_target: f64,
    if_reference: f64,
    s_forward: f64,
    s_backward: f64,
    ratio_x: f64,
    f0_reference: f64,
    f0_target: f64,
    mode: EstimatorMode,
    ratio_only_applies: bool,
    constants_used: ConstantsBody,
}

const ESTIMATE_PARAMS: [&str; 7] = ["if_t", "if_r", "k", "alpha", "beta", "q", "ratio_only"];

fn positive(query: &HashMap<String, String>, name: &str) -> Result<Option<f64>, ApiError> {
    let Some(raw) = query.get(name) else {
        return Ok(None);
    };
    match raw.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(Some(v)),
        _ => Err(ApiError::bad_request(
            "invalid_parameter",
            format!("{name} must be a positive number, got {raw:?}"),
        )
        .for_parameter(name)),
    }
}

fn required(query: &HashMap<String, String>, name: &str) -> Result<f64, ApiError> {
    positive(query, name)?.ok_or_else(|| {
        ApiError::bad_request("missing_parameter", format!("{name} is required"))
            .for_parameter(name)
    })
}

async fn estimate(
    State(state): State<AppState>,
    Query(query): Query<HashMap<String, String>>,
) -> Result<Json<EstimateBody>, ApiError> {
    let mut unknown: Vec<&String> = query
        .keys()
        .filter(|k| !ESTIMATE_PARAMS.contains(&k.as_str()))
        .collect();
    unknown.sort();
    if let Some(name) = unknown.first() {
        return Err(ApiError::bad_request(
            "unknown_parameter",
            format!("unknown query parameter {name:?}"),
        )
        .for_parameter(name));
    }

    let if_t = required(&query, "if_t")?;
    let if_r = required(&query, "if_r")?;
    let mut constants = state.constants;
    for (name, slot) in [
        ("alpha", &mut constants.alpha),
        ("beta", &mut constants.beta),
        ("q", &mut constants.q),
        ("k", &mut constants.k),
    ] {
        if let Some(v) = positive(&query, name)? {
            *slot = v;
        }
    }
    let ratio_only = match query.get("ratio_only").map(|v| v.trim()) {
        None | Some("false") | Some("0") => false,
        Some("true") | Some("1") => true,
        Some(other) => {
            return Err(ApiError::bad_request(
                "invalid_parameter",
                format!("ratio_only must be true or false, got {other:?}"),
            )
            .for_parameter("ratio_only"))
        }
    };

    let mut estimator = Estimator::new(constants)
        .map_err(|e| ApiError::bad_request("invalid_parameter", e.to_string()))?;
    if ratio_only {
        estimator = estimator.ratio_only();
    }
    let domain =
        |e: citesuccess_core::Error| ApiError::bad_request("invalid_parameter", e.to_string());
    let forward = estimator.estimate(if_t, if_r).map_err(domain)?;
    let backward = estimator.estimate(if_r, if_t).map_err(domain)?;
    Ok(Json(EstimateBody {
        if_target: if_t,
        if_reference: if_r,
        s_forward: forward.index.value,
        s_backward: backward.index.value,
        ratio_x: forward.ratio_x,
        f0_reference: forward.f0_reference,
        f0_target: backward.f0_reference,
        mode: forward.mode,
        ratio_only_applies: forward.ratio_only_applies(),
        constants_used: constants.into(),
    }))
}

#[derive(Debug, Serialize)]
struct CompareBody {
    s_forward: f64,
    s_backward: f64,
    target: JournalSummary,
    reference: JournalSummary,
}

fn histogram(
    body: &serde_json::Map<String, Value>,
    side: &str,
) -> Result<CitationDistribution, ApiError> {
    let schema_error =
        |message: String| ApiError::bad_request("invalid_schema", message).for_parameter(side);
    let rows = body.get(side).ok_or_else(|| {
        ApiError::bad_request("missing_parameter", format!("`{side}` is required"))
            .for_parameter(side)
    })?;
    if !rows.is_array() {
        return Err(schema_error(format!("`{side}` must be an array of rows")));
    }
    let config = CorpusConfig {
        min_articles: 1,
        ..Default::default()
    };
    let corpus = load_corpus_json(&rows.to_string(), &config)
        .map_err(|e| schema_error(format!("`{side}`: {e}")))?;
    match (corpus.distributions.len(), corpus.skipped.len()) {
        (1, 0) => Ok(corpus.distributions.into_iter().next().unwrap()),
        (0, _) => Err(ApiError::bad_request(
            "empty_histogram",
            format!("`{side}` has no articles"),
        )
        .for_parameter(side)),
        (n, m) => Err(schema_error(format!(
            "`{side}` must describe one journal, found {}",
            n + m
        ))),
    }
}

async fn compare(body: Bytes) -> Result<Json<CompareBody>, ApiError> {
    let value: Value = serde_json::from_slice(&body)
        .map_err(|e| ApiError::bad_request("invalid_json", e.to_string()))?;
    let Value::Object(map) = value else {
        return Err(ApiError::bad_request(
            "invalid_schema",
            "body must be an object with `target` and `reference`",
        ));
    };
    if let Some(extra) = map
        .keys()
        .find(|k| !["target", "reference", "adjustment"].contains(&k.as_str()))
    {
        return Err(
            ApiError::bad_request("invalid_schema", format!("unknown field `{extra}`"))
                .for_parameter(extra),
        );
    }
    let adjustment = match map.get("adjustment") {
        None => DEFAULT_IF_ADJUSTMENT,
        Some(v) => match v.as_f64() {
            Some(a) if a.is_finite() && a > 0.0 => a,
            _ => {
                return Err(ApiError::bad_request(
                    "invalid_parameter",
                    format!("adjustment must be a positive number, got {v}"),
                )
                .for_parameter("adjustment"))
            }
        },
    };
    let target = histogram(&map, "target")?;
    let reference = histogram(&map, "reference")?;

    let internal =
        |e: citesuccess_core::Error| ApiError::bad_request("invalid_schema", e.to_string());
    Ok(Json(CompareBody {
        s_forward: success_index_exact(&target, &reference)
            .map_err(internal)?
            .value,
        s_backward: success_index_exact(&reference, &target)
            .map_err(internal)?
            .value,
        target: JournalSummary::from_distribution(&target, adjustment).map_err(internal)?,
        reference: JournalSummary::from_distribution(&reference, adjustment).map_err(internal)?,
    }))
}
