//! HTTP/JSON front end for prediction, plan generation and signed receipts.
//!
//! | Method | Path       | Body                                   |
//! |--------|------------|----------------------------------------|
//! | GET    | `/health`  |                                        |
//! | GET    | `/model`   |                                        |
//! | POST   | `/predict` | `{instance}`                           |
//! | POST   | `/plans`   | `{instance, goal?, preferences?, k?, fast?}` |
//! | POST   | `/receipt` | `{instance, goal?, preferences?, plans}` |
//!
//! Errors are returned as `{code, message, detail}`. The service keeps no
//! state between requests; the model and signing key are loaded once and
//! shared read-only.

use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine as _;
use recourse_core::model::{load_model, model_hash};
use recourse_core::receipt::{build_and_sign, decode_secret_key, key_id, SecretKey};
use recourse_core::recourse::{
    audit_plan, generate_plans, PlanOptions, PreferenceSpec, Preferences, RecourseGoal, DEFAULT_K,
};
use recourse_core::wire::{instance_from_value, model_summary, PlanJson, PredictionJson, SubmittedPlan};
use recourse_core::{EbmModel, Instance, ModelError, RecourseError};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Largest `k` a client may ask for.
pub const MAX_K: usize = 20;
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(10);

#[derive(Debug, thiserror::Error)]
pub enum StartupError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("model: {0}")]
    Model(#[from] ModelError),
    #[error("signing key: {0}")]
    Key(#[from] recourse_core::ReceiptError),
}

/// Everything a handler needs; cheap to clone.
#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    model: EbmModel,
    digest: String,
    key: Option<SecretKey>,
    time_limit: Duration,
}

impl AppState {
    pub fn new(model: EbmModel, key: Option<SecretKey>, time_limit: Duration) -> Self {
        let digest = model_hash(&model);
        Self {
            inner: Arc::new(Inner {
                model,
                digest,
                key,
                time_limit,
            }),
        }
    }

    /// Loads the model document and, if given, the secret key file.
    pub fn load(model_path: &Path, key_path: Option<&Path>, time_limit: Duration) -> Result<Self, StartupError> {
        let io = |path: &Path| {
            let path = path.display().to_string();
            move |source| StartupError::Io { path, source }
        };
        let file = std::fs::File::open(model_path).map_err(io(model_path))?;
        let model = load_model(std::io::BufReader::new(file))?;
        let key = match key_path {
            Some(p) => Some(decode_secret_key(&std::fs::read_to_string(p).map_err(io(p))?)?),
            None => None,
        };
        Ok(Self::new(model, key, time_limit))
    }

    pub fn model(&self) -> &EbmModel {
        &self.inner.model
    }

    pub fn digest(&self) -> &str {
        &self.inner.digest
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/model", get(model_info))
        .route("/predict", post(predict))
        .route("/plans", post(plans))
        .route("/receipt", post(receipt))
        .with_state(state)
}

/// Serves until the listener fails.
pub async fn serve(listener: tokio::net::TcpListener, state: AppState) -> std::io::Result<()> {
    axum::serve(listener, router(state)).await
}

/// Error body `{code, message, detail}` with its status.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    pub detail: Value,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            code,
            message: message.into(),
            detail: Value::Null,
        }
    }

    fn with_detail(mut self, detail: Value) -> Self {
        self.detail = detail;
        self
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({"code": self.code, "message": self.message, "detail": self.detail});
        (self.status, Json(body)).into_response()
    }
}

impl From<ModelError> for ApiError {
    fn from(e: ModelError) -> Self {
        let message = e.to_string();
        match e {
            ModelError::MissingFeature(feature) => ApiError::new(StatusCode::BAD_REQUEST, "missing-feature", message)
                .with_detail(json!({ "feature": feature })),
            ModelError::UnknownLevel { feature, level } => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "unknown-level", message)
                    .with_detail(json!({ "feature": feature, "level": level }))
            }
            _ => ApiError::new(StatusCode::BAD_REQUEST, "invalid-instance", message),
        }
    }
}

impl From<RecourseError> for ApiError {
    fn from(e: RecourseError) -> Self {
        let message = e.to_string();
        match e {
            RecourseError::Model(m) => m.into(),
            RecourseError::InvalidGoal(_) => ApiError::new(StatusCode::BAD_REQUEST, "invalid-goal", message),
            RecourseError::InvalidPreferences(_) => ApiError::new(StatusCode::BAD_REQUEST, "invalid-preferences", message),
            RecourseError::GoalAlreadySatisfied => ApiError::new(StatusCode::CONFLICT, "goal-already-satisfied", message),
            RecourseError::NoCandidates(_) => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "no-candidates", message),
            RecourseError::Solver(_) => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "solver-error", message),
        }
    }
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "bad-request", format!("invalid request body: {e}")))
}

async fn health(State(state): State<AppState>) -> Json<Value> {
    let signing = state.inner.key.as_ref().map(|k| {
        let public = k.verifying_key();
        json!({"key_id": key_id(&public), "public_key": BASE64.encode(public.as_bytes())})
    });
    Json(json!({"status": "ok", "model_digest": state.digest(), "signing": signing}))
}

async fn model_info(State(state): State<AppState>) -> Json<Value> {
    Json(model_summary(state.model()))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PredictRequest {
    instance: Value,
}

async fn predict(State(state): State<AppState>, body: Bytes) -> Result<Json<PredictionJson>, ApiError> {
    let req: PredictRequest = parse_body(&body)?;
    let instance = instance_from_value(state.model(), &req.instance)?;
    Ok(Json(PredictionJson::of(state.model(), &instance)))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanRequest {
    instance: Value,
    #[serde(default)]
    goal: Option<RecourseGoal>,
    #[serde(default)]
    preferences: PreferenceSpec,
    #[serde(default)]
    k: Option<usize>,
    #[serde(default)]
    fast: bool,
}

#[derive(Debug, Serialize)]
pub struct PlanResponse {
    pub plans: Vec<PlanJson>,
    pub current: PredictionJson,
    pub goal: RecourseGoal,
    pub preferences: PreferenceSpec,
    pub k: usize,
    pub elapsed_ms: u64,
    pub timed_out: bool,
    pub reason: Option<String>,
}

/// Instance, goal and preferences shared by `/plans` and `/receipt`.
fn request_context(
    model: &EbmModel,
    instance: &Value,
    goal: Option<RecourseGoal>,
    prefs: &PreferenceSpec,
) -> Result<(Instance, RecourseGoal, Preferences), ApiError> {
    let instance = instance_from_value(model, instance)?;
    let goal = match goal {
        Some(g) => g,
        None => RecourseGoal::flip(model, &model.raw_score(&instance)).ok_or_else(|| {
            ApiError::new(StatusCode::BAD_REQUEST, "invalid-goal", format!("a goal is required for {} models", model.link()))
        })?,
    };
    goal.validate(model)?;
    let prefs = Preferences::from_spec(model, prefs)?;
    Ok((instance, goal, prefs))
}

async fn plans(State(state): State<AppState>, body: Bytes) -> Result<Json<PlanResponse>, ApiError> {
    let req: PlanRequest = parse_body(&body)?;
    let model = state.model();
    let (instance, goal, prefs) = request_context(model, &req.instance, req.goal, &req.preferences)?;
    let k = req.k.unwrap_or(DEFAULT_K);
    if !(1..=MAX_K).contains(&k) {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, "bad-request", format!("k must be between 1 and {MAX_K}")));
    }
    let options = PlanOptions {
        k,
        time_limit: state.inner.time_limit,
        fast: req.fast,
    };
    let started = Instant::now();
    let worker = state.clone();
    let (instance, set, prefs) = tokio::task::spawn_blocking(move || {
        let set = generate_plans(worker.model(), &instance, &goal, &prefs, &options);
        (instance, set, prefs)
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?;
    let set = set?;
    log::info!("plans: {} found in {:?} (timed out: {})", set.plans.len(), started.elapsed(), set.timed_out);
    Ok(Json(PlanResponse {
        plans: set.plans.iter().map(|p| PlanJson::from_plan(model, p)).collect(),
        current: PredictionJson::of(model, &instance),
        goal,
        preferences: prefs.to_spec(model),
        k,
        elapsed_ms: started.elapsed().as_millis() as u64,
        timed_out: set.timed_out,
        reason: set.reason,
    }))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReceiptRequest {
    instance: Value,
    #[serde(default)]
    goal: Option<RecourseGoal>,
    #[serde(default)]
    preferences: PreferenceSpec,
    plans: Vec<SubmittedPlan>,
}

async fn receipt(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let Some(key) = state.inner.key.as_ref() else {
        return Err(ApiError::new(
            StatusCode::SERVICE_UNAVAILABLE,
            "no-signing-key",
            "this server has no signing key configured",
        ));
    };
    let req: ReceiptRequest = parse_body(&body)?;
    let model = state.model();
    let (instance, goal, prefs) = request_context(model, &req.instance, req.goal, &req.preferences)?;
    if req.plans.is_empty() {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, "bad-request", "no plans to sign"));
    }
    let mut audited = Vec::with_capacity(req.plans.len());
    for (n, submitted) in req.plans.iter().enumerate() {
        let unverifiable = |reason: String| {
            ApiError::new(StatusCode::BAD_REQUEST, "unverifiable-plan", format!("plan {}: {reason}", n + 1))
                .with_detail(json!({"plan": n + 1, "reason": reason}))
        };
        let changes = submitted
            .changes
            .iter()
            .map(|c| c.to_change(model))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| unverifiable(e.to_string()))?;
        let plan = audit_plan(model, &instance, &goal, &prefs, changes, submitted.distance).map_err(|e| unverifiable(e.to_string()))?;
        audited.push(plan);
    }
    let signed = build_and_sign(model, &instance, &goal, &audited, key, chrono::Utc::now())
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "unverifiable-plan", e.to_string()))?;
    Ok((
        [
            (header::CONTENT_TYPE, "text/plain; charset=utf-8"),
            (header::CONTENT_DISPOSITION, "attachment; filename=\"recourse-receipt.txt\""),
        ],
        signed.render(),
    )
        .into_response())
}
