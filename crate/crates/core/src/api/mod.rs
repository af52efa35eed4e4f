//! Service surface shared by the HTTP server and the CLI: every view is built by
//! [`Engine`] and serialized as canonical JSON, so both paths emit identical bytes.

mod http;
mod params;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::analytics::{
    apply_filter, build_correction_heatmap, build_overview, build_transcript, filter_options, AnalyticsError,
    CorrectionPayload, Filter, FilterOptions, OverviewPayload, TranscriptPayload,
};
use crate::config::Config;
use crate::feedback::{aggregate_suggestions, FeedbackCategory, FeedbackClassifier, SuggestionCell, SuggestionPayload};
use crate::oracles::{build_oracle, SharedOracle};
use crate::store::{IngestAck, SessionStore, Snapshot, StoreError};
use crate::uptake::{build_uptake_timeline, Tab, UptakeAnalysis};

pub use http::{router, serve};
pub use params::{parse_filter, parse_tab, parse_uptake, FILTER_PARAMS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ErrorCode {
    SchemaError,
    Duplicate,
    UnknownLearner,
    EmptySelection,
    InvalidRange,
    Internal,
}

impl ErrorCode {
    pub fn status(self) -> u16 {
        match self {
            ErrorCode::SchemaError => 400,
            ErrorCode::Duplicate => 409,
            ErrorCode::UnknownLearner => 404,
            ErrorCode::EmptySelection => 200,
            ErrorCode::InvalidRange => 422,
            ErrorCode::Internal => 500,
        }
    }
}

/// Structured error body: `{"status", "code", "message"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
pub struct ApiError {
    pub status: u16,
    pub code: ErrorCode,
    pub message: String,
}

impl fmt::Display for ApiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let code = serde_json::to_value(self.code).expect("enum serializes");
        write!(f, "{}: {}", code.as_str().unwrap_or_default(), self.message)
    }
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        ApiError { status: code.status(), code, message: message.into() }
    }

    pub fn schema(message: impl Into<String>) -> Self {
        ApiError::new(ErrorCode::SchemaError, message)
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        let code = match &e {
            StoreError::Schema(_) | StoreError::Json(_) | StoreError::Invariant(_) => ErrorCode::SchemaError,
            StoreError::Duplicate { .. } => ErrorCode::Duplicate,
            StoreError::UnknownLearner(_) => ErrorCode::UnknownLearner,
            StoreError::Io { .. } => ErrorCode::Internal,
        };
        ApiError::new(code, e.to_string())
    }
}

impl From<AnalyticsError> for ApiError {
    fn from(e: AnalyticsError) -> Self {
        let code = match e {
            AnalyticsError::InvalidRange(_) => ErrorCode::InvalidRange,
            AnalyticsError::EmptySelection => ErrorCode::EmptySelection,
            AnalyticsError::EmptyInput | AnalyticsError::Mapper(_) => ErrorCode::Internal,
        };
        ApiError::new(code, e.to_string())
    }
}

/// Every view response. `data` is null exactly when `empty_selection` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub snapshot_version: u64,
    pub empty_selection: bool,
    pub data: Option<T>,
}

impl<T> Envelope<T> {
    fn of(snapshot: &Snapshot, data: Option<T>) -> Self {
        Envelope { snapshot_version: snapshot.version, empty_selection: data.is_none(), data }
    }
}

/// Sorted keys, no insignificant whitespace.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    fn sort(v: Value) -> Value {
        match v {
            Value::Object(m) => Value::Object(
                m.into_iter().map(|(k, v)| (k, sort(v))).collect::<BTreeMap<_, _>>().into_iter().collect(),
            ),
            Value::Array(a) => Value::Array(a.into_iter().map(sort).collect()),
            v => v,
        }
    }
    sort(serde_json::to_value(value).expect("view payloads serialize")).to_string()
}

pub struct Engine {
    store: SessionStore,
    oracle: SharedOracle,
    classifier: FeedbackClassifier,
    config: Config,
}

impl Engine {
    pub fn new(store: SessionStore, config: Config) -> Result<Engine, ApiError> {
        let oracle =
            build_oracle(config.oracles.backend).map_err(|e| ApiError::new(ErrorCode::Internal, e.to_string()))?;
        Ok(Engine { classifier: FeedbackClassifier::baseline(oracle.clone()), store, oracle, config })
    }

    pub fn store(&self) -> &SessionStore {
        &self.store
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn ingest_json(&self, body: &str) -> Result<IngestAck, ApiError> {
        Ok(self.store.ingest_json(body)?)
    }

    fn snapshot(&self, learner_id: &str) -> Result<Arc<Snapshot>, ApiError> {
        Ok(self.store.snapshot(learner_id)?)
    }

    fn analysis(&self, full: &Snapshot) -> UptakeAnalysis {
        build_uptake_timeline(self.oracle.as_ref(), full, &self.config.oracles, &self.config.uptake)
    }

    /// The filtered selection, None when nothing matches.
    fn select(full: &Snapshot, filter: &Filter) -> Result<Option<Snapshot>, ApiError> {
        let filtered = apply_filter(full, filter)?;
        Ok((!filtered.sessions.is_empty()).then_some(filtered))
    }

    pub fn overview(&self, learner_id: &str, filter: &Filter) -> Result<Envelope<OverviewPayload>, ApiError> {
        self.overview_at(&*self.snapshot(learner_id)?, filter)
    }

    fn overview_at(&self, full: &Snapshot, filter: &Filter) -> Result<Envelope<OverviewPayload>, ApiError> {
        let data = Self::select(full, filter)?
            .map(|f| build_overview(self.oracle.as_ref(), full, &f, &self.config.caf))
            .transpose()?;
        Ok(Envelope::of(full, data))
    }

    pub fn corrections(
        &self,
        learner_id: &str,
        filter: &Filter,
        tab: Tab,
        uptake_enabled: bool,
    ) -> Result<Envelope<CorrectionPayload>, ApiError> {
        let full = self.snapshot(learner_id)?;
        let data = Self::select(&full, filter)?
            .map(|f| build_correction_heatmap(&self.analysis(&full), &f, tab, uptake_enabled));
        Ok(Envelope::of(&full, data))
    }

    pub fn suggestions(&self, learner_id: &str, filter: &Filter) -> Result<Envelope<SuggestionPayload>, ApiError> {
        self.suggestions_at(&*self.snapshot(learner_id)?, filter)
    }

    fn suggestions_at(&self, full: &Snapshot, filter: &Filter) -> Result<Envelope<SuggestionPayload>, ApiError> {
        let data = Self::select(full, filter)?.map(|f| aggregate_suggestions(&self.classifier, &f.sessions));
        Ok(Envelope::of(full, data))
    }

    /// The sentences behind one suggestion tile; a tutor without sentences there
    /// gets an empty cell.
    pub fn suggestion_cell(
        &self,
        learner_id: &str,
        filter: &Filter,
        category: FeedbackCategory,
        tutor_id: &str,
    ) -> Result<Envelope<SuggestionCell>, ApiError> {
        let full = self.snapshot(learner_id)?;
        let data = Self::select(&full, filter)?.map(|f| {
            aggregate_suggestions(&self.classifier, &f.sessions)
                .cell(category, tutor_id)
                .cloned()
                .unwrap_or_else(|| SuggestionCell { tutor_id: tutor_id.to_string(), count: 0, sentences: Vec::new() })
        });
        Ok(Envelope::of(&full, data))
    }

    /// A session outside the filter, or unknown to the learner, is an empty selection.
    pub fn transcript(
        &self,
        learner_id: &str,
        filter: &Filter,
        session_id: &str,
        subject: Option<&str>,
    ) -> Result<Envelope<TranscriptPayload>, ApiError> {
        let full = self.snapshot(learner_id)?;
        let filtered = Self::select(&full, filter)?;
        let session = filtered.as_ref().and_then(|f| f.sessions.iter().find(|s| s.session_id == session_id));
        let data = session
            .map(|s| {
                build_transcript(
                    self.oracle.as_ref(),
                    &self.analysis(&full),
                    s,
                    subject,
                    self.config.oracles.similarity_floor,
                )
            })
            .transpose()?;
        Ok(Envelope::of(&full, data))
    }

    /// Options for the filter panel; never filtered.
    pub fn filters(&self, learner_id: &str) -> Result<Envelope<FilterOptions>, ApiError> {
        let full = self.snapshot(learner_id)?;
        Ok(Envelope::of(&full, Some(filter_options(&full))))
    }

    /// Any learner view by its path below `/api/learners/{id}/` (`overview`,
    /// `corrections`, `suggestions`, `suggestions/{category}/{tutor}`,
    /// `transcript/{session}`, `filters`), as the canonical JSON body the HTTP
    /// route returns.
    pub fn view_json(
        &self,
        learner_id: &str,
        view: &str,
        params: &BTreeMap<String, String>,
    ) -> Result<String, ApiError> {
        let parts: Vec<&str> = view.trim_matches('/').split('/').collect();
        let filter = || parse_filter(params);
        match parts.as_slice() {
            ["overview"] => Ok(canonical_json(&self.overview(learner_id, &filter()?)?)),
            ["corrections"] => Ok(canonical_json(&self.corrections(
                learner_id,
                &filter()?,
                parse_tab(params)?,
                parse_uptake(params)?,
            )?)),
            ["suggestions"] => Ok(canonical_json(&self.suggestions(learner_id, &filter()?)?)),
            ["suggestions", category, tutor] => {
                let category = FeedbackCategory::parse(category)
                    .ok_or_else(|| ApiError::schema(format!("unknown suggestion category {category:?}")))?;
                Ok(canonical_json(&self.suggestion_cell(learner_id, &filter()?, category, tutor)?))
            }
            ["transcript", session] => {
                let subject = params.get("subject").map(String::as_str).filter(|s| !s.is_empty());
                Ok(canonical_json(&self.transcript(learner_id, &filter()?, session, subject)?))
            }
            ["filters"] => Ok(canonical_json(&self.filters(learner_id)?)),
            _ => Err(ApiError::schema(format!("unknown view {view:?}"))),
        }
    }

    /// The report document: the overview, the three correction tabs (uptake on)
    /// and the suggestions, each exactly as the matching HTTP response body, all
    /// read from one snapshot.
    pub fn report(
        &self,
        learner_id: &str,
        filter: &Filter,
        generated_at: chrono::DateTime<chrono::Utc>,
    ) -> Result<Value, ApiError> {
        let full = self.snapshot(learner_id)?;
        let filtered = Self::select(&full, filter)?;
        let analysis = filtered.as_ref().map(|_| self.analysis(&full));
        let mut corrections = serde_json::Map::new();
        for tab in Tab::ALL {
            let data = filtered.as_ref().zip(analysis.as_ref()).map(|(f, a)| build_correction_heatmap(a, f, tab, true));
            corrections
                .insert(tab.as_str().to_string(), serde_json::to_value(Envelope::of(&full, data)).expect("serializes"));
        }
        Ok(serde_json::json!({
            "learner_id": learner_id,
            "generated_at": generated_at.to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            "snapshot_version": full.version,
            "filter": filter,
            "config": self.config,
            "overview": serde_json::to_value(self.overview_at(&full, filter)?).expect("serializes"),
            "corrections": corrections,
            "suggestions": serde_json::to_value(self.suggestions_at(&full, filter)?).expect("serializes"),
        }))
    }
}
