//! View payloads: filtering, trends, severity ranking, overview and heatmaps.

mod filter;
mod heatmap;
mod overview;
mod trend;

use std::collections::BTreeSet;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mapper::{highlight_spans, locate_feedback_sentence, Highlights, MapperError, TranscriptAnchor};
use crate::oracles::LanguageOracle;
use crate::store::{CorrectionKind, Session, Snapshot, Turn};
use crate::uptake::UptakeAnalysis;

pub use filter::{apply_filter, Filter};
pub use heatmap::{build_correction_heatmap, CorrectionPayload, HeatmapCell, HeatmapRow, SessionColumn};
pub use overview::{build_overview, tutor_segments, OverviewPayload, OverviewPoint, Shade, Trend, TutorSegment};
pub use trend::{fit_ols, frequency_order, predict_severity, rank_issues, severity_order, Line, RankKey};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error("no points to fit")]
    EmptyInput,
    #[error("the filter selects no session")]
    EmptySelection,
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error(transparent)]
    Mapper(#[from] MapperError),
}

/// What the filter panel can offer for one learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterOptions {
    pub tutors: Vec<String>,
    pub topics: Vec<String>,
    pub date_range: Option<(NaiveDate, NaiveDate)>,
    pub session_range: Option<(u32, u32)>,
    pub sessions: Vec<SessionColumn>,
}

pub fn filter_options(snapshot: &Snapshot) -> FilterOptions {
    let s = &snapshot.sessions;
    let tutors: BTreeSet<_> = s.iter().map(|s| s.tutor_id.clone()).collect();
    let topics: BTreeSet<_> = s.iter().map(|s| s.topic.clone()).collect();
    let dates = s.iter().map(|s| s.date);
    let indices = s.iter().map(|s| s.session_index);
    FilterOptions {
        tutors: tutors.into_iter().collect(),
        topics: topics.into_iter().collect(),
        date_range: dates.clone().min().zip(dates.max()),
        session_range: indices.clone().min().zip(indices.max()),
        sessions: s.iter().map(SessionColumn::of).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionAnchor {
    pub correction_id: String,
    pub kind: CorrectionKind,
    pub original_sentence: String,
    pub corrected_sentence: String,
    pub anchor: TranscriptAnchor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptPayload {
    pub session: SessionColumn,
    pub subject: Option<String>,
    pub transcript: Vec<Turn>,
    pub highlights: Highlights,
    pub corrections: Vec<CorrectionAnchor>,
}

/// Transcript of one session with its uptake highlights (optionally only one
/// subject's) and the tutor's corrections anchored to learner sentences.
pub fn build_transcript<O: LanguageOracle + ?Sized>(
    oracle: &O,
    analysis: &UptakeAnalysis,
    session: &Session,
    subject: Option<&str>,
    similarity_floor: f64,
) -> Result<TranscriptPayload, AnalyticsError> {
    let records: Vec<_> = analysis
        .records()
        .filter(|r| r.session_id == session.session_id)
        .filter(|r| subject.is_none_or(|k| r.subject == k))
        .cloned()
        .collect();
    let highlights = highlight_spans(session, &records)?;
    let corrections = session
        .feedback
        .corrections
        .iter()
        .map(|c| CorrectionAnchor {
            correction_id: c.correction_id.clone(),
            kind: c.kind,
            original_sentence: c.original_sentence.clone(),
            corrected_sentence: c.corrected_sentence.clone(),
            anchor: locate_feedback_sentence(oracle, c, session, similarity_floor),
        })
        .collect();
    Ok(TranscriptPayload {
        session: SessionColumn::of(session),
        subject: subject.map(str::to_string),
        transcript: session.transcript.clone(),
        highlights,
        corrections,
    })
}
