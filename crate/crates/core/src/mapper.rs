//! Places tutor feedback and uptake records inside a session transcript.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oracles::{split_token_sentences, LanguageOracle};
use crate::store::{Correction, Session};
use crate::uptake::{Location, RecordKind, UptakeRecord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapperError {
    #[error("record {subject} points outside session {session_id}: turn {turn_index}, tokens {begin}..{end}")]
    DanglingRecord { subject: String, session_id: String, turn_index: usize, begin: usize, end: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnchorStatus {
    Mapped,
    Unmapped,
}

/// Where a sentence sits in a transcript. Unmapped anchors carry no position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptAnchor {
    pub session_id: String,
    pub turn_index: Option<usize>,
    pub span: Option<(usize, usize)>,
    pub score: f64,
    pub status: AnchorStatus,
}

/// Best-matching learner sentence for the correction's original sentence.
/// Ties keep the earliest sentence; a best score under `floor` leaves it unmapped.
pub fn locate_feedback_sentence<O: LanguageOracle + ?Sized>(
    oracle: &O,
    correction: &Correction,
    session: &Session,
    floor: f64,
) -> TranscriptAnchor {
    let mut best: Option<(f64, usize, (usize, usize))> = None;
    for (turn_index, turn) in session.learner_turns() {
        let texts = turn.texts();
        for range in split_token_sentences(&texts) {
            let sentence = texts[range.clone()].join(" ");
            let score = oracle.similarity(&sentence, &correction.original_sentence).unwrap_or(0.0);
            if best.is_none_or(|(b, _, _)| score > b) {
                best = Some((score, turn_index, (range.start, range.end)));
            }
        }
    }
    match best {
        Some((score, turn_index, span)) if score >= floor => TranscriptAnchor {
            session_id: session.session_id.clone(),
            turn_index: Some(turn_index),
            span: Some(span),
            score,
            status: AnchorStatus::Mapped,
        },
        found => TranscriptAnchor {
            session_id: session.session_id.clone(),
            turn_index: None,
            span: None,
            score: found.map_or(0.0, |(s, _, _)| s),
            status: AnchorStatus::Unmapped,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Green,
}

impl Color {
    pub fn of(kind: RecordKind) -> Color {
        match kind {
            RecordKind::CorrectApplication => Color::Green,
            RecordKind::MissedApplication | RecordKind::ErrorOccurrence | RecordKind::FillerOccurrence => Color::Red,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HighlightSpan {
    pub anchor: TranscriptAnchor,
    pub color: Color,
    pub subject: String,
    pub kind: RecordKind,
    /// The corrected expression, shown on click.
    pub tooltip: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScrollbarMark {
    pub turn_index: usize,
    pub begin: usize,
    pub color: Color,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Highlights {
    pub spans: Vec<HighlightSpan>,
    pub scrollbar_marks: Vec<ScrollbarMark>,
}

/// One span per record, in record order; marks sorted by position.
pub fn highlight_spans(session: &Session, records: &[UptakeRecord]) -> Result<Highlights, MapperError> {
    let mut out = Highlights::default();
    for r in records {
        let Location { turn_index, span: (begin, end) } = r.location;
        let in_bounds = session.transcript.get(turn_index).is_some_and(|t| begin < end && end <= t.tokens.len());
        if !in_bounds || r.session_id != session.session_id {
            return Err(MapperError::DanglingRecord {
                subject: r.subject.clone(),
                session_id: r.session_id.clone(),
                turn_index,
                begin,
                end,
            });
        }
        let color = Color::of(r.kind);
        out.spans.push(HighlightSpan {
            anchor: TranscriptAnchor {
                session_id: session.session_id.clone(),
                turn_index: Some(turn_index),
                span: Some((begin, end)),
                score: 1.0,
                status: AnchorStatus::Mapped,
            },
            color,
            subject: r.subject.clone(),
            kind: r.kind,
            tooltip: r.tooltip.clone(),
        });
        out.scrollbar_marks.push(ScrollbarMark { turn_index, begin, color });
    }
    out.scrollbar_marks.sort_by_key(|m| (m.turn_index, m.begin, m.color));
    Ok(out)
}
