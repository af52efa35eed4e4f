//! Feedback uptake: what the tutor pointed out, and whether it recurs or is applied
//! in the learner's later sessions.

pub mod diff;
mod fluency;
mod grammar;
mod timeline;
mod vocab;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oracles::GrammarCategory;

pub use fluency::{detect_filler_words, filler_mentions, FillerCount, FILLERS};
pub use grammar::{classify_grammar_correction, count_grammar_errors, grammar_issues, ErrorCount, LocatedIssue};
pub use timeline::{build_uptake_timeline, CellState, TimelineCell, UptakeAnalysis, UptakeTimeline};
pub use vocab::{detect_vocabulary_uptake, extract_expression_pair, extract_expression_pairs, vocab_key};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UptakeError {
    #[error("original and corrected sentences are identical")]
    NoEditFound,
    #[error("original and corrected sentences do not differ")]
    NoDifference,
    #[error("the edit holds no content word")]
    NoContentWord,
    #[error("correction kind {0:?} does not fit this operation")]
    WrongKind(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Source {
    pub session_id: String,
    pub correction_id: String,
}

/// Original and suggested expressions extracted from one vocabulary correction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpressionPair {
    pub original_expr: Vec<String>,
    pub suggested_expr: Vec<String>,
    /// Last content word of each expression; the word that gets masked.
    pub original_head: String,
    pub suggested_head: String,
    pub source: Source,
}

impl ExpressionPair {
    pub fn original_text(&self) -> String {
        self.original_expr.join(" ")
    }

    pub fn suggested_text(&self) -> String {
        self.suggested_expr.join(" ")
    }
}

/// Position in a transcript: turn and half-open token range inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Location {
    pub turn_index: usize,
    pub span: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    ErrorOccurrence,
    MissedApplication,
    CorrectApplication,
    FillerOccurrence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tab {
    Grammar,
    Vocabulary,
    Fluency,
}

impl Tab {
    pub const ALL: [Tab; 3] = [Tab::Grammar, Tab::Vocabulary, Tab::Fluency];

    pub fn as_str(self) -> &'static str {
        match self {
            Tab::Grammar => "grammar",
            Tab::Vocabulary => "vocabulary",
            Tab::Fluency => "fluency",
        }
    }

    pub fn parse(s: &str) -> Option<Tab> {
        Tab::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

/// What a timeline row tracks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Subject {
    Grammar { category: GrammarCategory },
    Vocabulary { pair: ExpressionPair },
    Filler { filler: String },
}

impl Subject {
    pub fn tab(&self) -> Tab {
        match self {
            Subject::Grammar { .. } => Tab::Grammar,
            Subject::Vocabulary { .. } => Tab::Vocabulary,
            Subject::Filler { .. } => Tab::Fluency,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Subject::Grammar { category } => category.as_str().to_string(),
            Subject::Vocabulary { pair } => {
                format!("{} -> {}", pair.original_text(), pair.suggested_text())
            }
            Subject::Filler { filler } => filler.clone(),
        }
    }
}

pub fn grammar_key(category: GrammarCategory) -> String {
    format!("grammar:{category}")
}

pub fn filler_key(filler: &str) -> String {
    format!("filler:{filler}")
}

/// One detected event in a learner turn.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UptakeRecord {
    pub subject: String,
    pub session_id: String,
    pub session_index: u32,
    pub kind: RecordKind,
    pub location: Location,
    /// What the learner should say instead, when known.
    pub tooltip: Option<String>,
}

/// Tunables under `uptake.*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UptakeConfig {
    /// Apply spoken-language tolerance before counting grammar errors.
    pub asr_tolerance: bool,
    /// Matched tokens allowed between two edits that still form one expression.
    pub merge_gap: usize,
}

impl Default for UptakeConfig {
    fn default() -> Self {
        UptakeConfig { asr_tolerance: true, merge_gap: 1 }
    }
}
