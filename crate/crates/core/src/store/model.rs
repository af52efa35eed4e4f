use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub start_ms: u64,
    pub end_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Speaker {
    Learner,
    Tutor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Turn {
    pub speaker: Speaker,
    pub audio_ref: Option<String>,
    pub tokens: Vec<Token>,
}

impl Turn {
    pub fn texts(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.text.as_str()).collect()
    }

    pub fn is_learner(&self) -> bool {
        self.speaker == Speaker::Learner
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrectionKind {
    Grammar,
    Vocabulary,
    Fluency,
}

impl CorrectionKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "grammar" => Some(CorrectionKind::Grammar),
            "vocabulary" => Some(CorrectionKind::Vocabulary),
            "fluency" => Some(CorrectionKind::Fluency),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correction {
    pub correction_id: String,
    pub original_sentence: String,
    pub corrected_sentence: String,
    pub kind: CorrectionKind,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WrittenFeedback {
    pub overall_comments: Vec<String>,
    pub corrections: Vec<Correction>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TutorScores {
    pub entries: BTreeMap<String, f64>,
    pub scale_min: f64,
    pub scale_max: f64,
}

impl TutorScores {
    /// Mean of the entries rescaled to `[0, 100]`; `None` when there are no entries.
    pub fn rescaled_mean(&self) -> Option<f64> {
        if self.entries.is_empty() {
            return None;
        }
        let span = self.scale_max - self.scale_min;
        let sum: f64 = self.entries.values().map(|v| (v - self.scale_min) / span * 100.0).sum();
        Some(sum / self.entries.len() as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub session_id: String,
    pub learner_id: String,
    pub tutor_id: String,
    pub date: NaiveDate,
    pub topic: String,
    pub tutor_scores: TutorScores,
    pub transcript: Vec<Turn>,
    pub feedback: WrittenFeedback,
    /// Assigned by the store; 0 until ingested.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub session_index: u32,
}

fn is_zero(n: &u32) -> bool {
    *n == 0
}

impl Session {
    pub fn learner_turns(&self) -> impl Iterator<Item = (usize, &Turn)> {
        self.transcript.iter().enumerate().filter(|(_, t)| t.is_learner())
    }

    pub fn correction(&self, id: &str) -> Option<&Correction> {
        self.feedback.corrections.iter().find(|c| c.correction_id == id)
    }
}

/// Immutable, chronologically ordered view of one learner's history.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub learner_id: String,
    pub sessions: Vec<Session>,
    pub version: u64,
}

impl Snapshot {
    pub fn session(&self, session_id: &str) -> Option<&Session> {
        self.sessions.iter().find(|s| s.session_id == session_id)
    }
}
