#![allow(dead_code)]

pub mod classify;
pub mod corpus;
pub mod examples;
pub mod metrics;
pub mod parity;
pub mod props;
pub mod synth;

use std::path::PathBuf;

use rlens_core::oracles::tokenize;
use rlens_core::store::{Correction, CorrectionKind, Session, Speaker, Token, Turn, TutorScores, WrittenFeedback};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// Non-comment, non-empty TSV rows of a fixture file.
pub fn tsv(name: &str) -> Vec<Vec<String>> {
    std::fs::read_to_string(fixture(name))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect()
}

/// Tokens 200 ms apart, each 150 ms long, starting at `t0`.
pub fn timed(text: &str, t0: u64) -> Vec<Token> {
    tokenize(text)
        .into_iter()
        .enumerate()
        .map(|(i, text)| Token { text, start_ms: t0 + 200 * i as u64, end_ms: t0 + 200 * i as u64 + 150 })
        .collect()
}

pub fn learner(text: &str) -> Turn {
    Turn { speaker: Speaker::Learner, audio_ref: None, tokens: timed(text, 0) }
}

pub fn tutor(text: &str) -> Turn {
    Turn { speaker: Speaker::Tutor, audio_ref: None, tokens: timed(text, 0) }
}

pub fn correction(id: &str, kind: CorrectionKind, original: &str, corrected: &str) -> Correction {
    Correction {
        correction_id: id.into(),
        original_sentence: original.into(),
        corrected_sentence: corrected.into(),
        kind,
    }
}

pub fn session(id: &str, date: &str, tutor_id: &str, turns: Vec<Turn>) -> Session {
    Session {
        session_id: id.into(),
        learner_id: "L1".into(),
        tutor_id: tutor_id.into(),
        date: date.parse().unwrap(),
        topic: "daily life".into(),
        tutor_scores: TutorScores {
            entries: [("overall".to_string(), 7.0)].into_iter().collect(),
            scale_min: 0.0,
            scale_max: 10.0,
        },
        transcript: turns,
        feedback: WrittenFeedback::default(),
        session_index: 1,
    }
}

/// One session whose learner turns are `sentences`, each after a tutor prompt.
pub fn session_with(sentences: Vec<&str>) -> Session {
    let turns = sentences.into_iter().flat_map(|s| [tutor("Tell me more ."), learner(s)]).collect();
    session("s1", "2024-01-01", "T1", turns)
}
