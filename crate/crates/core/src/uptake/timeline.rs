use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::vocab::vocab_key;
use super::{
    classify_grammar_correction, detect_filler_words, detect_vocabulary_uptake, extract_expression_pairs, filler_key,
    filler_mentions, grammar_issues, grammar_key, RecordKind, Subject, UptakeConfig, UptakeRecord, FILLERS,
};
use crate::oracles::{GrammarCategory, LanguageOracle, OracleConfig};
use crate::store::{CorrectionKind, Snapshot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CellState {
    NotYetPointed,
    Count,
}

/// Detected counts for one session. Grammar and filler rows use `count`;
/// vocabulary rows use `missed` and `applied`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimelineCell {
    pub session_id: String,
    pub session_index: u32,
    pub state: CellState,
    pub count: u32,
    pub missed: u32,
    pub applied: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UptakeTimeline {
    pub key: String,
    pub subject: Subject,
    /// Session index of the first tutor mention (for a pair: its source session).
    pub first_pointed: Option<u32>,
    /// Grammar and fillers: every session. Pairs: only sessions after the source.
    pub cells: Vec<TimelineCell>,
    /// Tutor mentions per session index.
    pub pointings: BTreeMap<u32, u32>,
    pub records: Vec<UptakeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UptakeAnalysis {
    pub timelines: Vec<UptakeTimeline>,
    /// Corrections that could not be interpreted, e.g. `s3/c2: no content word`.
    pub diagnostics: Vec<String>,
}

impl UptakeAnalysis {
    pub fn timeline(&self, key: &str) -> Option<&UptakeTimeline> {
        self.timelines.iter().find(|t| t.key == key)
    }

    pub fn records(&self) -> impl Iterator<Item = &UptakeRecord> {
        self.timelines.iter().flat_map(|t| t.records.iter())
    }
}

fn cell(session_id: &str, session_index: u32, state: CellState) -> TimelineCell {
    TimelineCell { session_id: session_id.to_string(), session_index, state, count: 0, missed: 0, applied: 0 }
}

/// Builds every subject's timeline over the full history in `snapshot`.
pub fn build_uptake_timeline<O: LanguageOracle + ?Sized>(
    oracle: &O,
    snapshot: &Snapshot,
    oracle_cfg: &OracleConfig,
    cfg: &UptakeConfig,
) -> UptakeAnalysis {
    let mut diagnostics = Vec::new();
    let mut grammar_points: BTreeMap<GrammarCategory, BTreeMap<u32, u32>> = BTreeMap::new();
    let mut pairs: BTreeMap<String, (Subject, BTreeMap<u32, u32>, u32)> = BTreeMap::new();
    let mut filler_points: BTreeMap<&str, BTreeMap<u32, u32>> = BTreeMap::new();

    for s in &snapshot.sessions {
        let idx = s.session_index;
        for c in &s.feedback.corrections {
            match c.kind {
                CorrectionKind::Grammar => match classify_grammar_correction(oracle, c) {
                    Ok(cat) => *grammar_points.entry(cat).or_default().entry(idx).or_default() += 1,
                    Err(e) => diagnostics.push(format!("{}/{}: {e}", s.session_id, c.correction_id)),
                },
                CorrectionKind::Vocabulary => match extract_expression_pairs(oracle, c, &s.session_id, cfg) {
                    Ok(found) => {
                        for pair in found {
                            let key = vocab_key(oracle, &pair);
                            let entry = pairs
                                .entry(key)
                                .or_insert_with(|| (Subject::Vocabulary { pair }, BTreeMap::new(), idx));
                            *entry.1.entry(idx).or_default() += 1;
                        }
                    }
                    Err(e) => diagnostics.push(format!("{}/{}: {e}", s.session_id, c.correction_id)),
                },
                CorrectionKind::Fluency => {
                    for f in filler_mentions(&c.original_sentence) {
                        *filler_points.entry(f).or_default().entry(idx).or_default() += 1;
                    }
                }
            }
        }
    }

    let issues: Vec<_> = snapshot.sessions.iter().map(|s| grammar_issues(oracle, s, cfg.asr_tolerance)).collect();
    let fillers: Vec<_> = snapshot.sessions.iter().map(|s| detect_filler_words(oracle, s)).collect();

    let mut timelines = Vec::new();

    for (cat, points) in grammar_points {
        let first = *points.keys().next().expect("pointed at least once");
        let key = grammar_key(cat);
        let mut cells = Vec::new();
        let mut records = Vec::new();
        for (s, found) in snapshot.sessions.iter().zip(&issues) {
            if s.session_index < first {
                cells.push(cell(&s.session_id, s.session_index, CellState::NotYetPointed));
                continue;
            }
            let mut c = cell(&s.session_id, s.session_index, CellState::Count);
            for issue in found.iter().filter(|i| i.category == cat) {
                c.count += 1;
                records.push(UptakeRecord {
                    subject: key.clone(),
                    session_id: s.session_id.clone(),
                    session_index: s.session_index,
                    kind: RecordKind::ErrorOccurrence,
                    location: issue.location,
                    tooltip: issue.suggestion.clone(),
                });
            }
            cells.push(c);
        }
        timelines.push(UptakeTimeline {
            key,
            subject: Subject::Grammar { category: cat },
            first_pointed: Some(first),
            cells,
            pointings: points,
            records,
        });
    }

    for (key, (subject, points, source)) in pairs {
        let Subject::Vocabulary { pair } = &subject else { unreachable!() };
        let mut cells = Vec::new();
        let mut records = Vec::new();
        for s in snapshot.sessions.iter().filter(|s| s.session_index > source) {
            let found = detect_vocabulary_uptake(oracle, s, pair, oracle_cfg);
            let mut c = cell(&s.session_id, s.session_index, CellState::Count);
            c.missed = found.iter().filter(|r| r.kind == RecordKind::MissedApplication).count() as u32;
            c.applied = found.iter().filter(|r| r.kind == RecordKind::CorrectApplication).count() as u32;
            cells.push(c);
            records.extend(found.into_iter().map(|r| UptakeRecord { subject: key.clone(), ..r }));
        }
        timelines.push(UptakeTimeline { key, subject, first_pointed: Some(source), cells, pointings: points, records });
    }

    for filler in FILLERS {
        let points = filler_points.remove(filler).unwrap_or_default();
        let detected: usize = fillers.iter().map(|f| f[filler].count).sum();
        if detected == 0 && points.is_empty() {
            continue;
        }
        let key = filler_key(filler);
        let mut cells = Vec::new();
        let mut records = Vec::new();
        for (s, found) in snapshot.sessions.iter().zip(&fillers) {
            let hits = &found[filler];
            let mut c = cell(&s.session_id, s.session_index, CellState::Count);
            c.count = hits.count as u32;
            cells.push(c);
            records.extend(hits.locations.iter().map(|&location| UptakeRecord {
                subject: key.clone(),
                session_id: s.session_id.clone(),
                session_index: s.session_index,
                kind: RecordKind::FillerOccurrence,
                location,
                tooltip: Some(format!("filler \"{filler}\"")),
            }));
        }
        timelines.push(UptakeTimeline {
            key,
            subject: Subject::Filler { filler: filler.to_string() },
            first_pointed: points.keys().next().copied(),
            cells,
            pointings: points,
            records,
        });
    }

    UptakeAnalysis { timelines, diagnostics }
}
