//! The three worked examples, each returning a description of any deviation.

use std::time::{Duration, Instant};

use rlens_core::analytics::Filter;
use rlens_core::api::{canonical_json, Engine};
use rlens_core::config::Config;
use rlens_core::oracles::{baseline_oracle, OracleConfig};
use rlens_core::store::{CorrectionKind, SessionStore};
use rlens_core::uptake::{detect_vocabulary_uptake, extract_expression_pair, RecordKind, Tab, UptakeConfig};

use super::{correction, learner, session, tutor};

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    (took < limit).then_some(()).ok_or(format!("took {took:?}"))
}

pub fn expression_pair() -> Result<(), String> {
    let start = Instant::now();
    let o = baseline_oracle();
    let c = correction(
        "c1",
        CorrectionKind::Vocabulary,
        "She always tries to think positively.",
        "She is always so optimistic.",
    );
    let p = extract_expression_pair(o.as_ref(), &c, "s1", &UptakeConfig::default()).map_err(|e| e.to_string())?;
    let got = (p.original_text(), p.suggested_text());
    if got != ("think positively".to_string(), "optimistic".to_string()) {
        return Err(format!("got {got:?}"));
    }
    within(Duration::from_secs(1), start)
}

pub fn request_require() -> Result<(), String> {
    let start = Instant::now();
    let o = baseline_oracle();
    let c = correction(
        "c1",
        CorrectionKind::Vocabulary,
        "The position requests a lot of patience.",
        "The position requires a lot of patience.",
    );
    let pair = extract_expression_pair(o.as_ref(), &c, "s1", &UptakeConfig::default()).map_err(|e| e.to_string())?;
    for (text, want) in [
        ("The job requests at least two years of related experience.", RecordKind::MissedApplication),
        ("This document requires your signature.", RecordKind::CorrectApplication),
    ] {
        let mut s = session("s2", "2024-01-08", "T1", vec![learner(text)]);
        s.session_index = 2;
        let kinds: Vec<RecordKind> =
            detect_vocabulary_uptake(o.as_ref(), &s, &pair, &OracleConfig::default()).iter().map(|r| r.kind).collect();
        if kinds != [want] {
            return Err(format!("{text}: {kinds:?}"));
        }
    }
    within(Duration::from_secs(1), start)
}

/// give → provide pointed out in one session; the next uses "provides" once and
/// "gives" twice where "provides" fits.
pub fn vocabulary_cell() -> Result<String, String> {
    let engine = Engine::new(SessionStore::in_memory(), Config::default()).map_err(|e| e.to_string())?;
    let mut first = session(
        "s35",
        "2024-03-01",
        "T1",
        vec![tutor("What does your company offer ?"), learner("The company gives free lunch .")],
    );
    first.feedback.corrections.push(correction(
        "c1",
        CorrectionKind::Vocabulary,
        "The company gives free lunch.",
        "The company provides free lunch.",
    ));
    let second = session(
        "s36",
        "2024-03-08",
        "T1",
        vec![
            tutor("Tell me about your trip ."),
            learner("The hotel gives free breakfast ."),
            learner("The school provides many classes ."),
            learner("The website gives useful tips ."),
        ],
    );
    for s in [first, second] {
        engine.store().ingest(s).map_err(|e| e.to_string())?;
    }
    let view = engine.corrections("L1", &Filter::default(), Tab::Vocabulary, true).map_err(|e| e.to_string())?;
    let data = view.data.ok_or("empty selection")?;
    let row =
        data.rows.iter().find(|r| r.rank.key.contains("give") && r.rank.key.contains("provide")).ok_or_else(|| {
            format!("no give/provide row in {:?}", data.rows.iter().map(|r| &r.rank.key).collect::<Vec<_>>())
        })?;
    let cell = row.cells.iter().find(|c| c.session_id == "s36").ok_or("no s36 cell")?;
    let json = canonical_json(cell);
    if json.contains("\"green\":1,") && json.contains("\"red\":2,") {
        Ok(json)
    } else {
        Err(json)
    }
}
