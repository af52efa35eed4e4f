//! Schema and invariant checks for raw session documents.

use std::collections::{BTreeMap, HashSet};

use chrono::NaiveDate;
use serde_json::{Map, Value};
use unicode_normalization::UnicodeNormalization;

use super::model::*;
use super::StoreError;

type Obj = Map<String, Value>;

fn schema(path: impl Into<String>) -> StoreError {
    StoreError::Schema(path.into())
}

fn invariant(msg: impl Into<String>) -> StoreError {
    StoreError::Invariant(msg.into())
}

fn field<'a>(obj: &'a Obj, path: &str, key: &str) -> Result<&'a Value, StoreError> {
    obj.get(key).ok_or_else(|| schema(join(path, key)))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Obj, StoreError> {
    v.as_object().ok_or_else(|| schema(path))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, StoreError> {
    v.as_array().ok_or_else(|| schema(path))
}

fn string(obj: &Obj, path: &str, key: &str) -> Result<String, StoreError> {
    field(obj, path, key)?.as_str().map(|s| s.nfc().collect()).ok_or_else(|| schema(join(path, key)))
}

fn number(obj: &Obj, path: &str, key: &str) -> Result<f64, StoreError> {
    field(obj, path, key)?.as_f64().filter(|x| x.is_finite()).ok_or_else(|| schema(join(path, key)))
}

fn millis(obj: &Obj, path: &str, key: &str) -> Result<u64, StoreError> {
    field(obj, path, key)?.as_u64().ok_or_else(|| schema(join(path, key)))
}

/// Ids double as file names, so they are restricted to a portable character set.
fn id(obj: &Obj, path: &str, key: &str) -> Result<String, StoreError> {
    let s = string(obj, path, key)?;
    let ok = !s.is_empty()
        && !s.starts_with('.')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    if ok {
        Ok(s)
    } else {
        Err(schema(join(path, key)))
    }
}

fn validate_token(v: &Value, path: &str) -> Result<Token, StoreError> {
    let o = object(v, path)?;
    let token = Token {
        text: string(o, path, "text")?,
        start_ms: millis(o, path, "start_ms")?,
        end_ms: millis(o, path, "end_ms")?,
    };
    if token.text.trim().is_empty() {
        return Err(invariant(format!("{path}: empty token text")));
    }
    if token.end_ms < token.start_ms {
        return Err(invariant(format!("{path}: end_ms {} < start_ms {}", token.end_ms, token.start_ms)));
    }
    Ok(token)
}

fn validate_turn(v: &Value, path: &str) -> Result<Turn, StoreError> {
    let o = object(v, path)?;
    let speaker = match field(o, path, "speaker")?.as_str() {
        Some("learner") => Speaker::Learner,
        Some("tutor") => Speaker::Tutor,
        _ => return Err(schema(join(path, "speaker"))),
    };
    let audio_ref = match o.get("audio_ref") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(schema(join(path, "audio_ref"))),
    };
    let tpath = join(path, "tokens");
    let raw = array(field(o, path, "tokens")?, &tpath)?;
    if raw.is_empty() {
        return Err(invariant(format!("{tpath}: turn has no tokens")));
    }
    let tokens = raw
        .iter()
        .enumerate()
        .map(|(i, t)| validate_token(t, &format!("{tpath}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(i) = tokens.windows(2).position(|w| w[1].start_ms < w[0].start_ms) {
        return Err(invariant(format!("{tpath}[{}]: start_ms decreases", i + 1)));
    }
    Ok(Turn { speaker, audio_ref, tokens })
}

fn validate_scores(v: &Value, path: &str) -> Result<TutorScores, StoreError> {
    let o = object(v, path)?;
    let epath = join(path, "entries");
    let raw = object(field(o, path, "entries")?, &epath)?;
    let mut entries = BTreeMap::new();
    for (k, v) in raw {
        let x = v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| schema(join(&epath, k)))?;
        entries.insert(k.clone(), x);
    }
    let scores =
        TutorScores { entries, scale_min: number(o, path, "scale_min")?, scale_max: number(o, path, "scale_max")? };
    if scores.scale_min >= scores.scale_max {
        return Err(invariant(format!("{path}: scale_min must be below scale_max")));
    }
    if let Some((k, x)) = scores.entries.iter().find(|(_, x)| **x < scores.scale_min || **x > scores.scale_max) {
        return Err(invariant(format!("{epath}.{k}: {x} outside the score scale")));
    }
    Ok(scores)
}

fn validate_correction(v: &Value, path: &str) -> Result<Correction, StoreError> {
    let o = object(v, path)?;
    let c = Correction {
        correction_id: string(o, path, "correction_id")?,
        original_sentence: string(o, path, "original_sentence")?,
        corrected_sentence: string(o, path, "corrected_sentence")?,
        kind: field(o, path, "kind")?
            .as_str()
            .and_then(CorrectionKind::parse)
            .ok_or_else(|| schema(join(path, "kind")))?,
    };
    if c.correction_id.is_empty() {
        return Err(schema(join(path, "correction_id")));
    }
    if c.original_sentence.trim().is_empty() || c.corrected_sentence.trim().is_empty() {
        return Err(invariant(format!("{path}: correction sentences must be non-empty")));
    }
    Ok(c)
}

fn validate_feedback(v: &Value, path: &str) -> Result<WrittenFeedback, StoreError> {
    let o = object(v, path)?;
    let cpath = join(path, "overall_comments");
    let overall_comments = array(field(o, path, "overall_comments")?, &cpath)?
        .iter()
        .enumerate()
        .map(|(i, c)| c.as_str().map(|s| s.nfc().collect()).ok_or_else(|| schema(format!("{cpath}[{i}]"))))
        .collect::<Result<Vec<String>, _>>()?;
    let kpath = join(path, "corrections");
    let corrections = array(field(o, path, "corrections")?, &kpath)?
        .iter()
        .enumerate()
        .map(|(i, c)| validate_correction(c, &format!("{kpath}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut seen = HashSet::new();
    if let Some(dup) = corrections.iter().find(|c| !seen.insert(&c.correction_id)) {
        return Err(invariant(format!("{kpath}: duplicate correction_id {:?}", dup.correction_id)));
    }
    Ok(WrittenFeedback { overall_comments, corrections })
}

/// Checks a parsed session document against the schema and type invariants.
///
/// Text fields are normalized to NFC. The returned session has no index yet.
pub fn validate_session(raw: &Value) -> Result<Session, StoreError> {
    let o = object(raw, "$")?;
    let date_str = string(o, "", "date")?;
    let date = NaiveDate::parse_from_str(&date_str, "%Y-%m-%d").map_err(|_| schema("date"))?;
    let transcript = array(field(o, "", "transcript")?, "transcript")?
        .iter()
        .enumerate()
        .map(|(i, t)| validate_turn(t, &format!("transcript[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let session = Session {
        session_id: id(o, "", "session_id")?,
        learner_id: id(o, "", "learner_id")?,
        tutor_id: string(o, "", "tutor_id")?,
        date,
        topic: string(o, "", "topic")?,
        tutor_scores: validate_scores(field(o, "", "tutor_scores")?, "tutor_scores")?,
        transcript,
        feedback: validate_feedback(field(o, "", "feedback")?, "feedback")?,
        session_index: 0,
    };
    if session.tutor_id.is_empty() {
        return Err(schema("tutor_id"));
    }
    if session.transcript.is_empty() {
        return Err(invariant("transcript is empty"));
    }
    if !session.transcript.iter().any(Turn::is_learner) {
        return Err(invariant("transcript has no learner turn"));
    }
    Ok(session)
}

/// Parses and validates a session document from JSON text.
pub fn parse_session(text: &str) -> Result<Session, StoreError> {
    let raw: Value = serde_json::from_str(text).map_err(|e| StoreError::Json(e.to_string()))?;
    validate_session(&raw)
}
