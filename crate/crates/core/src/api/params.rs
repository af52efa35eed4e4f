use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;

use super::{ApiError, ErrorCode};
use crate::analytics::Filter;
use crate::uptake::Tab;

/// Query parameters (and CLI flags) that build a [`Filter`].
pub const FILTER_PARAMS: [&str; 5] = ["tutors", "topics", "from", "to", "sessions"];

fn list(v: &str) -> Option<BTreeSet<String>> {
    let items: BTreeSet<String> = v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect();
    (!items.is_empty()).then_some(items)
}

fn date(name: &str, v: &str) -> Result<NaiveDate, ApiError> {
    NaiveDate::parse_from_str(v.trim(), "%Y-%m-%d")
        .map_err(|_| ApiError::schema(format!("{name}: expected YYYY-MM-DD, got {v:?}")))
}

fn index(v: &str) -> Result<u32, ApiError> {
    v.trim().parse().map_err(|_| ApiError::schema(format!("sessions: expected a session index, got {v:?}")))
}

/// `tutors=a,b`, `topics=x`, `from=YYYY-MM-DD`, `to=YYYY-MM-DD`, `sessions=3-7` (or `sessions=4`).
/// Empty values are no constraint; one-sided dates leave the other side open.
pub fn parse_filter(params: &BTreeMap<String, String>) -> Result<Filter, ApiError> {
    let get = |k: &str| params.get(k).map(String::as_str).filter(|v| !v.trim().is_empty());
    let from = get("from").map(|v| date("from", v)).transpose()?;
    let to = get("to").map(|v| date("to", v)).transpose()?;
    let session_range = get("sessions")
        .map(|v| match v.split_once('-') {
            Some((a, b)) => Ok((index(a)?, index(b)?)),
            None => index(v).map(|i| (i, i)),
        })
        .transpose()?;
    let filter = Filter {
        tutors: get("tutors").and_then(list),
        topics: get("topics").and_then(list),
        date_range: match (from, to) {
            (None, None) => None,
            (a, b) => Some((a.unwrap_or(NaiveDate::MIN), b.unwrap_or(NaiveDate::MAX))),
        },
        session_range,
    };
    filter.validate().map_err(|e| ApiError::new(ErrorCode::InvalidRange, e.to_string()))?;
    Ok(filter)
}

/// `tab`, defaulting to grammar.
pub fn parse_tab(params: &BTreeMap<String, String>) -> Result<Tab, ApiError> {
    let v = params.get("tab").map_or("grammar", String::as_str);
    Tab::parse(v).ok_or_else(|| ApiError::schema(format!("tab: expected grammar, vocabulary or fluency, got {v:?}")))
}

/// `uptake=on|off`, defaulting to on.
pub fn parse_uptake(params: &BTreeMap<String, String>) -> Result<bool, ApiError> {
    match params.get("uptake").map_or("on", String::as_str) {
        "on" => Ok(true),
        "off" => Ok(false),
        v => Err(ApiError::schema(format!("uptake: expected on or off, got {v:?}"))),
    }
}
