use std::collections::BTreeSet;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::AnalyticsError;
use crate::store::{Session, Snapshot};

/// Session selection. Every present field must hold; absent fields do not constrain.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Filter {
    pub tutors: Option<BTreeSet<String>>,
    pub topics: Option<BTreeSet<String>>,
    /// Inclusive.
    pub date_range: Option<(NaiveDate, NaiveDate)>,
    /// Inclusive session indices.
    pub session_range: Option<(u32, u32)>,
}

impl Filter {
    pub fn validate(&self) -> Result<(), AnalyticsError> {
        if let Some((from, to)) = self.date_range {
            if from > to {
                return Err(AnalyticsError::InvalidRange(format!("date range {from} > {to}")));
            }
        }
        if let Some((a, b)) = self.session_range {
            if a > b {
                return Err(AnalyticsError::InvalidRange(format!("session range {a} > {b}")));
            }
        }
        Ok(())
    }

    pub fn matches(&self, s: &Session) -> bool {
        self.tutors.as_ref().is_none_or(|t| t.contains(&s.tutor_id))
            && self.topics.as_ref().is_none_or(|t| t.contains(&s.topic))
            && self.date_range.is_none_or(|(from, to)| from <= s.date && s.date <= to)
            && self.session_range.is_none_or(|(a, b)| a <= s.session_index && s.session_index <= b)
    }

    /// The filter whose matches are exactly the sessions matching both.
    /// Disjoint ranges turn into an empty tutor set, which matches nothing.
    pub fn and(&self, other: &Filter) -> Filter {
        fn sets(a: &Option<BTreeSet<String>>, b: &Option<BTreeSet<String>>) -> Option<BTreeSet<String>> {
            match (a, b) {
                (Some(a), Some(b)) => Some(a.intersection(b).cloned().collect()),
                (a, b) => a.clone().or_else(|| b.clone()),
            }
        }
        fn ranges<T: Ord + Copy>(a: Option<(T, T)>, b: Option<(T, T)>) -> Result<Option<(T, T)>, ()> {
            match (a, b) {
                (Some(a), Some(b)) => {
                    let r = (a.0.max(b.0), a.1.min(b.1));
                    if r.0 <= r.1 {
                        Ok(Some(r))
                    } else {
                        Err(())
                    }
                }
                (a, b) => Ok(a.or(b)),
            }
        }
        let mut out = Filter {
            tutors: sets(&self.tutors, &other.tutors),
            topics: sets(&self.topics, &other.topics),
            date_range: self.date_range.or(other.date_range),
            session_range: self.session_range.or(other.session_range),
        };
        match (ranges(self.date_range, other.date_range), ranges(self.session_range, other.session_range)) {
            (Ok(d), Ok(r)) => {
                out.date_range = d;
                out.session_range = r;
            }
            _ => out.tutors = Some(BTreeSet::new()),
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        *self == Filter::default()
    }
}

/// The matching sessions, in their original order and with their original indices.
pub fn apply_filter(snapshot: &Snapshot, filter: &Filter) -> Result<Snapshot, AnalyticsError> {
    filter.validate()?;
    Ok(Snapshot {
        learner_id: snapshot.learner_id.clone(),
        sessions: snapshot.sessions.iter().filter(|s| filter.matches(s)).cloned().collect(),
        version: snapshot.version,
    })
}
