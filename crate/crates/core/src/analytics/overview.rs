use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::trend::{fit_ols, Line};
use super::AnalyticsError;
use crate::caf::{score_history, CafConfig, CafScores};
use crate::oracles::LanguageOracle;
use crate::store::Snapshot;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverviewPoint {
    pub session_id: String,
    pub session_index: u32,
    pub date: NaiveDate,
    pub tutor_id: String,
    pub topic: String,
    /// Mean rubric entry on a 0–100 scale.
    pub tutor_score: Option<f64>,
    pub computed: CafScores,
    /// The composite on a 0–100 scale, the line drawn against the tutor score.
    pub computed_score: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shade {
    White,
    Grey,
}

/// A maximal run of consecutive sessions with the same tutor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TutorSegment {
    pub tutor_id: String,
    pub first_index: u32,
    pub last_index: u32,
    pub sessions: usize,
    pub shade: Shade,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trend {
    pub tutor_line: Option<Line>,
    pub computed_line: Option<Line>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverviewPayload {
    pub points: Vec<OverviewPoint>,
    pub tutor_segments: Vec<TutorSegment>,
    pub gaps_days: Vec<i64>,
    pub trend: Trend,
}

pub fn tutor_segments<'a>(sessions: impl IntoIterator<Item = (u32, &'a str)>) -> Vec<TutorSegment> {
    let mut out: Vec<TutorSegment> = Vec::new();
    for (index, tutor) in sessions {
        match out.last_mut() {
            Some(seg) if seg.tutor_id == tutor => {
                seg.last_index = index;
                seg.sessions += 1;
            }
            _ => {
                let shade = if out.len().is_multiple_of(2) { Shade::White } else { Shade::Grey };
                out.push(TutorSegment {
                    tutor_id: tutor.to_string(),
                    first_index: index,
                    last_index: index,
                    sessions: 1,
                    shade,
                });
            }
        }
    }
    out
}

fn trend_line(points: &[OverviewPoint], y: impl Fn(&OverviewPoint) -> Option<f64>) -> Option<Line> {
    let xy: Vec<(f64, f64)> = points.iter().filter_map(|p| Some((p.session_index as f64, y(p)?))).collect();
    fit_ols(&xy).ok()
}

/// `full` is the learner's whole history, used to score sessions; `filtered` selects
/// which of them appear.
pub fn build_overview<O: LanguageOracle + ?Sized>(
    oracle: &O,
    full: &Snapshot,
    filtered: &Snapshot,
    caf: &CafConfig,
) -> Result<OverviewPayload, AnalyticsError> {
    if filtered.sessions.is_empty() {
        return Err(AnalyticsError::EmptySelection);
    }
    let scores = score_history(oracle, full, caf);
    let points: Vec<OverviewPoint> = filtered
        .sessions
        .iter()
        .map(|s| {
            let computed = full
                .sessions
                .iter()
                .position(|f| f.session_id == s.session_id)
                .map(|i| scores[i].clone())
                .expect("filtered sessions come from the full history");
            OverviewPoint {
                session_id: s.session_id.clone(),
                session_index: s.session_index,
                date: s.date,
                tutor_id: s.tutor_id.clone(),
                topic: s.topic.clone(),
                tutor_score: s.tutor_scores.rescaled_mean(),
                computed_score: computed.composite.map(|c| c * 100.0),
                computed,
            }
        })
        .collect();
    let gaps_days = points.windows(2).map(|w| (w[1].date - w[0].date).num_days()).collect();
    let tutor_segments = tutor_segments(points.iter().map(|p| (p.session_index, p.tutor_id.as_str())));
    let trend = Trend {
        tutor_line: trend_line(&points, |p| p.tutor_score),
        computed_line: trend_line(&points, |p| p.computed_score),
    };
    Ok(OverviewPayload { points, tutor_segments, gaps_days, trend })
}
