use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::trend::{predict_severity, rank_issues, RankKey};
use crate::store::Snapshot;
use crate::uptake::{CellState, Subject, Tab, UptakeAnalysis, UptakeTimeline};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionColumn {
    pub session_id: String,
    pub session_index: u32,
    pub date: NaiveDate,
    pub tutor_id: String,
    pub topic: String,
}

impl SessionColumn {
    pub fn of(s: &crate::store::Session) -> Self {
        SessionColumn {
            session_id: s.session_id.clone(),
            session_index: s.session_index,
            date: s.date,
            tutor_id: s.tutor_id.clone(),
            topic: s.topic.clone(),
        }
    }
}

/// One tile. Grammar and fluency tiles use `count`; vocabulary tiles use
/// `green` (applied) and `red` (missed). Not-yet-pointed tiles carry only the state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatmapCell {
    pub session_id: String,
    pub session_index: u32,
    pub state: CellState,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intensity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub green: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub red: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub green_intensity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub red_intensity: Option<f64>,
}

impl HeatmapCell {
    fn blank(session_id: &str, session_index: u32, state: CellState) -> Self {
        HeatmapCell {
            session_id: session_id.to_string(),
            session_index,
            state,
            count: None,
            intensity: None,
            green: None,
            red: None,
            green_intensity: None,
            red_intensity: None,
        }
    }

    /// Records behind the tile: count, or applied + missed.
    pub fn total(&self) -> u32 {
        self.count.unwrap_or(0) + self.green.unwrap_or(0) + self.red.unwrap_or(0)
    }

    /// The value severity is fitted on: count, or missed.
    fn trend_value(&self) -> Option<u32> {
        (self.state == CellState::Count).then(|| self.count.or(self.red).unwrap_or(0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatmapRow {
    pub label: String,
    pub subject: Subject,
    pub first_pointed: Option<u32>,
    pub rank: RankKey,
    pub cells: Vec<HeatmapCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionPayload {
    pub tab: Tab,
    pub uptake_enabled: bool,
    pub sessions: Vec<SessionColumn>,
    /// Ranked best first.
    pub rows: Vec<HeatmapRow>,
    /// Largest tile value in the grid; intensities are relative to it.
    pub max_count: u32,
}

fn tile(t: &UptakeTimeline, session_id: &str, index: u32, uptake: bool) -> HeatmapCell {
    let pointed = t.pointings.get(&index).copied().unwrap_or(0);
    let detected = t.cells.iter().find(|c| c.session_index == index);
    let before_first = t.first_pointed.is_none_or(|f| index < f);
    match &t.subject {
        Subject::Grammar { .. } if before_first => HeatmapCell::blank(session_id, index, CellState::NotYetPointed),
        Subject::Vocabulary { .. } if before_first => HeatmapCell::blank(session_id, index, CellState::NotYetPointed),
        Subject::Vocabulary { .. } => {
            let (red, green) = match (uptake, detected) {
                (true, Some(c)) => (c.missed, c.applied),
                (true, None) => (0, 0),
                (false, _) => (pointed, 0),
            };
            HeatmapCell {
                green: Some(green),
                red: Some(red),
                ..HeatmapCell::blank(session_id, index, CellState::Count)
            }
        }
        Subject::Grammar { .. } | Subject::Filler { .. } => {
            let count = if uptake { detected.map_or(0, |c| c.count) } else { pointed };
            HeatmapCell { count: Some(count), ..HeatmapCell::blank(session_id, index, CellState::Count) }
        }
    }
}

/// The correction grid of one tab over the filtered sessions.
///
/// With uptake on, tiles hold what the detectors found; with it off, tiles hold
/// only what tutors pointed out (vocabulary: each pointing is one missed use).
pub fn build_correction_heatmap(
    analysis: &UptakeAnalysis,
    filtered: &Snapshot,
    tab: Tab,
    uptake_enabled: bool,
) -> CorrectionPayload {
    let mut rows: Vec<HeatmapRow> = analysis
        .timelines
        .iter()
        .filter(|t| t.subject.tab() == tab)
        .filter_map(|t| {
            let cells: Vec<HeatmapCell> =
                filtered.sessions.iter().map(|s| tile(t, &s.session_id, s.session_index, uptake_enabled)).collect();
            if cells.iter().all(|c| c.state == CellState::NotYetPointed) {
                return None;
            }
            let series: Vec<(u32, f64)> =
                cells.iter().filter_map(|c| Some((c.session_index, c.trend_value()? as f64))).collect();
            let rank = RankKey {
                key: t.key.clone(),
                severity: predict_severity(&series).unwrap_or(0.0),
                total: cells.iter().map(HeatmapCell::total).sum(),
                latest: cells.iter().filter(|c| c.total() > 0).map(|c| c.session_index).max().unwrap_or(0),
            };
            Some(HeatmapRow {
                label: t.subject.label(),
                subject: t.subject.clone(),
                first_pointed: t.first_pointed,
                rank,
                cells,
            })
        })
        .collect();
    rank_issues(&mut rows, |r| &r.rank, tab == Tab::Fluency);

    let max_count =
        rows.iter().flat_map(|r| &r.cells).flat_map(|c| [c.count, c.green, c.red]).flatten().max().unwrap_or(0);
    let scale = |v: Option<u32>| v.map(|v| if max_count == 0 { 0.0 } else { v as f64 / max_count as f64 });
    for c in rows.iter_mut().flat_map(|r| r.cells.iter_mut()) {
        c.intensity = scale(c.count);
        c.green_intensity = scale(c.green);
        c.red_intensity = scale(c.red);
    }

    CorrectionPayload {
        tab,
        uptake_enabled,
        sessions: filtered.sessions.iter().map(SessionColumn::of).collect(),
        rows,
        max_count,
    }
}
