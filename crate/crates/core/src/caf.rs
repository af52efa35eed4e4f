//! Complexity (MTLD), accuracy (error-free C-units) and fluency (mean length of run).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oracles::{is_punct, split_token_sentences, LanguageOracle};
use crate::store::{Session, Snapshot, Turn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CafError {
    #[error("no word tokens")]
    EmptyInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MtldConfig {
    pub ttr_threshold: f64,
}

impl Default for MtldConfig {
    fn default() -> Self {
        MtldConfig { ttr_threshold: 0.72 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FluencyConfig {
    pub pause_threshold_ms: u64,
}

impl Default for FluencyConfig {
    fn default() -> Self {
        FluencyConfig { pause_threshold_ms: 250 }
    }
}

/// Config-file view (`caf.ttr_threshold`, `caf.pause_ms`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CafConfig {
    pub ttr_threshold: f64,
    pub pause_ms: u64,
}

impl Default for CafConfig {
    fn default() -> Self {
        CafConfig {
            ttr_threshold: MtldConfig::default().ttr_threshold,
            pause_ms: FluencyConfig::default().pause_threshold_ms,
        }
    }
}

impl CafConfig {
    pub fn mtld(&self) -> MtldConfig {
        MtldConfig { ttr_threshold: self.ttr_threshold }
    }

    pub fn fluency(&self) -> FluencyConfig {
        FluencyConfig { pause_threshold_ms: self.pause_ms }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CafFlag {
    /// The session had no learner word tokens; complexity reported as 0.
    EmptyInput,
}

/// Per-session scores; `None` serializes as `null` and means UNDEFINED.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CafScores {
    pub complexity_mtld: f64,
    pub accuracy: Option<f64>,
    pub fluency_mlr: Option<f64>,
    pub composite: Option<f64>,
    pub flags: Vec<CafFlag>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CUnit {
    pub turn_index: usize,
    /// Token range inside the turn.
    pub span: (usize, usize),
    pub tokens: Vec<String>,
    pub is_error_free: bool,
}

/// Case-folded word tokens with punctuation removed.
pub fn word_tokens<'a>(tokens: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    tokens.into_iter().filter(|t| !is_punct(t)).map(str::to_lowercase).collect()
}

pub fn compute_ttr(tokens: &[String]) -> Result<f64, CafError> {
    if tokens.is_empty() {
        return Err(CafError::EmptyInput);
    }
    let types: std::collections::HashSet<&String> = tokens.iter().collect();
    Ok(types.len() as f64 / tokens.len() as f64)
}

fn mtld_pass<'a>(tokens: impl Iterator<Item = &'a String>, n: usize, x: f64) -> f64 {
    let mut factors = 0.0;
    let mut types = std::collections::HashSet::new();
    let mut count = 0usize;
    for tok in tokens {
        types.insert(tok);
        count += 1;
        let ttr = types.len() as f64 / count as f64;
        if ttr < x {
            factors += 1.0;
            types.clear();
            count = 0;
        }
    }
    if count > 0 {
        let ttr = types.len() as f64 / count as f64;
        factors += (1.0 - ttr) / (1.0 - x);
    }
    let n = n as f64;
    if factors < 0.01 {
        return n;
    }
    // A short trailing partial factor can push N / factors above N.
    (n / factors).min(n)
}

/// Bidirectional MTLD, each pass capped at the token count.
pub fn compute_mtld(tokens: &[String], cfg: &MtldConfig) -> Result<f64, CafError> {
    if tokens.is_empty() {
        return Err(CafError::EmptyInput);
    }
    let x = cfg.ttr_threshold;
    let n = tokens.len();
    let forward = mtld_pass(tokens.iter(), n, x);
    let backward = mtld_pass(tokens.iter().rev(), n, x);
    Ok((forward + backward) / 2.0)
}

/// Sentence-level C-units over learner turns; error-free means no issue survives
/// spoken-language tolerance.
pub fn segment_c_units<O: LanguageOracle + ?Sized>(oracle: &O, session: &Session) -> Vec<CUnit> {
    let mut out = Vec::new();
    for (turn_index, turn) in session.learner_turns() {
        let texts = turn.texts();
        for range in split_token_sentences(&texts) {
            let slice = &texts[range.clone()];
            if slice.iter().all(|t| is_punct(t)) {
                continue;
            }
            out.push(CUnit {
                turn_index,
                span: (range.start, range.end),
                tokens: slice.iter().map(|s| s.to_string()).collect(),
                is_error_free: oracle.check_spoken(slice).is_empty(),
            });
        }
    }
    out
}

pub fn compute_grammar_accuracy(units: &[CUnit]) -> Option<f64> {
    if units.is_empty() {
        return None;
    }
    let clean = units.iter().filter(|u| u.is_error_free).count();
    Some(clean as f64 / units.len() as f64)
}

fn syllables<O: LanguageOracle + ?Sized>(oracle: &O, text: &str) -> u32 {
    let letters: String = text.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.is_empty() {
        return 0;
    }
    oracle.count_syllables(&letters).unwrap_or(0)
}

/// Syllable totals of the pause-delimited runs in `turns`.
///
/// Only tokens containing letters take part; a gap is measured from the previous
/// word's end to the next word's start.
pub fn speech_runs<'a, O: LanguageOracle + ?Sized>(
    oracle: &O,
    turns: impl IntoIterator<Item = &'a Turn>,
    cfg: &FluencyConfig,
) -> Vec<u32> {
    let mut runs = Vec::new();
    for turn in turns {
        let mut current: Option<u32> = None;
        let mut last_end: Option<u64> = None;
        for tok in &turn.tokens {
            let syl = syllables(oracle, &tok.text);
            if syl == 0 {
                continue;
            }
            if let (Some(end), Some(total)) = (last_end, current) {
                if tok.start_ms.saturating_sub(end) >= cfg.pause_threshold_ms {
                    runs.push(total);
                    current = None;
                }
            }
            *current.get_or_insert(0) += syl;
            last_end = Some(tok.end_ms);
        }
        if let Some(total) = current {
            runs.push(total);
        }
    }
    runs
}

pub fn compute_mlr<'a, O: LanguageOracle + ?Sized>(
    oracle: &O,
    turns: impl IntoIterator<Item = &'a Turn>,
    cfg: &FluencyConfig,
) -> Option<f64> {
    let runs = speech_runs(oracle, turns, cfg);
    if runs.is_empty() {
        return None;
    }
    Some(runs.iter().map(|&r| r as f64).sum::<f64>() / runs.len() as f64)
}

/// Scores one session in isolation; `composite` is left unset.
pub fn score_session<O: LanguageOracle + ?Sized>(oracle: &O, session: &Session, cfg: &CafConfig) -> CafScores {
    let words = word_tokens(session.learner_turns().flat_map(|(_, t)| t.tokens.iter().map(|k| k.text.as_str())));
    let mut flags = Vec::new();
    let complexity_mtld = compute_mtld(&words, &cfg.mtld()).unwrap_or_else(|_| {
        flags.push(CafFlag::EmptyInput);
        0.0
    });
    CafScores {
        complexity_mtld,
        accuracy: compute_grammar_accuracy(&segment_c_units(oracle, session)),
        fluency_mlr: compute_mlr(oracle, session.learner_turns().map(|(_, t)| t), &cfg.fluency()),
        composite: None,
        flags,
    }
}

/// Fills `composite` for every session of a history: the mean of the three metrics,
/// each min–max normalized across the history.
///
/// A metric is left out of a session's mean when it is undefined there or when it is
/// constant across the history. A single-session history has no composite.
pub fn fill_composites(scores: &mut [CafScores]) {
    type Get = fn(&CafScores) -> Option<f64>;
    let metrics: [Get; 3] =
        [|s| (!s.flags.contains(&CafFlag::EmptyInput)).then_some(s.complexity_mtld), |s| s.accuracy, |s| s.fluency_mlr];
    let ranges: Vec<Option<(f64, f64)>> = metrics
        .iter()
        .map(|get| {
            let vals: Vec<f64> = scores.iter().filter_map(get).collect();
            let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (vals.len() >= 2 && max > min).then_some((min, max))
        })
        .collect();
    for s in scores.iter_mut() {
        let parts: Vec<f64> = metrics
            .iter()
            .zip(&ranges)
            .filter_map(|(get, range)| {
                let (min, max) = (*range)?;
                get(s).map(|v| (v - min) / (max - min))
            })
            .collect();
        s.composite = (!parts.is_empty()).then(|| parts.iter().sum::<f64>() / parts.len() as f64);
    }
}

/// Scores every session of a snapshot, composites included, in session order.
pub fn score_history<O: LanguageOracle + ?Sized>(oracle: &O, snapshot: &Snapshot, cfg: &CafConfig) -> Vec<CafScores> {
    let mut scores: Vec<CafScores> = snapshot.sessions.iter().map(|s| score_session(oracle, s, cfg)).collect();
    if scores.len() >= 2 {
        fill_composites(&mut scores);
    }
    scores
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::baseline_oracle;
    use crate::store::{Speaker, Token};

    fn words(s: &str) -> Vec<String> {
        word_tokens(s.split_whitespace())
    }

    fn turn(spec: &[(&str, u64, u64)]) -> Turn {
        Turn {
            speaker: Speaker::Learner,
            audio_ref: None,
            tokens: spec
                .iter()
                .map(|&(text, start_ms, end_ms)| Token { text: text.into(), start_ms, end_ms })
                .collect(),
        }
    }

    #[test]
    fn ttr_examples() {
        assert!((compute_ttr(&words("the cat sat on the mat")).unwrap() - 5.0 / 6.0).abs() < 1e-12);
        assert_eq!(compute_ttr(&words("a a a a")).unwrap(), 0.25);
        assert_eq!(compute_ttr(&[]), Err(CafError::EmptyInput));
    }

    #[test]
    fn mtld_examples() {
        let cfg = MtldConfig::default();
        let ab: Vec<String> = (0..20).map(|i| if i % 2 == 0 { "a" } else { "b" }.to_string()).collect();
        assert!((compute_mtld(&ab, &cfg).unwrap() - 20.0 / 6.0).abs() < 1e-12);
        let distinct: Vec<String> = (0..10).map(|i| format!("w{i}")).collect();
        assert_eq!(compute_mtld(&distinct, &cfg).unwrap(), 10.0);
        assert_eq!(compute_mtld(&words("hello"), &cfg).unwrap(), 1.0);
        // short partial factor: capped at N
        assert_eq!(compute_mtld(&words("a b c a"), &cfg).unwrap(), 4.0);
    }

    #[test]
    fn mlr_splits_at_pauses() {
        let o = baseline_oracle();
        // syllables 1, 2, 1, 1 with a 300 ms gap after the second token
        let t = turn(&[("cat", 0, 100), ("table", 100, 200), ("dog", 500, 600), ("sun", 600, 700)]);
        let cfg = FluencyConfig::default();
        assert_eq!(speech_runs(o.as_ref(), [&t], &cfg), [3, 2]);
        assert_eq!(compute_mlr(o.as_ref(), [&t], &cfg), Some(2.5));
        assert_eq!(compute_mlr(o.as_ref(), std::iter::empty(), &cfg), None);
    }

    #[test]
    fn accuracy_ratio() {
        let unit = |ok| CUnit { turn_index: 0, span: (0, 1), tokens: vec!["x".into()], is_error_free: ok };
        assert_eq!(compute_grammar_accuracy(&[unit(true), unit(true), unit(true), unit(false)]), Some(0.75));
        assert_eq!(compute_grammar_accuracy(&[]), None);
    }

    #[test]
    fn composite_needs_history() {
        let s = CafScores {
            complexity_mtld: 5.0,
            accuracy: Some(0.5),
            fluency_mlr: Some(3.0),
            composite: None,
            flags: vec![],
        };
        let mut one = vec![s.clone()];
        fill_composites(&mut one);
        assert_eq!(one[0].composite, None);

        let mut two = vec![s.clone(), CafScores { accuracy: Some(1.0), ..s }];
        fill_composites(&mut two);
        // only accuracy varies
        assert_eq!(two[0].composite, Some(0.0));
        assert_eq!(two[1].composite, Some(1.0));
    }
}
