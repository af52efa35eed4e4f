//! Overall-feedback organization: each sentence of a tutor's written comments is
//! classified into one of six categories by a three-member voting ensemble, and
//! counts are aggregated per category and tutor.

use std::collections::BTreeMap;
use std::fmt;

use regex::{Regex, RegexBuilder};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oracles::{is_punct, tokenize, SharedOracle};
use crate::store::Session;

const KEYWORDS: &str = include_str!("../data/feedback_keywords.tsv");
const PATTERNS: &str = include_str!("../data/feedback_patterns.tsv");
const PROTOTYPES: &str = include_str!("../data/feedback_prototypes.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeedbackCategory {
    Grammar,
    Vocabulary,
    Pronunciation,
    Fluency,
    SentenceStructure,
    /// Compliments and greetings.
    Other,
}

impl FeedbackCategory {
    /// Also the tie-break priority, most actionable first.
    pub const ALL: [FeedbackCategory; 6] = [
        FeedbackCategory::Grammar,
        FeedbackCategory::Vocabulary,
        FeedbackCategory::Pronunciation,
        FeedbackCategory::Fluency,
        FeedbackCategory::SentenceStructure,
        FeedbackCategory::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FeedbackCategory::Grammar => "grammar",
            FeedbackCategory::Vocabulary => "vocabulary",
            FeedbackCategory::Pronunciation => "pronunciation",
            FeedbackCategory::Fluency => "fluency",
            FeedbackCategory::SentenceStructure => "sentence_structure",
            FeedbackCategory::Other => "other",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }

    /// 0 is the highest priority.
    pub fn priority(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).expect("listed")
    }
}

impl fmt::Display for FeedbackCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeedbackError {
    #[error("feedback sentence is empty")]
    EmptySentence,
}

/// One classifier's opinion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vote {
    pub category: FeedbackCategory,
    pub confidence: f64,
}

pub trait SentenceClassifier: Send + Sync {
    fn name(&self) -> &str;
    fn classify(&self, text: &str) -> Vote;
}

/// Majority of three; a full split goes to the most confident voter, then to priority.
/// The returned confidence is the mean over the winning voters.
pub fn tally(votes: &[Vote; 3]) -> (FeedbackCategory, f64) {
    let mut by_cat: BTreeMap<FeedbackCategory, Vec<f64>> = BTreeMap::new();
    for v in votes {
        by_cat.entry(v.category).or_default().push(v.confidence);
    }
    let mean = |c: &[f64]| c.iter().sum::<f64>() / c.len() as f64;
    let (cat, confs) = by_cat
        .iter()
        .max_by(|(ca, a), (cb, b)| {
            a.len().cmp(&b.len()).then(mean(a).total_cmp(&mean(b))).then(cb.priority().cmp(&ca.priority()))
        })
        .expect("three votes");
    (*cat, mean(confs))
}

fn rows(table: &str) -> impl Iterator<Item = Vec<&str>> {
    table
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split('\t').map(str::trim).collect())
}

fn words(text: &str) -> Vec<String> {
    tokenize(text).into_iter().filter(|t| !is_punct(t)).map(|t| t.to_lowercase()).collect()
}

fn argmax(scores: &BTreeMap<FeedbackCategory, f64>) -> Option<(FeedbackCategory, f64)> {
    scores
        .iter()
        .filter(|(_, &s)| s > 0.0)
        .max_by(|(ca, a), (cb, b)| a.total_cmp(b).then(cb.priority().cmp(&ca.priority())))
        .map(|(&c, &s)| (c, s))
}

/// Weighted lemma-sequence keywords. Confidence is the share of words covered by matches.
pub struct KeywordClassifier {
    oracle: SharedOracle,
    terms: Vec<(FeedbackCategory, Vec<String>, f64)>,
}

impl KeywordClassifier {
    pub fn bundled(oracle: SharedOracle) -> Self {
        let terms = rows(KEYWORDS)
            .filter_map(|r| {
                let cat = FeedbackCategory::parse(r.first()?)?;
                let seq = words(r.get(1)?).iter().map(|w| oracle.base_form(w)).collect();
                let weight = r.get(2).and_then(|w| w.parse().ok()).unwrap_or(1.0);
                Some((cat, seq, weight))
            })
            .collect();
        KeywordClassifier { oracle, terms }
    }
}

impl SentenceClassifier for KeywordClassifier {
    fn name(&self) -> &str {
        "keyword"
    }

    fn classify(&self, text: &str) -> Vote {
        let ws = words(text);
        let lemmas: Vec<String> = ws.iter().map(|w| self.oracle.base_form(w)).collect();
        let mut scores = BTreeMap::new();
        let mut covered = vec![false; lemmas.len()];
        for (cat, seq, weight) in &self.terms {
            if seq.is_empty() || seq.len() > lemmas.len() {
                continue;
            }
            for s in 0..=lemmas.len() - seq.len() {
                if lemmas[s..s + seq.len()] == seq[..] {
                    *scores.entry(*cat).or_insert(0.0) += weight;
                    covered[s..s + seq.len()].iter_mut().for_each(|c| *c = true);
                }
            }
        }
        match argmax(&scores) {
            Some((category, _)) => {
                Vote { category, confidence: covered.iter().filter(|&&c| c).count() as f64 / lemmas.len() as f64 }
            }
            None => Vote { category: FeedbackCategory::Other, confidence: 0.0 },
        }
    }
}

/// Case-insensitive patterns; a category scores one per matching pattern.
/// Confidence is the share of characters covered by matches.
pub struct RegexClassifier {
    patterns: Vec<(FeedbackCategory, Regex)>,
}

impl RegexClassifier {
    pub fn bundled() -> Self {
        let patterns = rows(PATTERNS)
            .filter_map(|r| {
                let cat = FeedbackCategory::parse(r.first()?)?;
                let re = RegexBuilder::new(r.get(1)?)
                    .case_insensitive(true)
                    .build()
                    .expect("bundled feedback pattern compiles");
                Some((cat, re))
            })
            .collect();
        RegexClassifier { patterns }
    }
}

impl SentenceClassifier for RegexClassifier {
    fn name(&self) -> &str {
        "regex"
    }

    fn classify(&self, text: &str) -> Vote {
        let mut scores = BTreeMap::new();
        let mut covered = vec![false; text.len()];
        for (cat, re) in &self.patterns {
            let mut hit = false;
            for m in re.find_iter(text) {
                hit = true;
                covered[m.range()].iter_mut().for_each(|c| *c = true);
            }
            if hit {
                *scores.entry(*cat).or_insert(0.0) += 1.0;
            }
        }
        let visible = text.chars().filter(|c| !c.is_whitespace()).count().max(1);
        let hit_chars = text.char_indices().filter(|&(i, c)| covered[i] && !c.is_whitespace()).count();
        match argmax(&scores) {
            Some((category, _)) => Vote { category, confidence: (hit_chars as f64 / visible as f64).min(1.0) },
            None => Vote { category: FeedbackCategory::Other, confidence: 0.0 },
        }
    }
}

/// Nearest prototype sentence under the similarity oracle.
pub struct PrototypeClassifier {
    oracle: SharedOracle,
    prototypes: Vec<(FeedbackCategory, String)>,
}

impl PrototypeClassifier {
    pub fn bundled(oracle: SharedOracle) -> Self {
        let prototypes = rows(PROTOTYPES)
            .filter_map(|r| Some((FeedbackCategory::parse(r.first()?)?, r.get(1)?.to_string())))
            .collect();
        PrototypeClassifier { oracle, prototypes }
    }
}

impl SentenceClassifier for PrototypeClassifier {
    fn name(&self) -> &str {
        "prototype"
    }

    fn classify(&self, text: &str) -> Vote {
        let mut best: BTreeMap<FeedbackCategory, f64> = BTreeMap::new();
        for (cat, proto) in &self.prototypes {
            let s = self.oracle.similarity(text, proto).unwrap_or(0.0);
            let e = best.entry(*cat).or_insert(0.0);
            *e = e.max(s);
        }
        match argmax(&best) {
            Some((category, confidence)) => Vote { category, confidence },
            None => Vote { category: FeedbackCategory::Other, confidence: 0.0 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub category: FeedbackCategory,
    pub votes: [FeedbackCategory; 3],
    pub confidence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedSentence {
    pub text: String,
    pub session_id: String,
    pub session_index: u32,
    pub tutor_id: String,
    pub category: FeedbackCategory,
    pub votes: [FeedbackCategory; 3],
    pub confidence: f64,
}

pub struct FeedbackClassifier {
    oracle: SharedOracle,
    members: [Box<dyn SentenceClassifier>; 3],
}

impl FeedbackClassifier {
    pub fn new(oracle: SharedOracle, members: [Box<dyn SentenceClassifier>; 3]) -> Self {
        FeedbackClassifier { oracle, members }
    }

    /// Keyword, regex and prototype-similarity members over the bundled tables.
    pub fn baseline(oracle: SharedOracle) -> Self {
        let members: [Box<dyn SentenceClassifier>; 3] = [
            Box::new(KeywordClassifier::bundled(oracle.clone())),
            Box::new(RegexClassifier::bundled()),
            Box::new(PrototypeClassifier::bundled(oracle.clone())),
        ];
        FeedbackClassifier::new(oracle, members)
    }

    pub fn member_names(&self) -> [&str; 3] {
        [self.members[0].name(), self.members[1].name(), self.members[2].name()]
    }

    pub fn classify_feedback_sentence(&self, text: &str) -> Result<Classification, FeedbackError> {
        if words(text).is_empty() {
            return Err(FeedbackError::EmptySentence);
        }
        let votes = [self.members[0].classify(text), self.members[1].classify(text), self.members[2].classify(text)];
        let (category, confidence) = tally(&votes);
        Ok(Classification { category, votes: votes.map(|v| v.category), confidence })
    }

    /// Every non-empty sentence of the session's overall comments, in order.
    pub fn classify_session(&self, session: &Session) -> Vec<ClassifiedSentence> {
        session
            .feedback
            .overall_comments
            .iter()
            .flat_map(|c| self.oracle.split_sentences(c))
            .filter_map(|text| {
                let c = self.classify_feedback_sentence(&text).ok()?;
                Some(ClassifiedSentence {
                    text,
                    session_id: session.session_id.clone(),
                    session_index: session.session_index,
                    tutor_id: session.tutor_id.clone(),
                    category: c.category,
                    votes: c.votes,
                    confidence: c.confidence,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuggestionSentence {
    pub text: String,
    pub session_id: String,
    pub session_index: u32,
    pub confidence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuggestionCell {
    pub tutor_id: String,
    pub count: usize,
    pub sentences: Vec<SuggestionSentence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuggestionRow {
    pub category: FeedbackCategory,
    pub total: usize,
    /// Only tutors with at least one sentence in this category, by tutor id.
    pub cells: Vec<SuggestionCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuggestionPayload {
    /// Tutors of the aggregated sessions, sorted.
    pub tutors: Vec<String>,
    /// All six categories, by total descending, ties alphabetical.
    pub categories: Vec<SuggestionRow>,
    pub total_sentences: usize,
}

impl SuggestionPayload {
    pub fn cell(&self, category: FeedbackCategory, tutor: &str) -> Option<&SuggestionCell> {
        self.categories.iter().find(|r| r.category == category)?.cells.iter().find(|c| c.tutor_id == tutor)
    }
}

/// Aggregates classified sentences of the given sessions per category and tutor.
pub fn aggregate_suggestions<'a>(
    classifier: &FeedbackClassifier,
    sessions: impl IntoIterator<Item = &'a Session>,
) -> SuggestionPayload {
    let mut tutors = std::collections::BTreeSet::new();
    let mut grid: BTreeMap<FeedbackCategory, BTreeMap<String, Vec<SuggestionSentence>>> = BTreeMap::new();
    let mut total_sentences = 0;
    for s in sessions {
        tutors.insert(s.tutor_id.clone());
        for c in classifier.classify_session(s) {
            total_sentences += 1;
            grid.entry(c.category).or_default().entry(c.tutor_id).or_default().push(SuggestionSentence {
                text: c.text,
                session_id: c.session_id,
                session_index: c.session_index,
                confidence: c.confidence,
            });
        }
    }
    let mut categories: Vec<SuggestionRow> = FeedbackCategory::ALL
        .into_iter()
        .map(|category| {
            let cells: Vec<SuggestionCell> = grid
                .remove(&category)
                .unwrap_or_default()
                .into_iter()
                .map(|(tutor_id, sentences)| SuggestionCell { tutor_id, count: sentences.len(), sentences })
                .collect();
            SuggestionRow { category, total: cells.iter().map(|c| c.count).sum(), cells }
        })
        .collect();
    categories.sort_by(|a, b| b.total.cmp(&a.total).then(a.category.as_str().cmp(b.category.as_str())));
    SuggestionPayload { tutors: tutors.into_iter().collect(), categories, total_sentences }
}
