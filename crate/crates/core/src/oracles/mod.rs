//! Pluggable language-analysis interfaces and the bundled rule-based baseline.
//!
//! Every analytic module talks to language knowledge through [`LanguageOracle`].
//! The baseline implementation ships with the crate and needs no network; the
//! `external` backend is a configuration slot for model-service adapters.

mod baseline;
mod grammar;
mod lexicon;
mod mask;
mod morphology;
mod pos;
mod sentences;
mod similarity;
mod syllables;
mod tolerance;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use baseline::BaselineOracle;
pub use sentences::split_token_sentences;
pub use tolerance::{normalize_spoken, NormalizedTokens, TOLERATED_CATEGORIES};

/// Env var that overrides `oracles.backend`.
pub const BACKEND_ENV: &str = "RLENS_ORACLE_BACKEND";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("mask index {index} out of range for {len} tokens")]
    Index { index: usize, len: usize },
    #[error("similarity needs non-empty text")]
    EmptyText,
    #[error("not a word: {0:?}")]
    NotAWord(String),
    #[error("top_k must be at least 1")]
    ZeroTopK,
    #[error("oracle backend {0:?} is not available in this build")]
    BackendUnavailable(String),
    #[error("unknown oracle backend {0:?}")]
    UnknownBackend(String),
}

/// Coarse universal part-of-speech tags used by the baseline tagger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Adv,
    Intj,
    Pron,
    Det,
    Adp,
    Cconj,
    Punct,
    Other,
}

impl Pos {
    pub fn parse(s: &str) -> Option<Pos> {
        Some(match s {
            "NOUN" => Pos::Noun,
            "VERB" => Pos::Verb,
            "ADJ" => Pos::Adj,
            "ADV" => Pos::Adv,
            "INTJ" => Pos::Intj,
            "PRON" => Pos::Pron,
            "DET" => Pos::Det,
            "ADP" => Pos::Adp,
            "CCONJ" => Pos::Cconj,
            "PUNCT" => Pos::Punct,
            "OTHER" => Pos::Other,
            _ => return None,
        })
    }

    pub fn is_content(self) -> bool {
        matches!(self, Pos::Noun | Pos::Verb | Pos::Adj | Pos::Adv)
    }
}

/// Closed error taxonomy; external checker rule ids are mapped into it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GrammarCategory {
    VerbTense,
    SubjectVerbAgreement,
    VerbForm,
    Article,
    NounNumber,
    Preposition,
    Pronoun,
    WordForm,
    WordOrder,
    Casing,
    Punctuation,
    Homophone,
    Disfluency,
    Other,
}

impl GrammarCategory {
    pub const ALL: [GrammarCategory; 14] = [
        GrammarCategory::VerbTense,
        GrammarCategory::SubjectVerbAgreement,
        GrammarCategory::VerbForm,
        GrammarCategory::Article,
        GrammarCategory::NounNumber,
        GrammarCategory::Preposition,
        GrammarCategory::Pronoun,
        GrammarCategory::WordForm,
        GrammarCategory::WordOrder,
        GrammarCategory::Casing,
        GrammarCategory::Punctuation,
        GrammarCategory::Homophone,
        GrammarCategory::Disfluency,
        GrammarCategory::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GrammarCategory::VerbTense => "VERB_TENSE",
            GrammarCategory::SubjectVerbAgreement => "SUBJECT_VERB_AGREEMENT",
            GrammarCategory::VerbForm => "VERB_FORM",
            GrammarCategory::Article => "ARTICLE",
            GrammarCategory::NounNumber => "NOUN_NUMBER",
            GrammarCategory::Preposition => "PREPOSITION",
            GrammarCategory::Pronoun => "PRONOUN",
            GrammarCategory::WordForm => "WORD_FORM",
            GrammarCategory::WordOrder => "WORD_ORDER",
            GrammarCategory::Casing => "CASING",
            GrammarCategory::Punctuation => "PUNCTUATION",
            GrammarCategory::Homophone => "HOMOPHONE",
            GrammarCategory::Disfluency => "DISFLUENCY",
            GrammarCategory::Other => "OTHER",
        }
    }
}

impl fmt::Display for GrammarCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GrammarCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GrammarCategory::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown grammar category {s:?}"))
    }
}

/// One grammar problem inside a checked sentence. `span` is a half-open token range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrammarIssue {
    pub rule_id: String,
    pub category: GrammarCategory,
    pub span: (usize, usize),
    pub suggestion: Option<String>,
}

/// Inflectional form of a verb token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerbForm {
    Base,
    ThirdSingular,
    Past,
    Participle,
    /// Regular `-ed` forms and irregulars whose past and participle coincide.
    PastOrParticiple,
    Gerund,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Baseline,
    External,
}

impl FromStr for Backend {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "baseline" => Ok(Backend::Baseline),
            "external" => Ok(Backend::External),
            other => Err(OracleError::UnknownBackend(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub mask_top_k: usize,
    pub similarity_floor: f64,
    pub backend: Backend,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { mask_top_k: 20, similarity_floor: 0.5, backend: Backend::Baseline }
    }
}

/// The language-analysis contract every backend implements.
///
/// Implementations must be deterministic for identical input.
pub trait LanguageOracle: Send + Sync {
    /// Grammar issues sorted by span begin.
    fn check_grammar(&self, tokens: &[&str]) -> Vec<GrammarIssue>;

    /// Up to `top_k` replacement candidates for the token at `mask_index`.
    fn predict_masked(&self, tokens: &[&str], mask_index: usize, top_k: usize) -> Result<Vec<String>, OracleError>;

    /// Symmetric semantic similarity in `[0, 1]`.
    fn similarity(&self, a: &str, b: &str) -> Result<f64, OracleError>;

    fn tag_pos(&self, tokens: &[&str]) -> Vec<Pos>;

    fn count_syllables(&self, word: &str) -> Result<u32, OracleError>;

    fn split_sentences(&self, text: &str) -> Vec<String>;

    fn lemmatize(&self, word: &str, pos: Pos) -> String;

    /// Inflectional variants of `word`; `word` itself is always included.
    fn variants(&self, word: &str) -> BTreeSet<String>;

    /// Part-of-speech independent lemma used for lexeme matching.
    fn base_form(&self, word: &str) -> String;

    fn verb_form(&self, word: &str) -> Option<VerbForm>;

    /// True for hesitation tokens ("uh", "um", ...) removed before tolerant checking.
    fn is_hesitation(&self, word: &str) -> bool;

    fn is_stopword(&self, word: &str) -> bool;

    /// Grammar check with spoken-language tolerance applied.
    ///
    /// Hesitations and immediate repeats are removed before checking, issues in
    /// [`TOLERATED_CATEGORIES`] are dropped, and only issues that the raw check also
    /// reports survive, so tolerance never adds an issue. Spans index `tokens`.
    fn check_spoken(&self, tokens: &[&str]) -> Vec<GrammarIssue> {
        tolerance::check_spoken(self, tokens)
    }

    /// True when the two words share a lemma or one is an inflection of the other.
    fn same_lexeme(&self, a: &str, b: &str) -> bool {
        let (a, b) = (a.to_lowercase(), b.to_lowercase());
        a == b || self.base_form(&a) == self.base_form(&b) || self.variants(&b).contains(&a)
    }
}

pub type SharedOracle = Arc<dyn LanguageOracle>;

/// Builds the oracle for `backend`. The external slot has no adapter compiled in.
pub fn build_oracle(backend: Backend) -> Result<SharedOracle, OracleError> {
    match backend {
        Backend::Baseline => Ok(baseline_oracle()),
        Backend::External => Err(OracleError::BackendUnavailable("external".into())),
    }
}

/// Process-wide baseline instance; the bundled tables are parsed once.
pub fn baseline_oracle() -> SharedOracle {
    static SHARED: OnceLock<Arc<BaselineOracle>> = OnceLock::new();
    SHARED.get_or_init(|| Arc::new(BaselineOracle::new())).clone()
}

/// Splits free text into word and punctuation tokens.
///
/// Apostrophes and hyphens inside a word stay attached ("don't", "well-known");
/// dotted abbreviations such as "e.g." stay one token.
pub fn tokenize(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_alphanumeric() {
            let start = i;
            i = dotted_initials_end(&chars, i).unwrap_or_else(|| word_end(&chars, i));
            if chars.get(i) == Some(&'.') {
                let with_dot: String = chars[start..=i].iter().collect();
                if sentences::is_abbreviation(&with_dot) {
                    i += 1;
                }
            }
            out.push(chars[start..i].iter().collect());
        } else {
            out.push(c.to_string());
            i += 1;
        }
    }
    out
}

fn word_end(chars: &[char], start: usize) -> usize {
    let mut i = start;
    while i < chars.len() {
        let ch = chars[i];
        let joiner =
            matches!(ch, '\'' | '\u{2019}' | '-') && i > start && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
        if ch.is_alphanumeric() || joiner {
            i += 1;
        } else {
            break;
        }
    }
    i
}

/// End of a run like "e.g." or "a.m.": two or more single letters, each followed by a dot.
fn dotted_initials_end(chars: &[char], start: usize) -> Option<usize> {
    let mut i = start;
    let mut groups = 0;
    while i + 1 < chars.len() && chars[i].is_alphabetic() && chars[i + 1] == '.' {
        groups += 1;
        i += 2;
    }
    (groups >= 2).then_some(i)
}

/// True when the token is entirely punctuation.
pub fn is_punct(token: &str) -> bool {
    !token.is_empty() && token.chars().all(|c| !c.is_alphanumeric())
}

/// True when the token ends a sentence (".", "!", "?" or a word carrying one,
/// abbreviations excepted).
pub fn ends_sentence(token: &str) -> bool {
    matches!(token, "." | "!" | "?" | "..." | "?!" | "!?")
        || (token.len() > 1 && token.ends_with(['.', '!', '?']) && !sentences::is_abbreviation(token))
}
