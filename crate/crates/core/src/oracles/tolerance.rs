//! Spoken-language tolerance for grammar checking of ASR transcripts.

use super::{GrammarCategory, GrammarIssue, LanguageOracle};

/// Categories ignored in speech: ASR output carries no reliable casing or punctuation,
/// mishears homophones, and keeps disfluencies verbatim.
pub const TOLERATED_CATEGORIES: [GrammarCategory; 4] =
    [GrammarCategory::Casing, GrammarCategory::Punctuation, GrammarCategory::Homophone, GrammarCategory::Disfluency];

/// Tokens with hesitations and immediate repeats removed; `origin[k]` is the index of
/// kept token `k` in the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedTokens {
    pub tokens: Vec<String>,
    pub origin: Vec<usize>,
}

impl NormalizedTokens {
    /// Maps a span over the normalized tokens back onto the input tokens.
    pub fn map_span(&self, (begin, end): (usize, usize)) -> (usize, usize) {
        (self.origin[begin], self.origin[end - 1] + 1)
    }
}

pub fn normalize_spoken<O: LanguageOracle + ?Sized>(oracle: &O, tokens: &[&str]) -> NormalizedTokens {
    let mut out =
        NormalizedTokens { tokens: Vec::with_capacity(tokens.len()), origin: Vec::with_capacity(tokens.len()) };
    for (i, tok) in tokens.iter().enumerate() {
        let lower = tok.to_lowercase();
        if oracle.is_hesitation(&lower) {
            continue;
        }
        let repeat = out.tokens.last().is_some_and(|prev| prev.to_lowercase() == lower && !super::is_punct(tok));
        if repeat {
            continue;
        }
        out.tokens.push(tok.to_string());
        out.origin.push(i);
    }
    out
}

pub(crate) fn check_spoken<O: LanguageOracle + ?Sized>(oracle: &O, tokens: &[&str]) -> Vec<GrammarIssue> {
    if tokens.is_empty() {
        return Vec::new();
    }
    let raw = oracle.check_grammar(tokens);
    let norm = normalize_spoken(oracle, tokens);
    if norm.tokens.is_empty() {
        return Vec::new();
    }
    let norm_refs: Vec<&str> = norm.tokens.iter().map(String::as_str).collect();
    // each raw issue can vouch for at most one tolerant issue
    let mut used = vec![false; raw.len()];
    let mut out = Vec::new();
    for issue in oracle.check_grammar(&norm_refs) {
        if TOLERATED_CATEGORIES.contains(&issue.category) {
            continue;
        }
        let span = norm.map_span(issue.span);
        let hit =
            raw.iter().enumerate().position(|(k, r)| !used[k] && r.category == issue.category && r.span.0 == span.0);
        if let Some(k) = hit {
            used[k] = true;
            out.push(GrammarIssue { span, ..issue });
        }
    }
    out.sort_by_key(|i| (i.span.0, i.span.1));
    out
}
