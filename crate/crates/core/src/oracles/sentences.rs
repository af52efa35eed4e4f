use std::collections::HashSet;
use std::ops::Range;
use std::sync::OnceLock;

use super::lexicon::{self, ABBREVIATIONS};

fn abbreviations() -> &'static HashSet<String> {
    static SET: OnceLock<HashSet<String>> = OnceLock::new();
    SET.get_or_init(|| lexicon::rows(ABBREVIATIONS).filter_map(|r| r.first().map(|w| w.to_lowercase())).collect())
}

pub(crate) fn is_abbreviation(word: &str) -> bool {
    abbreviations().contains(&word.to_lowercase())
}

/// Splits on ".", "!" or "?" followed by whitespace or end of text, except after a
/// known abbreviation.
pub(crate) fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        let (_, c) = chars[i];
        if !matches!(c, '.' | '!' | '?') {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < chars.len() && matches!(chars[j + 1].1, '.' | '!' | '?' | '"' | '\'' | ')') {
            j += 1;
        }
        let after = chars.get(j + 1).map(|(_, ch)| *ch);
        if after.is_none_or(char::is_whitespace) {
            let end = chars.get(j + 1).map_or(text.len(), |(b, _)| *b);
            let word_start = text[start..chars[i].0].rfind(char::is_whitespace).map_or(start, |p| start + p + 1);
            let word = &text[word_start..end];
            if !is_abbreviation(word.trim_end_matches(['"', '\'', ')'])) {
                push_trimmed(&mut out, &text[start..end]);
                start = end;
            }
        }
        i = j + 1;
    }
    push_trimmed(&mut out, &text[start..]);
    out
}

fn push_trimmed(out: &mut Vec<String>, s: &str) {
    let s = s.trim();
    if !s.is_empty() {
        out.push(s.to_string());
    }
}

/// Token-level counterpart of sentence splitting: ranges of `tokens` ending at each
/// sentence-final token. Trailing tokens without a terminator form a last sentence.
pub fn split_token_sentences<S: AsRef<str>>(tokens: &[S]) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, tok) in tokens.iter().enumerate() {
        if super::ends_sentence(tok.as_ref()) {
            out.push(start..i + 1);
            start = i + 1;
        }
    }
    if start < tokens.len() {
        out.push(start..tokens.len());
    }
    out
}
