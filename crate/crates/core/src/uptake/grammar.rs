use serde::{Deserialize, Serialize};

use super::diff::{align, regions, Region};
use super::{Location, UptakeError};
use crate::oracles::{
    split_token_sentences, tokenize, GrammarCategory, LanguageOracle, Pos, VerbForm, TOLERATED_CATEGORIES,
};
use crate::store::{Correction, CorrectionKind, Session};

fn lower(tokens: &[String]) -> Vec<String> {
    tokens.iter().map(|t| t.to_lowercase()).collect()
}

fn overlaps((b0, e0): (usize, usize), (b1, e1): (usize, usize)) -> bool {
    b0 < e1 && b1 < e0
}

/// Decides which error type a grammar correction points out.
///
/// The checker's issue overlapping the edit wins; without one, the edited tokens'
/// part of speech decides.
pub fn classify_grammar_correction<O: LanguageOracle + ?Sized>(
    oracle: &O,
    correction: &Correction,
) -> Result<GrammarCategory, UptakeError> {
    if correction.kind != CorrectionKind::Grammar {
        return Err(UptakeError::WrongKind(format!("{:?}", correction.kind)));
    }
    let a = tokenize(&correction.original_sentence);
    let b = tokenize(&correction.corrected_sentence);
    let (ka, kb) = (lower(&a), lower(&b));
    if ka == kb {
        return Err(UptakeError::NoEditFound);
    }
    let regs = regions(&align(&ka, &kb));
    let a_refs: Vec<&str> = a.iter().map(String::as_str).collect();
    let b_refs: Vec<&str> = b.iter().map(String::as_str).collect();
    let issues = oracle.check_grammar(&a_refs);
    for r in &regs {
        let (begin, end) = r.a_range();
        // an insertion point touches the tokens on both sides
        let range = if begin == end { (begin.saturating_sub(1), (end + 1).min(a.len())) } else { (begin, end) };
        let best = issues
            .iter()
            .filter(|i| overlaps(i.span, range))
            .min_by_key(|i| (TOLERATED_CATEGORIES.contains(&i.category), i.span.0));
        if let Some(issue) = best {
            return Ok(issue.category);
        }
    }
    let (tags_a, tags_b) = (oracle.tag_pos(&a_refs), oracle.tag_pos(&b_refs));
    Ok(regs
        .iter()
        .map(|r| heuristic(oracle, r, (&ka, &tags_a), (&kb, &tags_b)))
        .find(|c| *c != GrammarCategory::Other)
        .unwrap_or(GrammarCategory::Other))
}

const BE_PRESENT: [&str; 3] = ["am", "is", "are"];
const BE_PAST: [&str; 2] = ["was", "were"];

fn heuristic<O: LanguageOracle + ?Sized>(
    oracle: &O,
    r: &Region,
    (wa, ta): (&[String], &[Pos]),
    (wb, tb): (&[String], &[Pos]),
) -> GrammarCategory {
    let edited = |idx: &[usize], tags: &[Pos], pos: Pos| idx.iter().copied().find(|&i| tags[i] == pos);
    let (va, vb) = (edited(&r.a, ta, Pos::Verb), edited(&r.b, tb, Pos::Verb));
    match (va, vb) {
        (Some(i), Some(j)) => return verb_change(oracle, &wa[i], &wb[j]),
        (Some(_), None) | (None, Some(_)) => return GrammarCategory::VerbForm,
        _ => {}
    }
    let any = |pos: Pos| edited(&r.a, ta, pos).is_some() || edited(&r.b, tb, pos).is_some();
    if any(Pos::Det) {
        return GrammarCategory::Article;
    }
    if let (Some(i), Some(j)) = (edited(&r.a, ta, Pos::Noun), edited(&r.b, tb, Pos::Noun)) {
        if oracle.base_form(&wa[i]) == oracle.base_form(&wb[j]) {
            return GrammarCategory::NounNumber;
        }
    }
    if any(Pos::Adp) {
        return GrammarCategory::Preposition;
    }
    if any(Pos::Pron) {
        return GrammarCategory::Pronoun;
    }
    GrammarCategory::Other
}

fn verb_change<O: LanguageOracle + ?Sized>(oracle: &O, a: &str, b: &str) -> GrammarCategory {
    let be_swap =
        (BE_PRESENT.contains(&a) && BE_PRESENT.contains(&b)) || (BE_PAST.contains(&a) && BE_PAST.contains(&b));
    if be_swap {
        return GrammarCategory::SubjectVerbAgreement;
    }
    if oracle.base_form(a) != oracle.base_form(b) {
        return GrammarCategory::VerbForm;
    }
    use VerbForm::*;
    let present = |f: Option<VerbForm>| matches!(f, Some(Base | ThirdSingular));
    let past = |f: Option<VerbForm>| matches!(f, Some(Past | PastOrParticiple));
    let (fa, fb) = (oracle.verb_form(a), oracle.verb_form(b));
    match (fa, fb) {
        (Some(Base), Some(ThirdSingular)) | (Some(ThirdSingular), Some(Base)) => GrammarCategory::SubjectVerbAgreement,
        _ if (present(fa) && past(fb)) || (past(fa) && present(fb)) => GrammarCategory::VerbTense,
        _ => GrammarCategory::VerbForm,
    }
}

/// One grammar issue found in a learner turn.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocatedIssue {
    pub category: GrammarCategory,
    pub rule_id: String,
    pub location: Location,
    pub suggestion: Option<String>,
}

/// All grammar issues over the learner's C-units, with turn-relative spans.
pub fn grammar_issues<O: LanguageOracle + ?Sized>(oracle: &O, session: &Session, tolerant: bool) -> Vec<LocatedIssue> {
    let mut out = Vec::new();
    for (turn_index, turn) in session.learner_turns() {
        let texts = turn.texts();
        for range in split_token_sentences(&texts) {
            let slice = &texts[range.clone()];
            let issues = if tolerant { oracle.check_spoken(slice) } else { oracle.check_grammar(slice) };
            out.extend(issues.into_iter().map(|i| LocatedIssue {
                category: i.category,
                rule_id: i.rule_id,
                location: Location { turn_index, span: (range.start + i.span.0, range.start + i.span.1) },
                suggestion: i.suggestion,
            }));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorCount {
    pub count: usize,
    pub locations: Vec<Location>,
}

pub fn count_grammar_errors<O: LanguageOracle + ?Sized>(
    oracle: &O,
    session: &Session,
    category: GrammarCategory,
    tolerant: bool,
) -> ErrorCount {
    let locations: Vec<Location> = grammar_issues(oracle, session, tolerant)
        .into_iter()
        .filter(|i| i.category == category)
        .map(|i| i.location)
        .collect();
    ErrorCount { count: locations.len(), locations }
}
