//! Closed-lexicon + suffix-rule tagger with a few contextual repairs.

use super::lexicon::Lexicon;
use super::{is_punct, morphology, Pos};

pub(crate) const SUBJECT_PRONOUNS: [&str; 7] = ["i", "you", "he", "she", "it", "we", "they"];
pub(crate) const MODALS: [&str; 9] = ["will", "would", "can", "could", "should", "shall", "must", "may", "might"];
pub(crate) const COPULAS: [&str; 8] = ["be", "am", "is", "are", "was", "were", "been", "being"];

fn suffix_guess(w: &str) -> Pos {
    const NOUN: [&str; 10] = ["tion", "sion", "ment", "ness", "ity", "ship", "ance", "ence", "ism", "ist"];
    const ADJ: [&str; 9] = ["ous", "ful", "ive", "able", "ible", "less", "ish", "ical", "ic"];
    const VERB: [&str; 4] = ["ize", "ise", "ify", "ate"];
    if w.chars().any(|c| c.is_ascii_digit()) {
        return Pos::Other;
    }
    if w.ends_with("ly") && w.len() > 4 {
        return Pos::Adv;
    }
    if NOUN.iter().any(|s| w.ends_with(s)) {
        return Pos::Noun;
    }
    if ADJ.iter().any(|s| w.ends_with(s)) {
        return Pos::Adj;
    }
    if VERB.iter().any(|s| w.ends_with(s)) || w.ends_with("ing") || w.ends_with("ed") {
        return Pos::Verb;
    }
    Pos::Noun
}

/// Lexical tag ignoring context, plus whether the word is noun/verb ambiguous.
fn lexical(lex: &Lexicon, w: &str) -> (Pos, Vec<Pos>) {
    if is_punct(w) {
        return (Pos::Punct, vec![]);
    }
    if let Some(p) = lex.closed.get(w) {
        return (*p, vec![]);
    }
    if lex.irregular_verb_forms.contains_key(w) {
        return (Pos::Verb, vec![]);
    }
    if let Some(tags) = lex.open.get(w) {
        return (tags[0], tags.clone());
    }
    if lex.irregular(w).is_some() {
        return (Pos::Verb, vec![]);
    }
    if lex.irregular_singulars.contains_key(w) {
        return (Pos::Noun, vec![]);
    }
    let verb_lemma = morphology::lemmatize(lex, w, Pos::Verb);
    let noun_lemma = morphology::lemmatize(lex, w, Pos::Noun);
    let as_verb = verb_lemma != w && lex.is_known_verb(&verb_lemma);
    let as_noun = noun_lemma != w && lex.is_known_noun(&noun_lemma);
    match (as_verb, as_noun) {
        (true, true) => (Pos::Verb, vec![Pos::Verb, Pos::Noun]),
        (true, false) => (Pos::Verb, vec![]),
        (false, true) => (Pos::Noun, vec![]),
        (false, false) => {
            if let Some(stem) = w.strip_suffix("ly") {
                if lex.has_tag(stem, Pos::Adj) {
                    return (Pos::Adv, vec![]);
                }
            }
            (suffix_guess(w), vec![])
        }
    }
}

fn is_subject_like(lower: &[String], tags: &[Pos], i: usize) -> bool {
    SUBJECT_PRONOUNS.contains(&lower[i].as_str()) || tags[i] == Pos::Noun
}

pub(crate) fn tag(lex: &Lexicon, tokens: &[&str]) -> Vec<Pos> {
    let lower: Vec<String> = tokens.iter().map(|t| t.to_lowercase()).collect();
    let mut tags = Vec::with_capacity(tokens.len());
    let mut ambiguous = Vec::with_capacity(tokens.len());
    for w in &lower {
        let (p, alts) = lexical(lex, w);
        tags.push(p);
        ambiguous.push(alts);
    }

    // noun/verb/adjective ambiguity from the left neighbour
    for i in 0..tags.len() {
        if ambiguous[i].len() < 2 {
            continue;
        }
        let alts = &ambiguous[i];
        let prev = i.checked_sub(1).map(|p| (tags[p], lower[p].as_str()));
        let pick = match prev {
            Some((Pos::Det | Pos::Adj, _)) if alts.contains(&Pos::Noun) => Some(Pos::Noun),
            Some((_, w)) if COPULAS.contains(&w) && alts.contains(&Pos::Adj) => Some(Pos::Adj),
            Some((Pos::Pron, w)) if SUBJECT_PRONOUNS.contains(&w) && alts.contains(&Pos::Verb) => Some(Pos::Verb),
            Some((_, w)) if (MODALS.contains(&w) || w == "to") && alts.contains(&Pos::Verb) => Some(Pos::Verb),
            Some((Pos::Verb | Pos::Adp, _)) if alts.contains(&Pos::Noun) => Some(Pos::Noun),
            _ => None,
        };
        if let Some(p) = pick {
            tags[i] = p;
        }
    }

    // "like": discourse filler next to commas or hesitations, verb after a subject,
    // otherwise a preposition.
    for i in 0..tags.len() {
        if lower[i] != "like" {
            continue;
        }
        let prev = i.checked_sub(1);
        let next = (i + 1 < tags.len()).then_some(i + 1);
        let comma_adjacent = prev.is_some_and(|p| lower[p] == ",") || next.is_some_and(|n| lower[n] == ",");
        let hesitation_adjacent = prev.is_some_and(|p| lex.fillers.contains(&lower[p]))
            || next.is_some_and(|n| lex.fillers.contains(&lower[n]));
        tags[i] = if comma_adjacent || hesitation_adjacent {
            Pos::Intj
        } else if let Some(p) = prev {
            let w = lower[p].as_str();
            let after_adverb_subject = tags[p] == Pos::Adv && p > 0 && is_subject_like(&lower, &tags, p - 1);
            if is_subject_like(&lower, &tags, p)
                || after_adverb_subject
                || MODALS.contains(&w)
                || matches!(w, "to" | "do" | "don't" | "does" | "doesn't" | "did" | "didn't")
            {
                Pos::Verb
            } else {
                Pos::Adp
            }
        } else {
            Pos::Adp
        };
    }
    tags
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Vec<Pos> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        tag(&Lexicon::bundled(), &toks)
    }

    #[test]
    fn filler_um_is_interjection() {
        assert_eq!(t("Um , I went")[0], Pos::Intj);
        assert_eq!(t("I , um , went")[2], Pos::Intj);
    }

    #[test]
    fn like_after_pronoun_is_verb() {
        assert_eq!(t("I like apples")[1], Pos::Verb);
        assert_eq!(t("I really like apples")[2], Pos::Verb);
        assert_eq!(t("I went to , like , the store")[4], Pos::Intj);
        assert_eq!(t("it looks like rain")[2], Pos::Adp);
        assert_eq!(t("He is like his father")[2], Pos::Adp);
    }

    #[test]
    fn punctuation() {
        assert_eq!(t("hello , world .")[1], Pos::Punct);
        assert_eq!(t("hello , world .")[3], Pos::Punct);
    }

    #[test]
    fn open_and_closed_classes() {
        assert_eq!(
            t("She always tries to think positively ."),
            vec![Pos::Pron, Pos::Adv, Pos::Verb, Pos::Adp, Pos::Verb, Pos::Adv, Pos::Punct]
        );
        assert_eq!(t("She is always so optimistic"), vec![Pos::Pron, Pos::Verb, Pos::Adv, Pos::Cconj, Pos::Adj]);
        assert_eq!(t("the job requests two years")[2], Pos::Verb);
        assert_eq!(t("a good plan")[2], Pos::Noun);
        assert_eq!(t("we plan trips")[1], Pos::Verb);
    }
}
