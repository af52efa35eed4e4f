//! Suffix-stripping lemmatizer and inflection generator.
//!
//! Lexicon-validated candidates are preferred; unknown words fall back to plain
//! suffix rules so every alphabetic input still gets a deterministic lemma.

use std::collections::BTreeSet;

use super::lexicon::Lexicon;
use super::{Pos, VerbForm};

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn chars(w: &str) -> Vec<char> {
    w.chars().collect()
}

/// Consonant-vowel-consonant ending of a short word ("stop", "plan"): doubles before a suffix.
fn doubles_final(w: &str) -> bool {
    let c = chars(w);
    let n = c.len();
    if !(3..=4).contains(&n) {
        return false;
    }
    let last = c[n - 1];
    !is_vowel(last)
        && !matches!(last, 'w' | 'x' | 'y')
        && is_vowel(c[n - 2])
        && !is_vowel(c[n - 3])
        && c.iter().filter(|ch| is_vowel(**ch)).count() == 1
}

fn sibilant_end(w: &str) -> bool {
    w.ends_with('s')
        || w.ends_with('x')
        || w.ends_with('z')
        || w.ends_with("ch")
        || w.ends_with("sh")
        || (w.ends_with('o') && w.len() > 2)
}

fn consonant_y(w: &str) -> bool {
    let c = chars(w);
    c.len() >= 2 && c[c.len() - 1] == 'y' && !is_vowel(c[c.len() - 2])
}

pub(crate) fn plural_s(w: &str) -> String {
    if consonant_y(w) {
        format!("{}ies", &w[..w.len() - 1])
    } else if sibilant_end(w) {
        format!("{w}es")
    } else {
        format!("{w}s")
    }
}

pub(crate) fn regular_past(w: &str) -> String {
    if w.ends_with('e') {
        format!("{w}d")
    } else if consonant_y(w) {
        format!("{}ied", &w[..w.len() - 1])
    } else if doubles_final(w) {
        format!("{w}{}ed", w.chars().last().unwrap_or_default())
    } else {
        format!("{w}ed")
    }
}

pub(crate) fn gerund(w: &str) -> String {
    if let Some(stem) = w.strip_suffix("ie") {
        format!("{stem}ying")
    } else if w.ends_with('e') && !w.ends_with("ee") && !w.ends_with("ye") && !w.ends_with("oe") && w.len() > 2 {
        format!("{}ing", &w[..w.len() - 1])
    } else if doubles_final(w) {
        format!("{w}{}ing", w.chars().last().unwrap_or_default())
    } else {
        format!("{w}ing")
    }
}

/// Candidate stems for a suffixed form, most specific first.
fn verb_stem_candidates(w: &str) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(stem) = w.strip_suffix("ies") {
        out.push(format!("{stem}y"));
    }
    if let Some(stem) = w.strip_suffix("es") {
        out.push(stem.to_string());
    }
    if let Some(stem) = w.strip_suffix('s') {
        if !w.ends_with("ss") {
            out.push(stem.to_string());
        }
    }
    if let Some(stem) = w.strip_suffix("ied") {
        out.push(format!("{stem}y"));
    }
    if let Some(stem) = w.strip_suffix("ed") {
        out.push(format!("{stem}e"));
        out.push(stem.to_string());
        if let Some(un) = undouble(stem) {
            out.push(un);
        }
    }
    if let Some(stem) = w.strip_suffix("ying") {
        out.push(format!("{stem}ie"));
    }
    if let Some(stem) = w.strip_suffix("ing") {
        out.push(stem.to_string());
        out.push(format!("{stem}e"));
        if let Some(un) = undouble(stem) {
            out.push(un);
        }
    }
    out.retain(|s| s.len() >= 2);
    out
}

fn noun_stem_candidates(w: &str) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(stem) = w.strip_suffix("ies") {
        out.push(format!("{stem}y"));
    }
    if let Some(stem) = w.strip_suffix("es") {
        out.push(stem.to_string());
    }
    if let Some(stem) = w.strip_suffix('s') {
        if !w.ends_with("ss") {
            out.push(stem.to_string());
        }
    }
    out.retain(|s| s.len() >= 2);
    out
}

fn undouble(stem: &str) -> Option<String> {
    let c = chars(stem);
    let n = c.len();
    (n >= 3 && c[n - 1] == c[n - 2] && !is_vowel(c[n - 1])).then(|| c[..n - 1].iter().collect())
}

/// Rule-only stripping for words the lexicon does not know.
fn fallback_strip(w: &str) -> String {
    let n = w.chars().count();
    if n > 4 {
        if let Some(stem) = w.strip_suffix("ies") {
            return format!("{stem}y");
        }
        if let Some(stem) = w.strip_suffix("ied") {
            return format!("{stem}y");
        }
    }
    if n > 4 {
        for suf in ["sses", "shes", "ches", "xes", "zes"] {
            if w.ends_with(suf) {
                return w[..w.len() - 2].to_string();
            }
        }
    }
    if n > 5 {
        if let Some(stem) = w.strip_suffix("ing") {
            return undouble(stem).unwrap_or_else(|| stem.to_string());
        }
    }
    if n > 4 {
        if let Some(stem) = w.strip_suffix("ed") {
            return undouble(stem).unwrap_or_else(|| stem.to_string());
        }
    }
    if n > 3 && w.ends_with('s') && !w.ends_with("ss") && !w.ends_with("us") && !w.ends_with("is") {
        return w[..w.len() - 1].to_string();
    }
    w.to_string()
}

pub(crate) fn lemmatize(lex: &Lexicon, word: &str, pos: Pos) -> String {
    let w = word.to_lowercase();
    match pos {
        Pos::Verb => {
            if let Some(base) = lex.irregular_verb_forms.get(&w) {
                return base.clone();
            }
            if lex.is_known_verb(&w) {
                return w;
            }
            verb_stem_candidates(&w).into_iter().find(|c| lex.is_known_verb(c)).unwrap_or_else(|| fallback_strip(&w))
        }
        Pos::Noun => {
            if let Some(sing) = lex.irregular_singulars.get(&w) {
                return sing.clone();
            }
            if lex.is_known_noun(&w) {
                return w;
            }
            noun_stem_candidates(&w).into_iter().find(|c| lex.is_known_noun(c)).unwrap_or_else(|| fallback_strip(&w))
        }
        Pos::Adj => {
            if lex.has_tag(&w, Pos::Adj) {
                return w;
            }
            for suf in ["est", "er"] {
                if let Some(stem) = w.strip_suffix(suf) {
                    for cand in [stem.to_string(), format!("{stem}e"), undouble(stem).unwrap_or_default()] {
                        if lex.has_tag(&cand, Pos::Adj) {
                            return cand;
                        }
                    }
                }
            }
            w
        }
        _ => w,
    }
}

/// Lemma without a part-of-speech hint.
pub(crate) fn base_form(lex: &Lexicon, word: &str) -> String {
    let w = word.to_lowercase();
    if let Some(base) = lex.irregular_verb_forms.get(&w) {
        return base.clone();
    }
    if let Some(sing) = lex.irregular_singulars.get(&w) {
        return sing.clone();
    }
    if lex.closed.contains_key(&w) || lex.open.contains_key(&w) {
        return w;
    }
    if let Some(c) = verb_stem_candidates(&w).into_iter().find(|c| lex.is_known_verb(c)) {
        return c;
    }
    if let Some(c) = noun_stem_candidates(&w).into_iter().find(|c| lex.is_known_noun(c)) {
        return c;
    }
    if let Some(c) =
        noun_stem_candidates(&w).into_iter().chain(verb_stem_candidates(&w)).find(|c| lex.open.contains_key(c))
    {
        return c;
    }
    fallback_strip(&w)
}

/// Inflections of the word's lexeme that map back to the same base form.
pub(crate) fn variants(lex: &Lexicon, word: &str) -> BTreeSet<String> {
    let w = word.to_lowercase();
    let lemma = base_form(lex, &w);
    let mut cands = vec![lemma.clone(), plural_s(&lemma), regular_past(&lemma), gerund(&lemma)];
    if let Some(irr) = lex.irregular(&lemma) {
        cands.extend(irr.past.iter().cloned());
        cands.extend(irr.participle.iter().cloned());
        if lemma == "be" {
            cands.extend(["am", "is", "are", "being"].map(String::from));
        }
    }
    if let Some(pl) = lex.irregular_plurals.get(&lemma) {
        cands.push(pl.clone());
    }
    let mut out: BTreeSet<String> = cands.into_iter().filter(|c| base_form(lex, c) == lemma).collect();
    out.insert(w);
    out
}

pub(crate) fn verb_form(lex: &Lexicon, word: &str) -> Option<VerbForm> {
    let w = word.to_lowercase();
    match w.as_str() {
        "is" | "has" | "does" | "goes" | "doesn't" | "isn't" | "hasn't" => return Some(VerbForm::ThirdSingular),
        "am" | "are" | "don't" | "aren't" | "haven't" => return Some(VerbForm::Base),
        "was" | "were" | "didn't" | "wasn't" | "weren't" => return Some(VerbForm::Past),
        "being" => return Some(VerbForm::Gerund),
        _ => {}
    }
    for irr in &lex.irregular_verbs {
        let past = irr.past.contains(&w);
        let part = irr.participle.contains(&w);
        if w == irr.base && !past && !part {
            return Some(VerbForm::Base);
        }
        match (past, part) {
            (true, true) if w == irr.base => return Some(VerbForm::Base),
            (true, true) => return Some(VerbForm::PastOrParticiple),
            (true, false) => return Some(VerbForm::Past),
            (false, true) if w == irr.base => return Some(VerbForm::Base),
            (false, true) => return Some(VerbForm::Participle),
            _ => {}
        }
    }
    let lemma = lemmatize(lex, &w, Pos::Verb);
    if !lex.is_known_verb(&lemma) {
        return None;
    }
    if w == lemma {
        Some(VerbForm::Base)
    } else if w.ends_with("ing") {
        Some(VerbForm::Gerund)
    } else if w.ends_with('d') {
        if lex.irregular(&lemma).is_some() {
            None
        } else {
            Some(VerbForm::PastOrParticiple)
        }
    } else if w.ends_with('s') {
        Some(VerbForm::ThirdSingular)
    } else {
        None
    }
}

/// Third-person singular present of a base verb.
pub(crate) fn third_singular(base: &str) -> String {
    match base {
        "be" => "is".into(),
        "have" => "has".into(),
        "do" => "does".into(),
        "go" => "goes".into(),
        _ => plural_s(base),
    }
}

pub(crate) fn past_of(lex: &Lexicon, base: &str) -> String {
    lex.irregular(base).and_then(|v| v.past.first().cloned()).unwrap_or_else(|| regular_past(base))
}

pub(crate) fn participle_of(lex: &Lexicon, base: &str) -> String {
    lex.irregular(base).and_then(|v| v.participle.first().cloned()).unwrap_or_else(|| regular_past(base))
}
