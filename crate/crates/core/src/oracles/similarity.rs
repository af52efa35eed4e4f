//! Cosine similarity over lemma term-frequency vectors.
//!
//! Lemma sequences are first rewritten through the bundled paraphrase table, which
//! maps multi-word expressions and near-synonyms onto shared concept terms.

use std::collections::BTreeMap;

use super::lexicon::Lexicon;
use super::{is_punct, morphology, tokenize, OracleError};

type TermVector = BTreeMap<String, f64>;

fn words(text: &str) -> Vec<String> {
    tokenize(text).into_iter().filter(|t| !is_punct(t)).map(|t| t.to_lowercase()).collect()
}

/// Replaces paraphrase-table matches (longest first, left to right) with concept terms.
fn canonicalize(lex: &Lexicon, lemmas: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(lemmas.len());
    let mut i = 0;
    'outer: while i < lemmas.len() {
        for (seq, concept) in &lex.paraphrases {
            if !seq.is_empty() && lemmas[i..].starts_with(seq) {
                out.push(format!("~{concept}"));
                i += seq.len();
                continue 'outer;
            }
        }
        out.push(lemmas[i].clone());
        i += 1;
    }
    out
}

fn lemma_vector(lex: &Lexicon, words: &[String]) -> TermVector {
    let lemmas: Vec<String> = words.iter().map(|w| morphology::base_form(lex, w)).collect();
    let mut v = TermVector::new();
    for term in canonicalize(lex, &lemmas) {
        if term.starts_with('~') || !lex.stopwords.contains(&term) {
            *v.entry(term).or_default() += 1.0;
        }
    }
    v
}

fn raw_vector(words: &[String]) -> TermVector {
    let mut v = TermVector::new();
    for w in words {
        *v.entry(w.clone()).or_default() += 1.0;
    }
    v
}

fn cosine(a: &TermVector, b: &TermVector) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    if a == b {
        return 1.0;
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let dot: f64 = small.iter().filter_map(|(k, x)| large.get(k).map(|y| x * y)).sum();
    let na: f64 = a.values().map(|x| x * x).sum();
    let nb: f64 = b.values().map(|x| x * x).sum();
    (dot / (na * nb).sqrt()).clamp(0.0, 1.0)
}

pub(crate) fn similarity(lex: &Lexicon, a: &str, b: &str) -> Result<f64, OracleError> {
    let (wa, wb) = (words(a), words(b));
    if wa.is_empty() || wb.is_empty() {
        return Err(OracleError::EmptyText);
    }
    let (va, vb) = (lemma_vector(lex, &wa), lemma_vector(lex, &wb));
    if va.is_empty() && vb.is_empty() {
        return Ok(cosine(&raw_vector(&wa), &raw_vector(&wb)));
    }
    Ok(cosine(&va, &vb))
}
