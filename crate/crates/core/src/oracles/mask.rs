//! Masked-slot prediction from a context table.
//!
//! The slot is keyed by the lemmas of its nearest word neighbours. Lookup order:
//! (left, right), (left, *), (*, right), then the synonym list of the masked
//! word's own lemma. Sentence edges use `^` and `$`.

use super::lexicon::Lexicon;
use super::{is_punct, morphology, OracleError};

fn neighbour(lex: &Lexicon, tokens: &[&str], from: usize, step: isize) -> String {
    let mut i = from as isize + step;
    while i >= 0 && (i as usize) < tokens.len() {
        let w = tokens[i as usize].to_lowercase();
        if !is_punct(&w) && !lex.fillers.contains(&w) {
            return morphology::base_form(lex, &w);
        }
        i += step;
    }
    if step < 0 { "^" } else { "$" }.to_string()
}

pub(crate) fn predict(
    lex: &Lexicon,
    tokens: &[&str],
    mask_index: usize,
    top_k: usize,
) -> Result<Vec<String>, OracleError> {
    if mask_index >= tokens.len() {
        return Err(OracleError::Index { index: mask_index, len: tokens.len() });
    }
    if top_k == 0 {
        return Err(OracleError::ZeroTopK);
    }
    let left = neighbour(lex, tokens, mask_index, -1);
    let right = neighbour(lex, tokens, mask_index, 1);
    let keys = [(left.clone(), right.clone()), (left, "*".to_string()), ("*".to_string(), right)];
    let found = keys.iter().find_map(|k| lex.mask_contexts.get(k)).or_else(|| {
        let lemma = morphology::base_form(lex, tokens[mask_index]);
        lex.synonyms.get(&lemma)
    });
    Ok(found.map(|c| c.iter().take(top_k).cloned().collect()).unwrap_or_default())
}
