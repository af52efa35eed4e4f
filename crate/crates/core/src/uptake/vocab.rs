use super::diff::{align, merge_close, regions, Region};
use super::{ExpressionPair, Location, RecordKind, Source, UptakeConfig, UptakeError, UptakeRecord};
use crate::oracles::{is_punct, split_token_sentences, tokenize, LanguageOracle, OracleConfig, Pos};
use crate::store::{Correction, CorrectionKind, Session};

struct Sentence {
    words: Vec<String>,
    lemmas: Vec<String>,
    tags: Vec<Pos>,
}

impl Sentence {
    fn new<O: LanguageOracle + ?Sized>(oracle: &O, text: &str) -> Self {
        let tokens = tokenize(text);
        let refs: Vec<&str> = tokens.iter().map(String::as_str).collect();
        let all_tags = oracle.tag_pos(&refs);
        let mut s = Sentence { words: Vec::new(), lemmas: Vec::new(), tags: Vec::new() };
        for (tok, tag) in tokens.iter().zip(all_tags) {
            if !is_punct(tok) {
                s.lemmas.push(oracle.base_form(&tok.to_lowercase()));
                s.words.push(tok.clone());
                s.tags.push(tag);
            }
        }
        s
    }

    fn is_content(&self, i: usize) -> bool {
        self.tags[i].is_content()
    }
}

/// Contiguous runs of `edited` that hold at least one content word.
fn sub_expressions(s: &Sentence, edited: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for start in 0..edited.len() {
        for end in start + 1..=edited.len() {
            let run = &edited[start..end];
            if run.iter().any(|&i| s.is_content(i)) {
                out.push(run.to_vec());
            }
        }
    }
    out
}

/// Gives an empty side one token of context: the next aligned word, else the previous.
fn widen(r: &mut Region, len_a: usize, len_b: usize) {
    if !r.a.is_empty() && !r.b.is_empty() {
        return;
    }
    let (ea, eb) = r.end;
    if ea < len_a && eb < len_b {
        r.a.push(ea);
        r.b.push(eb);
    } else if r.at.0 > 0 && r.at.1 > 0 {
        r.a.insert(0, r.at.0 - 1);
        r.b.insert(0, r.at.1 - 1);
    }
}

fn best_pair<O: LanguageOracle + ?Sized>(
    oracle: &O,
    a: &Sentence,
    b: &Sentence,
    r: &Region,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let text = |s: &Sentence, idx: &[usize]| idx.iter().map(|&i| s.words[i].as_str()).collect::<Vec<_>>().join(" ");
    let lemmas = |s: &Sentence, idx: &[usize]| idx.iter().map(|&i| s.lemmas[i].clone()).collect::<Vec<_>>();
    let cand_a = sub_expressions(a, &r.a);
    let cand_b = sub_expressions(b, &r.b);
    let mut best: Option<(f64, usize, usize, usize, Vec<usize>, Vec<usize>)> = None;
    for ea in &cand_a {
        for eb in &cand_b {
            if lemmas(a, ea) == lemmas(b, eb) {
                continue;
            }
            let score = oracle.similarity(&text(a, ea), &text(b, eb)).unwrap_or(0.0);
            let key = (score, ea.len() + eb.len(), ea[0], eb[0]);
            let better = match &best {
                None => true,
                Some((s, len, ia, ib, _, _)) => score > *s || (score == *s && (key.1, key.2, key.3) < (*len, *ia, *ib)),
            };
            if better {
                best = Some((score, key.1, key.2, key.3, ea.clone(), eb.clone()));
            }
        }
    }
    best.map(|(_, _, _, _, ea, eb)| (ea, eb))
}

/// Last content word, preferring one that is not a stopword ("is so optimistic" → "optimistic").
fn head<O: LanguageOracle + ?Sized>(oracle: &O, s: &Sentence, idx: &[usize]) -> String {
    let content = || idx.iter().rev().filter(|&&i| s.is_content(i));
    content()
        .find(|&&i| !oracle.is_stopword(&s.words[i]))
        .or_else(|| content().next())
        .or(idx.last())
        .map(|&i| s.words[i].to_lowercase())
        .expect("non-empty expression")
}

/// One expression pair per diff region of a vocabulary correction.
pub fn extract_expression_pairs<O: LanguageOracle + ?Sized>(
    oracle: &O,
    correction: &Correction,
    session_id: &str,
    cfg: &UptakeConfig,
) -> Result<Vec<ExpressionPair>, UptakeError> {
    if correction.kind != CorrectionKind::Vocabulary {
        return Err(UptakeError::WrongKind(format!("{:?}", correction.kind)));
    }
    let a = Sentence::new(oracle, &correction.original_sentence);
    let b = Sentence::new(oracle, &correction.corrected_sentence);
    if a.lemmas == b.lemmas {
        return Err(UptakeError::NoDifference);
    }
    let mut regs = merge_close(regions(&align(&a.lemmas, &b.lemmas)), cfg.merge_gap);
    let mut pairs = Vec::new();
    for r in &mut regs {
        widen(r, a.words.len(), b.words.len());
        if let Some((ea, eb)) = best_pair(oracle, &a, &b, r) {
            pairs.push(ExpressionPair {
                original_expr: ea.iter().map(|&i| a.words[i].clone()).collect(),
                suggested_expr: eb.iter().map(|&i| b.words[i].clone()).collect(),
                original_head: head(oracle, &a, &ea),
                suggested_head: head(oracle, &b, &eb),
                source: Source { session_id: session_id.to_string(), correction_id: correction.correction_id.clone() },
            });
        }
    }
    if pairs.is_empty() {
        return Err(UptakeError::NoContentWord);
    }
    Ok(pairs)
}

/// The highest-scoring pair across all diff regions (first region on ties).
pub fn extract_expression_pair<O: LanguageOracle + ?Sized>(
    oracle: &O,
    correction: &Correction,
    session_id: &str,
    cfg: &UptakeConfig,
) -> Result<ExpressionPair, UptakeError> {
    let mut pairs = extract_expression_pairs(oracle, correction, session_id, cfg)?;
    let score = |p: &ExpressionPair| oracle.similarity(&p.original_text(), &p.suggested_text()).unwrap_or(0.0);
    let mut best = 0;
    let mut best_score = score(&pairs[0]);
    for (i, p) in pairs.iter().enumerate().skip(1) {
        let s = score(p);
        if s > best_score {
            best = i;
            best_score = s;
        }
    }
    Ok(pairs.swap_remove(best))
}

/// Lemma-sequence identity of a pair; pairs with equal keys are one subject.
pub fn vocab_key<O: LanguageOracle + ?Sized>(oracle: &O, pair: &ExpressionPair) -> String {
    let lemmas = |e: &[String]| e.iter().map(|w| oracle.base_form(&w.to_lowercase())).collect::<Vec<_>>().join(" ");
    format!("vocab:{}>{}", lemmas(&pair.original_expr), lemmas(&pair.suggested_expr))
}

/// Scans learner turns for missed and correct applications of `pair`.
///
/// Each occurrence of one head word is masked; the record is emitted only when the
/// other head word is among the predicted candidates. Pairs whose heads are the same
/// lexeme ("am agree" → "agree") are matched as whole expressions instead.
pub fn detect_vocabulary_uptake<O: LanguageOracle + ?Sized>(
    oracle: &O,
    session: &Session,
    pair: &ExpressionPair,
    cfg: &OracleConfig,
) -> Vec<UptakeRecord> {
    let key = vocab_key(oracle, pair);
    let record = |kind, turn_index, span| UptakeRecord {
        subject: key.clone(),
        session_id: session.session_id.clone(),
        session_index: session.session_index,
        kind,
        location: Location { turn_index, span },
        tooltip: Some(pair.suggested_text()),
    };
    let mut out = Vec::new();
    let same_head = oracle.same_lexeme(&pair.original_head, &pair.suggested_head);
    for (turn_index, turn) in session.learner_turns() {
        let texts = turn.texts();
        if same_head {
            for (kind, span) in expression_matches(oracle, &texts, pair) {
                out.push(record(kind, turn_index, span));
            }
            continue;
        }
        for range in split_token_sentences(&texts) {
            let sentence = &texts[range.clone()];
            for (k, word) in sentence.iter().enumerate() {
                if is_punct(word) {
                    continue;
                }
                let (kind, other) = if oracle.same_lexeme(word, &pair.original_head) {
                    (RecordKind::MissedApplication, &pair.suggested_head)
                } else if oracle.same_lexeme(word, &pair.suggested_head) {
                    (RecordKind::CorrectApplication, &pair.original_head)
                } else {
                    continue;
                };
                let Ok(candidates) = oracle.predict_masked(sentence, k, cfg.mask_top_k) else {
                    continue;
                };
                if candidates.iter().any(|c| oracle.same_lexeme(c, other)) {
                    let at = range.start + k;
                    out.push(record(kind, turn_index, (at, at + 1)));
                }
            }
        }
    }
    out
}

/// Whole-expression matches over word tokens (punctuation and hesitations skipped).
/// Suggested-expression matches inside an original-expression match are dropped.
fn expression_matches<O: LanguageOracle + ?Sized>(
    oracle: &O,
    texts: &[&str],
    pair: &ExpressionPair,
) -> Vec<(RecordKind, (usize, usize))> {
    let idx: Vec<usize> =
        (0..texts.len()).filter(|&i| !is_punct(texts[i]) && !oracle.is_hesitation(texts[i])).collect();
    let lemmas: Vec<String> = idx.iter().map(|&i| oracle.base_form(&texts[i].to_lowercase())).collect();
    let target = |e: &[String]| e.iter().map(|w| oracle.base_form(&w.to_lowercase())).collect::<Vec<_>>();
    let find = |seq: &[String]| -> Vec<(usize, usize)> {
        if seq.is_empty() || seq.len() > lemmas.len() {
            return Vec::new();
        }
        (0..=lemmas.len() - seq.len())
            .filter(|&s| lemmas[s..s + seq.len()] == *seq)
            .map(|s| (idx[s], idx[s + seq.len() - 1] + 1))
            .collect()
    };
    let missed = find(&target(&pair.original_expr));
    let applied = find(&target(&pair.suggested_expr))
        .into_iter()
        .filter(|&(b, e)| !missed.iter().any(|&(mb, me)| b < me && mb < e));
    let mut out: Vec<_> = missed
        .iter()
        .map(|&s| (RecordKind::MissedApplication, s))
        .chain(applied.map(|s| (RecordKind::CorrectApplication, s)))
        .collect();
    out.sort_by_key(|&(_, s)| s);
    out
}
