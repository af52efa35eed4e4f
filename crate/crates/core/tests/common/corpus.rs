//! Vocabulary-uptake evaluation over the labeled learner-sentence corpus.

use std::collections::BTreeMap;

use rlens_core::oracles::{baseline_oracle, OracleConfig};
use rlens_core::store::CorrectionKind;
use rlens_core::uptake::{detect_vocabulary_uptake, extract_expression_pair, ExpressionPair, RecordKind, UptakeConfig};

use super::*;

pub struct Tally {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub misses: Vec<String>,
}

impl Tally {
    pub fn precision(&self) -> f64 {
        self.tp as f64 / (self.tp + self.fp).max(1) as f64
    }

    pub fn recall(&self) -> f64 {
        self.tp as f64 / (self.tp + self.fn_).max(1) as f64
    }
}

pub fn pairs() -> BTreeMap<String, (ExpressionPair, String, String)> {
    let o = baseline_oracle();
    tsv("vocab_pairs.tsv")
        .into_iter()
        .map(|r| {
            let c = correction("c1", CorrectionKind::Vocabulary, &r[1], &r[2]);
            let p = extract_expression_pair(o.as_ref(), &c, "s0", &UptakeConfig::default()).unwrap();
            (r[0].clone(), (p, r[3].clone(), r[4].clone()))
        })
        .collect()
}

pub fn evaluate() -> Tally {
    let o = baseline_oracle();
    let cfg = OracleConfig::default();
    let pairs = pairs();
    let mut t = Tally { tp: 0, fp: 0, fn_: 0, misses: Vec::new() };
    for row in tsv("vocab_uptake_labeled.tsv") {
        let (pair, _, _) = &pairs[&row[0]];
        let mut s = session("s1", "2024-02-01", "T1", vec![learner(&row[1])]);
        s.session_index = 2;
        let found = detect_vocabulary_uptake(o.as_ref(), &s, pair, &cfg);
        let expected = match row[2].as_str() {
            "missed" => Some(RecordKind::MissedApplication),
            "correct" => Some(RecordKind::CorrectApplication),
            _ => None,
        };
        let hits = found.iter().filter(|r| Some(r.kind) == expected).count();
        let wrong = found.len() - hits;
        match expected {
            Some(_) if hits > 0 => t.tp += 1,
            Some(_) => t.fn_ += 1,
            None => {}
        }
        t.fp += wrong + hits.saturating_sub(1);
        if (expected.is_some() && hits == 0) || wrong > 0 {
            t.misses.push(format!(
                "{}\t{}\t{}\t{:?}",
                row[0],
                row[1],
                row[2],
                found.iter().map(|r| r.kind).collect::<Vec<_>>()
            ));
        }
    }
    t
}
