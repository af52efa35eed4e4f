use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Location;
use crate::oracles::{is_punct, tokenize, LanguageOracle, Pos};
use crate::store::Session;

/// The tracked discourse fillers.
pub const FILLERS: [&str; 5] = ["uh", "um", "like", "you know", "I mean"];

/// Words that open a clause complement, which counts as the verb's object.
const COMPLEMENTIZERS: [&str; 11] =
    ["that", "what", "how", "why", "where", "when", "who", "which", "if", "whether", "whom"];

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillerCount {
    pub count: usize,
    pub locations: Vec<Location>,
}

/// True when the verb at `verb` has no object before the next boundary.
fn objectless<O: LanguageOracle + ?Sized>(oracle: &O, lower: &[String], tags: &[Pos], verb: usize) -> bool {
    for k in verb + 1..lower.len() {
        let w = lower[k].as_str();
        if is_punct(w) {
            return true;
        }
        if oracle.is_hesitation(w) {
            continue;
        }
        if matches!(tags[k], Pos::Noun | Pos::Pron | Pos::Det) || COMPLEMENTIZERS.contains(&w) {
            return false;
        }
    }
    true
}

/// Filler use per learner turn: "uh"/"um"/"like" when tagged as interjections,
/// "you know"/"I mean" when the verb has a subject but no object.
pub fn detect_filler_words<O: LanguageOracle + ?Sized>(oracle: &O, session: &Session) -> BTreeMap<String, FillerCount> {
    let mut out: BTreeMap<String, FillerCount> =
        FILLERS.iter().map(|f| (f.to_string(), FillerCount::default())).collect();
    let mut hit = |filler: &str, turn_index: usize, span: (usize, usize)| {
        let c = out.get_mut(filler).expect("known filler");
        c.count += 1;
        c.locations.push(Location { turn_index, span });
    };
    for (turn_index, turn) in session.learner_turns() {
        let texts = turn.texts();
        let tags = oracle.tag_pos(&texts);
        let lower: Vec<String> = texts.iter().map(|t| t.to_lowercase()).collect();
        for i in 0..lower.len() {
            match lower[i].as_str() {
                w @ ("uh" | "um" | "like") if tags[i] == Pos::Intj => hit(w, turn_index, (i, i + 1)),
                "you" | "i" if i + 1 < lower.len() => {
                    let filler = match (lower[i].as_str(), lower[i + 1].as_str()) {
                        ("you", "know") => "you know",
                        ("i", "mean") => "I mean",
                        _ => continue,
                    };
                    if objectless(oracle, &lower, &tags, i + 1) {
                        hit(filler, turn_index, (i, i + 2));
                    }
                }
                _ => {}
            }
        }
    }
    out
}

/// Fillers quoted in a tutor's sentence, e.g. the original of a fluency correction.
pub fn filler_mentions(sentence: &str) -> Vec<&'static str> {
    let lower: Vec<String> = tokenize(sentence).iter().map(|t| t.to_lowercase()).collect();
    FILLERS
        .iter()
        .copied()
        .filter(|f| {
            let parts: Vec<String> = f.split(' ').map(str::to_lowercase).collect();
            lower.windows(parts.len()).any(|w| w == parts.as_slice())
        })
        .collect()
}
