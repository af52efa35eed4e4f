//! Seeded synthetic learners: sessions with timed learner speech that contains
//! known grammar slips, vocabulary-pair uses and fillers, plus tutor corrections
//! and overall comments.

use chrono::{Duration, NaiveDate};
use rand::seq::IndexedRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rlens_core::oracles::tokenize;
use rlens_core::store::{Correction, CorrectionKind, Session, Speaker, Token, Turn, TutorScores, WrittenFeedback};

use super::tsv;

const TUTORS: [&str; 4] = ["T1", "T2", "T3", "T4"];
const TOPICS: [&str; 4] = ["daily life", "travel", "work", "food"];

const NEUTRAL: [&str; 8] = [
    "I live in a small city .",
    "My favorite food is pasta .",
    "We went to the beach last summer .",
    "I work at a bank .",
    "The weather was nice yesterday .",
    "I read books in the evening .",
    "My brother plays soccer .",
    "They visited their parents .",
];

/// (learner sentence with a slip, corrected sentence)
const GRAMMAR: [(&str, &str); 6] = [
    ("He go to school every day .", "He goes to school every day ."),
    ("She like coffee .", "She likes coffee ."),
    ("I am agree with you .", "I agree with you ."),
    ("Yesterday I go to the market .", "Yesterday I went to the market ."),
    ("I have two cat .", "I have two cats ."),
    ("My sister work in a hospital .", "My sister works in a hospital ."),
];

/// (line with fillers, the same line without them)
const FILLER_LINES: [(&str, &str); 5] = [
    ("Um , I went to , like , the store .", "I went to the store ."),
    ("It was , you know , fun .", "It was fun ."),
    ("I mean , it was good .", "It was good ."),
    ("Uh , I think so .", "I think so ."),
    ("We , um , stayed home .", "We stayed home ."),
];

const COMMENTS: [&str; 10] = [
    "Your use of past tense needs work.",
    "Great job today!",
    "Try to speak more fluently with fewer pauses.",
    "Work on the th sound in words like think.",
    "Try to expand your vocabulary about travel.",
    "Use conjunctions like because to connect ideas.",
    "Remember the third person singular form.",
    "Thank you for the lesson.",
    "You used a lot of fillers like um and uh.",
    "Your word choice was sometimes too simple.",
];

pub struct Pair {
    pub original: String,
    pub corrected: String,
    pub sentences: Vec<String>,
}

/// Vocabulary pairs with their labeled learner sentences.
pub fn pairs() -> Vec<Pair> {
    let labeled = tsv("vocab_uptake_labeled.tsv");
    tsv("vocab_pairs.tsv")
        .into_iter()
        .map(|r| Pair {
            sentences: labeled.iter().filter(|l| l[0] == r[0]).map(|l| l[1].clone()).collect(),
            original: r[1].clone(),
            corrected: r[2].clone(),
        })
        .collect()
}

pub fn timed_turn(rng: &mut ChaCha8Rng, speaker: Speaker, text: &str, t0: u64) -> Turn {
    let mut t = t0;
    let tokens = tokenize(text)
        .into_iter()
        .map(|text| {
            let start = t;
            let len = rng.random_range(120..400);
            // occasional long pause before the next word
            let gap = if rng.random_bool(0.15) { rng.random_range(250..900) } else { rng.random_range(0..200) };
            t = start + len + gap;
            Token { text, start_ms: start, end_ms: start + len }
        })
        .collect();
    Turn { speaker, audio_ref: None, tokens }
}

pub fn synth_learner(seed: u64, learner_id: &str, sessions: usize) -> Vec<Session> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = pairs();
    let mut date = NaiveDate::from_ymd_opt(2024, 1, 1).unwrap() + Duration::days(rng.random_range(0..30));
    let mut tutor = *TUTORS.choose(&mut rng).unwrap();
    let mut out = Vec::new();
    for n in 0..sessions {
        if rng.random_bool(0.4) {
            tutor = TUTORS.choose(&mut rng).unwrap();
        }
        let session_id = format!("{learner_id}-s{:02}", n + 1);
        let mut turns = Vec::new();
        let mut corrections = Vec::new();
        let mut t0 = 0;
        for k in 0..rng.random_range(2..6) {
            turns.push(timed_turn(&mut rng, Speaker::Tutor, "How was your week ?", t0));
            t0 += 5000;
            let mut lines = Vec::new();
            for _ in 0..rng.random_range(1..4) {
                let line = match rng.random_range(0..4) {
                    0 => {
                        let (bad, good) = GRAMMAR.choose(&mut rng).unwrap();
                        if rng.random_bool(0.5) {
                            corrections.push((CorrectionKind::Grammar, bad.to_string(), good.to_string()));
                        }
                        bad.to_string()
                    }
                    1 => {
                        let p = pairs.choose(&mut rng).unwrap();
                        if rng.random_bool(0.3) {
                            corrections.push((CorrectionKind::Vocabulary, p.original.clone(), p.corrected.clone()));
                            p.original.clone()
                        } else {
                            p.sentences.choose(&mut rng).unwrap().clone()
                        }
                    }
                    2 => {
                        let (line, clean) = FILLER_LINES.choose(&mut rng).unwrap();
                        if rng.random_bool(0.3) {
                            corrections.push((CorrectionKind::Fluency, line.to_string(), clean.to_string()));
                        }
                        line.to_string()
                    }
                    _ => NEUTRAL.choose(&mut rng).unwrap().to_string(),
                };
                lines.push(line);
            }
            let mut turn = timed_turn(&mut rng, Speaker::Learner, &lines.join(" "), t0);
            if rng.random_bool(0.5) {
                turn.audio_ref = Some(format!("audio/{session_id}/{k}.mp3"));
            }
            turns.push(turn);
            t0 += 20000;
        }
        let comments =
            (0..rng.random_range(0..4)).map(|_| COMMENTS.choose(&mut rng).unwrap().to_string()).collect::<Vec<_>>();
        let scale_max = if rng.random_bool(0.5) { 10.0 } else { 5.0 };
        let mut entries = std::collections::BTreeMap::new();
        for k in ["grammar", "vocabulary", "fluency"] {
            if rng.random_bool(0.8) {
                entries.insert(k.to_string(), rng.random_range(0..=scale_max as u32) as f64);
            }
        }
        out.push(Session {
            session_id: session_id.clone(),
            learner_id: learner_id.to_string(),
            tutor_id: tutor.to_string(),
            date,
            topic: TOPICS.choose(&mut rng).unwrap().to_string(),
            tutor_scores: TutorScores { entries, scale_min: 0.0, scale_max },
            transcript: turns,
            feedback: WrittenFeedback {
                overall_comments: comments,
                corrections: corrections
                    .into_iter()
                    .enumerate()
                    .map(|(i, (kind, original_sentence, corrected_sentence))| Correction {
                        correction_id: format!("c{}", i + 1),
                        original_sentence,
                        corrected_sentence,
                        kind,
                    })
                    .collect(),
            },
            session_index: 0,
        });
        date += Duration::days(rng.random_range(1..15));
    }
    out
}
