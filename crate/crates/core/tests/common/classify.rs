//! Labeled accuracy of the feedback ensemble and a brute-force vote oracle.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rlens_core::feedback::{tally, FeedbackCategory, FeedbackClassifier, Vote};
use rlens_core::oracles::baseline_oracle;

use super::tsv;

pub fn accuracy() -> (usize, usize, Vec<String>) {
    let clf = FeedbackClassifier::baseline(baseline_oracle());
    let mut right = 0;
    let mut wrong = Vec::new();
    let rows = tsv("feedback_labeled.tsv");
    for r in &rows {
        let want = FeedbackCategory::parse(&r[0]).unwrap();
        let got = clf.classify_feedback_sentence(&r[1]).unwrap();
        if got.category == want {
            right += 1;
        } else {
            wrong.push(format!("{want} -> {} {:?}\t{}", got.category, got.votes, r[1]));
        }
    }
    (right, rows.len(), wrong)
}

/// Counts votes per category; a lone plurality of two or three wins, otherwise the
/// most confident voter, otherwise the earliest category in priority order.
pub fn brute_force(votes: &[Vote; 3]) -> FeedbackCategory {
    let mut best = None;
    for (rank, &cat) in FeedbackCategory::ALL.iter().enumerate() {
        let mine: Vec<f64> = votes.iter().filter(|v| v.category == cat).map(|v| v.confidence).collect();
        if mine.is_empty() {
            continue;
        }
        let key = (mine.len(), mine.iter().sum::<f64>() / mine.len() as f64, std::cmp::Reverse(rank));
        match best {
            Some((k, _)) if key.partial_cmp(&k) != Some(std::cmp::Ordering::Greater) => {}
            _ => best = Some((key, cat)),
        }
    }
    best.unwrap().1
}

pub fn vote_oracle_agrees(cases: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..cases).all(|_| {
        let mut vote = || Vote {
            category: FeedbackCategory::ALL[rng.random_range(0..6)],
            // coarse confidences so that exact ties happen often
            confidence: rng.random_range(0..5) as f64 / 4.0,
        };
        let votes = [vote(), vote(), vote()];
        tally(&votes).0 == brute_force(&votes)
    })
}
