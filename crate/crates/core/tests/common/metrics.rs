//! Reference implementations of the session metrics, written independently of the
//! library, and randomized comparisons against it.

use rand::seq::IndexedRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rlens_core::analytics::{fit_ols, predict_severity};
use rlens_core::caf::{
    compute_grammar_accuracy, compute_mlr, compute_mtld, segment_c_units, FluencyConfig, MtldConfig,
};
use rlens_core::oracles::baseline_oracle;
use rlens_core::store::{Speaker, Token, Turn};

use super::session_with;

pub const TOLERANCE: f64 = 1e-9;

/// Outcome of one randomized comparison.
#[derive(Debug, Clone, Copy)]
pub struct Comparison {
    pub fixtures: usize,
    pub max_error: f64,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.fixtures >= 50 && self.max_error <= TOLERANCE
    }
}

fn compare(fixtures: usize, mut case: impl FnMut(usize) -> (f64, f64)) -> Comparison {
    let max_error = (0..fixtures)
        .map(|i| {
            let (got, want) = case(i);
            (got - want).abs() / want.abs().max(1.0)
        })
        .fold(0.0, f64::max);
    Comparison { fixtures, max_error }
}

// ---- MTLD ----

/// One directional pass, counting distinct types by sorting the current factor.
fn mtld_reference_pass(words: &[&str], threshold: f64) -> f64 {
    let mut factors = 0.0;
    let mut start = 0;
    for end in 1..=words.len() {
        let mut seg: Vec<&str> = words[start..end].to_vec();
        seg.sort_unstable();
        seg.dedup();
        let ttr = seg.len() as f64 / (end - start) as f64;
        if ttr < threshold {
            factors += 1.0;
            start = end;
        }
    }
    if start < words.len() {
        let mut seg: Vec<&str> = words[start..].to_vec();
        let len = seg.len() as f64;
        seg.sort_unstable();
        seg.dedup();
        factors += (1.0 - seg.len() as f64 / len) / (1.0 - threshold);
    }
    let n = words.len() as f64;
    if factors < 0.01 {
        n
    } else {
        f64::min(n / factors, n)
    }
}

pub fn mtld_reference(words: &[&str], threshold: f64) -> f64 {
    let reversed: Vec<&str> = words.iter().rev().copied().collect();
    0.5 * (mtld_reference_pass(words, threshold) + mtld_reference_pass(&reversed, threshold))
}

pub fn compare_mtld(seed: u64, fixtures: usize) -> Comparison {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    compare(fixtures, |_| {
        let vocab = rng.random_range(2..40);
        let len = rng.random_range(1..300);
        let words: Vec<String> = (0..len).map(|_| format!("w{}", rng.random_range(0..vocab))).collect();
        let threshold = *[0.72, 0.6, 0.8, 0.5].choose(&mut rng).unwrap();
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        let got = compute_mtld(&words, &MtldConfig { ttr_threshold: threshold }).unwrap();
        (got, mtld_reference(&refs, threshold))
    })
}

// ---- grammar accuracy ----

/// Hand-labeled learner sentences: true when a tolerant check finds nothing.
pub const LABELED_UNITS: [(&str, bool); 14] = [
    ("I live in a small city .", true),
    ("My favorite food is pasta .", true),
    ("We went to the beach last summer .", true),
    ("I work at a bank .", true),
    ("The weather was nice yesterday .", true),
    ("Um , I read books in the evening .", true),
    ("My brother , my brother plays soccer .", true),
    ("He go to school every day .", false),
    ("She like coffee .", false),
    ("I am agree with you .", false),
    ("I have two cat .", false),
    ("My sister work in a hospital .", false),
    ("They was happy .", false),
    ("He have a car .", false),
];

/// Sessions of 1..12 learner turns, each one labeled sentence.
pub fn compare_accuracy(seed: u64, fixtures: usize) -> Comparison {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let oracle = baseline_oracle();
    compare(fixtures, |_| {
        let picks: Vec<(&str, bool)> =
            (0..rng.random_range(1..12)).map(|_| *LABELED_UNITS.choose(&mut rng).unwrap()).collect();
        let session = session_with(picks.iter().map(|p| p.0).collect());
        let got = compute_grammar_accuracy(&segment_c_units(oracle.as_ref(), &session)).unwrap();
        let clean = picks.iter().filter(|p| p.1).count();
        (got, clean as f64 / picks.len() as f64)
    })
}

// ---- mean length of run ----

/// Words with hand-counted syllables.
pub const SYLLABLES: [(&str, u32); 12] = [
    ("cat", 1),
    ("dog", 1),
    ("sun", 1),
    ("table", 2),
    ("water", 2),
    ("happy", 2),
    ("window", 2),
    ("banana", 3),
    ("elephant", 3),
    ("computer", 3),
    ("tomorrow", 3),
    ("information", 4),
];

/// Runs end where the silence between two spoken words reaches the threshold;
/// punctuation is silent and does not split a run.
fn mlr_reference(turns: &[Vec<(&str, u64, u64)>], pause: u64) -> Option<f64> {
    let mut runs: Vec<u32> = Vec::new();
    for turn in turns {
        let words: Vec<&(&str, u64, u64)> = turn.iter().filter(|t| t.0 != "," && t.0 != ".").collect();
        for (i, w) in words.iter().enumerate() {
            let syl = SYLLABLES.iter().find(|s| s.0 == w.0).unwrap().1;
            if i == 0 || w.1 >= words[i - 1].2 + pause {
                runs.push(0);
            }
            *runs.last_mut().unwrap() += syl;
        }
    }
    (!runs.is_empty()).then(|| runs.iter().sum::<u32>() as f64 / runs.len() as f64)
}

pub fn compare_mlr(seed: u64, fixtures: usize) -> Comparison {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let oracle = baseline_oracle();
    compare(fixtures, |_| {
        let pause = *[250u64, 150, 400].choose(&mut rng).unwrap();
        let mut spec: Vec<Vec<(&str, u64, u64)>> = Vec::new();
        for _ in 0..rng.random_range(1..5) {
            let mut t = rng.random_range(0..1000u64);
            let mut turn = Vec::new();
            for _ in 0..rng.random_range(1..25) {
                let word = if rng.random_bool(0.15) {
                    *[",", "."].choose(&mut rng).unwrap()
                } else {
                    SYLLABLES.choose(&mut rng).unwrap().0
                };
                let len = rng.random_range(50..400);
                turn.push((word, t, t + len));
                // gaps straddle the pause threshold, exact hits included
                t += len + *[0, 10, pause - 1, pause, pause + 1, 2 * pause].choose(&mut rng).unwrap();
            }
            spec.push(turn);
        }
        let turns: Vec<Turn> = spec
            .iter()
            .map(|t| Turn {
                speaker: Speaker::Learner,
                audio_ref: None,
                tokens: t.iter().map(|&(w, s, e)| Token { text: w.into(), start_ms: s, end_ms: e }).collect(),
            })
            .collect();
        let cfg = FluencyConfig { pause_threshold_ms: pause };
        let got = compute_mlr(oracle.as_ref(), &turns, &cfg);
        let want = mlr_reference(&spec, pause);
        match (got, want) {
            (Some(g), Some(w)) => (g, w),
            (None, None) => (0.0, 0.0),
            _ => (f64::INFINITY, 0.0),
        }
    })
}

// ---- trend lines ----

/// Normal-equation solution `(n Σxy − Σx Σy) / (n Σx² − (Σx)²)`.
pub fn ols_reference(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let den = n * sxx - sx * sx;
    if den.abs() < 1e-12 {
        return (0.0, sy / n);
    }
    let slope = (n * sxy - sx * sy) / den;
    (slope, (sy - slope * sx) / n)
}

pub fn compare_ols(seed: u64, fixtures: usize) -> Comparison {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slopes = compare(fixtures, |_| {
        let points: Vec<(f64, f64)> = (0..rng.random_range(1..30))
            .map(|_| (rng.random_range(1..40) as f64, rng.random_range(0.0..100.0)))
            .collect();
        let line = fit_ols(&points).unwrap();
        let (slope, intercept) = ols_reference(&points);
        // fold both coefficients into one error
        let err = (line.slope - slope).abs().max((line.intercept - intercept).abs() / intercept.abs().max(1.0));
        (err, 0.0)
    });
    let severity = compare(fixtures, |_| {
        let n = rng.random_range(1..20u32);
        let counts: Vec<(u32, f64)> = (1..=n).map(|i| (i, rng.random_range(0..6) as f64)).collect();
        let pts: Vec<(f64, f64)> = counts.iter().map(|&(i, c)| (i as f64, c)).collect();
        let (slope, intercept) = ols_reference(&pts);
        let want = (slope * (n as f64 + 1.0) + intercept).max(0.0);
        (predict_severity(&counts).unwrap(), want)
    });
    slopes.fixtures += severity.fixtures;
    slopes.max_error = slopes.max_error.max(severity.max_error);
    slopes
}
