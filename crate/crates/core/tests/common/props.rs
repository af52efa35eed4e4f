//! Invariants checked over seeded random learner histories.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{Duration, NaiveDate};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rlens_core::analytics::{
    apply_filter, build_correction_heatmap, frequency_order, rank_issues, severity_order, tutor_segments, Filter,
    RankKey, Shade,
};
use rlens_core::caf::{compute_mtld, MtldConfig};
use rlens_core::oracles::{baseline_oracle, tokenize, OracleConfig};
use rlens_core::store::{SessionStore, Snapshot};
use rlens_core::uptake::{build_uptake_timeline, CellState, RecordKind, Subject, Tab, UptakeAnalysis, UptakeConfig};

use super::synth::{pairs, synth_learner};

#[derive(Debug)]
pub struct Property {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Property {
    fn new(name: &'static str) -> Self {
        Property { name, cases: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub struct Case {
    pub snapshot: Snapshot,
    pub analysis: UptakeAnalysis,
    pub strict: UptakeAnalysis,
}

/// `n` random histories of 1–8 sessions, each analysed with and without tolerance.
pub fn cases(seed: u64, n: usize) -> Vec<Case> {
    let oracle = baseline_oracle();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let store = SessionStore::in_memory();
            let id = format!("p{i:03}");
            let mut sessions = synth_learner(rng.random_range(0..u64::MAX), &id, rng.random_range(1..9));
            sessions.shuffle(&mut rng);
            for s in sessions {
                store.ingest(s).unwrap();
            }
            let snapshot = (*store.snapshot(&id).unwrap()).clone();
            let analyse = |asr_tolerance| {
                build_uptake_timeline(
                    oracle.as_ref(),
                    &snapshot,
                    &OracleConfig::default(),
                    &UptakeConfig { asr_tolerance, ..UptakeConfig::default() },
                )
            };
            Case { analysis: analyse(true), strict: analyse(false), snapshot }
        })
        .collect()
}

pub fn random_filter(rng: &mut ChaCha8Rng, snapshot: &Snapshot) -> Filter {
    let tutors: Vec<String> = snapshot.sessions.iter().map(|s| s.tutor_id.clone()).collect();
    let topics: Vec<String> = snapshot.sessions.iter().map(|s| s.topic.clone()).collect();
    let mut f = Filter::default();
    if rng.random_bool(0.4) {
        let k = rng.random_range(1..3);
        f.tutors = Some(tutors.sample(rng, k).cloned().collect());
    }
    if rng.random_bool(0.3) {
        let k = rng.random_range(1..3);
        f.topics = Some(topics.sample(rng, k).cloned().collect());
    }
    if rng.random_bool(0.4) {
        let from = NaiveDate::from_ymd_opt(2024, 1, 1).unwrap() + Duration::days(rng.random_range(0..60));
        f.date_range = Some((from, from + Duration::days(rng.random_range(0..60))));
    }
    if rng.random_bool(0.4) {
        let a = rng.random_range(1..6);
        f.session_range = Some((a, a + rng.random_range(0..5)));
    }
    f
}

fn ids(s: &Snapshot) -> Vec<(String, u32)> {
    s.sessions.iter().map(|s| (s.session_id.clone(), s.session_index)).collect()
}

/// Row totals equal the records (uptake on) or tutor pointings (off) behind the
/// visible tiles.
pub fn heatmap_sums(cases: &[Case], seed: u64) -> Property {
    let mut p = Property::new("heatmap row sums equal records / pointings");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for c in cases {
        let filtered = apply_filter(&c.snapshot, &random_filter(&mut rng, &c.snapshot)).unwrap();
        for tab in Tab::ALL {
            for uptake in [true, false] {
                let payload = build_correction_heatmap(&c.analysis, &filtered, tab, uptake);
                for row in &payload.rows {
                    let t = c.analysis.timelines.iter().find(|t| t.key == row.rank.key).unwrap();
                    let visible: BTreeSet<u32> =
                        row.cells.iter().filter(|c| c.state == CellState::Count).map(|c| c.session_index).collect();
                    let want: u32 = if uptake {
                        t.records.iter().filter(|r| visible.contains(&r.session_index)).count() as u32
                    } else {
                        visible.iter().map(|i| t.pointings.get(i).copied().unwrap_or(0)).sum()
                    };
                    let got: u32 = row.cells.iter().map(|c| c.total()).sum();
                    p.check(got == want && got == row.rank.total, || {
                        format!("{}/{} uptake={uptake}: {got} vs {want}", c.snapshot.learner_id, row.rank.key)
                    });
                    if let Subject::Vocabulary { .. } = t.subject {
                        if uptake {
                            let green = t
                                .records
                                .iter()
                                .filter(|r| {
                                    visible.contains(&r.session_index) && r.kind == RecordKind::CorrectApplication
                                })
                                .count() as u32;
                            let got: u32 = row.cells.iter().filter_map(|c| c.green).sum();
                            p.check(got == green, || format!("{}: green {got} vs {green}", row.rank.key));
                        }
                    }
                }
            }
        }
    }
    p
}

pub fn uptake_after_source(cases: &[Case]) -> Property {
    let mut p = Property::new("no uptake record precedes its source correction");
    for c in cases {
        for t in &c.analysis.timelines {
            if let Subject::Vocabulary { .. } = t.subject {
                let source = t.first_pointed.unwrap_or(u32::MAX);
                for r in &t.records {
                    p.check(r.session_index > source, || {
                        format!("{} record in session {} before source {source}", t.key, r.session_index)
                    });
                }
            }
        }
    }
    p
}

/// Tolerance only ever removes grammar errors.
pub fn tolerance_monotone(cases: &[Case]) -> Property {
    let mut p = Property::new("tolerant grammar counts never exceed strict counts");
    let counts = |a: &UptakeAnalysis| -> BTreeMap<(String, u32), u32> {
        let mut m = BTreeMap::new();
        for t in a.timelines.iter().filter(|t| t.subject.tab() == Tab::Grammar) {
            for r in &t.records {
                *m.entry((t.key.clone(), r.session_index)).or_insert(0) += 1;
            }
        }
        m
    };
    for c in cases {
        let (on, off) = (counts(&c.analysis), counts(&c.strict));
        for (k, n) in &on {
            let strict = off.get(k).copied().unwrap_or(0);
            p.check(*n <= strict, || format!("{k:?}: tolerant {n} > strict {strict}"));
        }
        p.check(on.values().sum::<u32>() <= off.values().sum::<u32>(), || "total".into());
    }
    p
}

pub fn filter_algebra(cases: &[Case], seed: u64) -> Property {
    let mut p = Property::new("filters are idempotent and conjunctive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for c in cases {
        let (f, g) = (random_filter(&mut rng, &c.snapshot), random_filter(&mut rng, &c.snapshot));
        let once = apply_filter(&c.snapshot, &f).unwrap();
        let twice = apply_filter(&once, &f).unwrap();
        p.check(ids(&once) == ids(&twice), || format!("idempotence {f:?}"));
        let chained = apply_filter(&once, &g).unwrap();
        let joint = apply_filter(&c.snapshot, &f.and(&g)).unwrap();
        p.check(ids(&chained) == ids(&joint), || format!("conjunction {f:?} & {g:?}"));
        let by_hand: Vec<_> = c
            .snapshot
            .sessions
            .iter()
            .filter(|s| f.matches(s) && g.matches(s))
            .map(|s| (s.session_id.clone(), s.session_index))
            .collect();
        p.check(ids(&joint) == by_hand, || format!("matches {f:?} & {g:?}"));
    }
    p
}

fn random_key(rng: &mut ChaCha8Rng) -> RankKey {
    RankKey {
        key: format!("k{}", rng.random_range(0..6)),
        severity: *[0.0, 0.5, 1.0, 2.25].choose(rng).unwrap(),
        total: rng.random_range(0..4),
        latest: rng.random_range(0..4),
    }
}

/// Both orderings are total orders and ranking does not depend on input order.
pub fn rank_total_order(cases: &[Case], seed: u64) -> Property {
    let mut p = Property::new("issue ranking is a total order");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases.len() {
        let keys: Vec<RankKey> = (0..rng.random_range(2..12)).map(|_| random_key(&mut rng)).collect();
        for order in [severity_order, frequency_order] {
            for a in &keys {
                p.check(order(a, a).is_eq(), || format!("reflexive {a:?}"));
                for b in &keys {
                    p.check(order(a, b) == order(b, a).reverse(), || format!("antisymmetric {a:?} {b:?}"));
                    p.check(!order(a, b).is_eq() || a.key == b.key, || format!("ties only on key {a:?} {b:?}"));
                    for c in &keys {
                        let ok = !(order(a, b).is_le() && order(b, c).is_le()) || order(a, c).is_le();
                        p.check(ok, || format!("transitive {a:?} {b:?} {c:?}"));
                    }
                }
            }
        }
        let by_frequency = rng.random_bool(0.5);
        let mut x = keys.clone();
        let mut y = keys.clone();
        y.shuffle(&mut rng);
        rank_issues(&mut x, |k| k, by_frequency);
        rank_issues(&mut y, |k| k, by_frequency);
        let strip = |v: &[RankKey]| v.iter().map(|k| (k.key.clone(), k.total, k.latest)).collect::<Vec<_>>();
        p.check(strip(&x) == strip(&y), || "permutation dependent".into());
    }
    for c in cases {
        for tab in Tab::ALL {
            let rows = build_correction_heatmap(&c.analysis, &c.snapshot, tab, true).rows;
            let order = if tab == Tab::Fluency { frequency_order } else { severity_order };
            p.check(rows.windows(2).all(|w| order(&w[0].rank, &w[1].rank).is_lt()), || {
                format!("{} {tab:?} rows out of order", c.snapshot.learner_id)
            });
        }
    }
    p
}

pub fn segments_reconstruct(cases: &[Case], seed: u64) -> Property {
    let mut p = Property::new("tutor segments reconstruct the filtered sessions");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for c in cases {
        let filtered = apply_filter(&c.snapshot, &random_filter(&mut rng, &c.snapshot)).unwrap();
        let list: Vec<(u32, &str)> = filtered.sessions.iter().map(|s| (s.session_index, s.tutor_id.as_str())).collect();
        let segs = tutor_segments(list.iter().copied());
        let mut rebuilt = Vec::new();
        let mut rest = list.iter();
        for seg in &segs {
            let chunk: Vec<_> = rest.by_ref().take(seg.sessions).copied().collect();
            p.check(
                chunk.len() == seg.sessions
                    && chunk.iter().all(|(_, t)| *t == seg.tutor_id)
                    && chunk.first().map(|x| x.0) == Some(seg.first_index)
                    && chunk.last().map(|x| x.0) == Some(seg.last_index),
                || format!("segment {seg:?} vs {chunk:?}"),
            );
            rebuilt.extend(chunk);
        }
        p.check(rebuilt == list, || format!("{} lost sessions", c.snapshot.learner_id));
        p.check(segs.windows(2).all(|w| w[0].tutor_id != w[1].tutor_id && w[0].shade != w[1].shade), || {
            "adjacent segments".into()
        });
        p.check(segs.first().is_none_or(|s| s.shade == Shade::White), || "first shade".into());
    }
    p
}

/// Similarity is symmetric and bounded; masked prediction respects `top_k`.
pub fn oracle_contracts(cases: &[Case], seed: u64) -> Property {
    let mut p = Property::new("similarity symmetric, masked predictions within top_k");
    let oracle = baseline_oracle();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sentences: Vec<String> = pairs().into_iter().flat_map(|p| p.sentences).collect();
    for _ in 0..cases.len() {
        let a = sentences.choose(&mut rng).unwrap();
        let b = sentences.choose(&mut rng).unwrap();
        let ab = oracle.similarity(a, b).unwrap();
        let ba = oracle.similarity(b, a).unwrap();
        p.check(ab == ba && (0.0..=1.0).contains(&ab), || format!("{a} / {b}: {ab} {ba}"));
        p.check((oracle.similarity(a, a).unwrap() - 1.0).abs() < 1e-12, || format!("self {a}"));
        let toks = tokenize(a);
        let refs: Vec<&str> = toks.iter().map(String::as_str).collect();
        let k = rng.random_range(1..30);
        let i = rng.random_range(0..refs.len());
        p.check(oracle.predict_masked(&refs, i, 0).is_err(), || "top_k 0 accepted".into());
        let got = oracle.predict_masked(&refs, i, k).unwrap();
        let distinct: BTreeSet<&String> = got.iter().collect();
        p.check(got.len() <= k && distinct.len() == got.len(), || format!("{a} @{i} k={k}: {got:?}"));
    }
    p
}

pub fn mtld_bounds(cases: &[Case], seed: u64) -> Property {
    let mut p = Property::new("MTLD lies in (0, N]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases.len() {
        let vocab = rng.random_range(1..30);
        let words: Vec<String> =
            (0..rng.random_range(1..200)).map(|_| format!("w{}", rng.random_range(0..vocab))).collect();
        let x = rng.random_range(0.3..0.95);
        let m = compute_mtld(&words, &MtldConfig { ttr_threshold: x }).unwrap();
        p.check(m > 0.0 && m <= words.len() as f64, || format!("{m} for N={} x={x}", words.len()));
    }
    p
}

/// Every property over `n` shared random histories.
pub fn run_all(seed: u64, n: usize) -> Vec<Property> {
    let cases = cases(seed, n);
    vec![
        heatmap_sums(&cases, seed + 1),
        uptake_after_source(&cases),
        tolerance_monotone(&cases),
        filter_algebra(&cases, seed + 2),
        rank_total_order(&cases, seed + 3),
        segments_reconstruct(&cases, seed + 4),
        oracle_contracts(&cases, seed + 5),
        mtld_bounds(&cases, seed + 6),
    ]
}
