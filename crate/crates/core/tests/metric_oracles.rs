mod common;

use common::metrics::{self, LABELED_UNITS, SYLLABLES};
use rlens_core::caf::{compute_grammar_accuracy, segment_c_units};
use rlens_core::oracles::baseline_oracle;

#[test]
fn fixture_labels_hold_one_by_one() {
    let o = baseline_oracle();
    for (word, n) in SYLLABLES {
        assert_eq!(o.count_syllables(word).unwrap(), n, "{word}");
    }
    for (sentence, clean) in LABELED_UNITS {
        let units = segment_c_units(o.as_ref(), &common::session_with(vec![sentence]));
        assert_eq!(units.len(), 1, "{sentence}");
        assert_eq!(compute_grammar_accuracy(&units), Some(if clean { 1.0 } else { 0.0 }), "{sentence}");
    }
}

#[test]
fn mtld_matches_reference() {
    let c = metrics::compare_mtld(11, 200);
    assert!(c.passed(), "{c:?}");
}

#[test]
fn accuracy_matches_reference() {
    let c = metrics::compare_accuracy(12, 100);
    assert!(c.passed(), "{c:?}");
}

#[test]
fn mlr_matches_reference() {
    let c = metrics::compare_mlr(13, 200);
    assert!(c.passed(), "{c:?}");
}

#[test]
fn ols_and_severity_match_reference() {
    let c = metrics::compare_ols(14, 100);
    assert!(c.passed(), "{c:?}");
}
