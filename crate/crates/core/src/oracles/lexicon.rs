//! Bundled plain-text tables backing the baseline oracles.
//!
//! Every table is tab-separated, one entry per line; `#` starts a comment line.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::Pos;

pub(crate) const FUNCTION_WORDS: &str = include_str!("../../data/function_words.tsv");
pub(crate) const OPEN_LEXICON: &str = include_str!("../../data/open_lexicon.tsv");
pub(crate) const IRREGULAR_VERBS: &str = include_str!("../../data/irregular_verbs.tsv");
pub(crate) const IRREGULAR_NOUNS: &str = include_str!("../../data/irregular_nouns.tsv");
pub(crate) const STOPWORDS: &str = include_str!("../../data/stopwords.txt");
pub(crate) const ABBREVIATIONS: &str = include_str!("../../data/abbreviations.txt");
pub(crate) const FILLERS: &str = include_str!("../../data/fillers.txt");
pub(crate) const MASK_CONTEXTS: &str = include_str!("../../data/mask_contexts.tsv");
pub(crate) const SYNONYMS: &str = include_str!("../../data/synonyms.tsv");
pub(crate) const PARAPHRASES: &str = include_str!("../../data/paraphrases.tsv");
pub(crate) const PREPOSITION_RULES: &str = include_str!("../../data/preposition_rules.tsv");
pub(crate) const RULE_CATEGORIES: &str = include_str!("../../data/rule_categories.tsv");

/// Iterates the non-comment, non-blank lines of a table, split on tabs.
pub(crate) fn rows(table: &str) -> impl Iterator<Item = Vec<&str>> {
    table
        .lines()
        .map(str::trim_end)
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split('\t').map(str::trim).collect())
}

fn words(table: &str) -> impl Iterator<Item = &str> {
    rows(table).filter_map(|r| r.first().copied())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Countability {
    Count,
    Mass,
}

#[derive(Debug, Clone)]
pub(crate) struct IrregularVerb {
    pub base: String,
    pub past: Vec<String>,
    pub participle: Vec<String>,
}

/// Parsed form of every bundled table.
#[derive(Debug)]
pub(crate) struct Lexicon {
    pub closed: HashMap<String, Pos>,
    pub open: HashMap<String, Vec<Pos>>,
    pub countability: HashMap<String, Countability>,
    pub irregular_verbs: Vec<IrregularVerb>,
    /// inflected irregular form -> base
    pub irregular_verb_forms: HashMap<String, String>,
    pub irregular_plurals: HashMap<String, String>,
    pub irregular_singulars: HashMap<String, String>,
    pub stopwords: HashSet<String>,
    pub fillers: BTreeSet<String>,
    /// (left lemma, right lemma) -> ranked candidates; `*` is a wildcard side.
    pub mask_contexts: HashMap<(String, String), Vec<String>>,
    pub synonyms: HashMap<String, Vec<String>>,
    /// lower-cased token sequence -> concept label, longest first
    pub paraphrases: Vec<(Vec<String>, String)>,
    /// (head lemma, wrong preposition) -> suggested replacement ("" means drop)
    pub preposition_rules: HashMap<(String, String), String>,
    pub rule_categories: BTreeMap<String, String>,
}

impl Lexicon {
    pub(crate) fn bundled() -> Self {
        let closed =
            rows(FUNCTION_WORDS).filter_map(|r| Some((r.first()?.to_string(), Pos::parse(r.get(1)?)?))).collect();

        let mut open: HashMap<String, Vec<Pos>> = HashMap::new();
        let mut countability = HashMap::new();
        for r in rows(OPEN_LEXICON) {
            let (Some(word), Some(tag)) = (r.first(), r.get(1).and_then(|t| Pos::parse(t))) else {
                continue;
            };
            let tags = open.entry(word.to_string()).or_default();
            if !tags.contains(&tag) {
                tags.push(tag);
            }
            match r.get(2) {
                Some(&"count") => {
                    countability.insert(word.to_string(), Countability::Count);
                }
                Some(&"mass") => {
                    countability.insert(word.to_string(), Countability::Mass);
                }
                _ => {}
            }
        }
        // Primary tag order: nouns last so verb/adjective readings win when ambiguous
        // unless the context says otherwise.
        for tags in open.values_mut() {
            tags.sort_by_key(|t| match t {
                Pos::Verb => 0,
                Pos::Adj => 1,
                Pos::Adv => 2,
                _ => 3,
            });
        }

        let mut irregular_verbs = Vec::new();
        let mut irregular_verb_forms = HashMap::new();
        for r in rows(IRREGULAR_VERBS) {
            if r.len() < 3 {
                continue;
            }
            let split = |s: &str| s.split('|').map(str::to_string).collect::<Vec<_>>();
            let verb = IrregularVerb { base: r[0].to_string(), past: split(r[1]), participle: split(r[2]) };
            for form in verb.past.iter().chain(&verb.participle) {
                if form != &verb.base {
                    irregular_verb_forms.entry(form.clone()).or_insert_with(|| verb.base.clone());
                }
            }
            irregular_verbs.push(verb);
        }
        // "be" also has present forms that do not follow suffix rules.
        for form in ["am", "is", "are", "being"] {
            irregular_verb_forms.insert(form.to_string(), "be".to_string());
        }
        for (form, base) in [("has", "have"), ("does", "do"), ("goes", "go")] {
            irregular_verb_forms.insert(form.to_string(), base.to_string());
        }

        let mut irregular_plurals = HashMap::new();
        let mut irregular_singulars = HashMap::new();
        for r in rows(IRREGULAR_NOUNS) {
            if r.len() >= 2 {
                irregular_plurals.insert(r[0].to_string(), r[1].to_string());
                irregular_singulars.insert(r[1].to_string(), r[0].to_string());
            }
        }

        let mut mask_contexts = HashMap::new();
        for r in rows(MASK_CONTEXTS) {
            if r.len() >= 3 {
                let cands = r[2].split(',').map(|c| c.trim().to_string()).filter(|c| !c.is_empty()).collect();
                mask_contexts.insert((r[0].to_string(), r[1].to_string()), cands);
            }
        }

        let synonyms = rows(SYNONYMS)
            .filter(|r| r.len() >= 2)
            .map(|r| {
                let list = r[1].split(',').map(|c| c.trim().to_string()).filter(|c| !c.is_empty()).collect();
                (r[0].to_string(), list)
            })
            .collect();

        let mut paraphrases: Vec<(Vec<String>, String)> = rows(PARAPHRASES)
            .filter(|r| r.len() >= 2)
            .map(|r| {
                let seq = r[0].split_whitespace().map(str::to_lowercase).collect();
                (seq, r[1].to_string())
            })
            .collect();
        paraphrases.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));

        let preposition_rules = rows(PREPOSITION_RULES)
            .filter(|r| r.len() >= 2)
            .map(|r| ((r[0].to_string(), r[1].to_string()), r.get(2).copied().unwrap_or("").to_string()))
            .collect();

        let rule_categories =
            rows(RULE_CATEGORIES).filter(|r| r.len() >= 2).map(|r| (r[0].to_string(), r[1].to_string())).collect();

        Lexicon {
            closed,
            open,
            countability,
            irregular_verbs,
            irregular_verb_forms,
            irregular_plurals,
            irregular_singulars,
            stopwords: words(STOPWORDS).map(str::to_string).collect(),
            fillers: words(FILLERS).map(str::to_string).collect(),
            mask_contexts,
            synonyms,
            paraphrases,
            preposition_rules,
            rule_categories,
        }
    }

    pub(crate) fn has_tag(&self, word: &str, pos: Pos) -> bool {
        self.closed.get(word) == Some(&pos) || self.open.get(word).is_some_and(|tags| tags.contains(&pos))
    }

    pub(crate) fn is_known_verb(&self, lemma: &str) -> bool {
        self.has_tag(lemma, Pos::Verb) || self.irregular_verbs.iter().any(|v| v.base == lemma)
    }

    pub(crate) fn is_known_noun(&self, lemma: &str) -> bool {
        self.has_tag(lemma, Pos::Noun) || self.irregular_plurals.contains_key(lemma)
    }

    pub(crate) fn irregular(&self, base: &str) -> Option<&IrregularVerb> {
        self.irregular_verbs.iter().find(|v| v.base == base)
    }
}
