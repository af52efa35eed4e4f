//! Baseline grammar rules.
//!
//! Each rule emits issues tagged with a rule id; the id-to-category mapping comes
//! from the bundled `rule_categories.tsv` so external checker ids share the taxonomy.

use std::collections::BTreeSet;

use super::lexicon::{Countability, Lexicon};
use super::pos::{self, COPULAS, MODALS, SUBJECT_PRONOUNS};
use super::{is_punct, morphology, split_token_sentences, GrammarCategory, GrammarIssue, Pos, VerbForm};

const THIRD_PERSON: [&str; 6] = ["he", "she", "it", "everyone", "someone", "nobody"];
const FREQUENCY_ADVERBS: [&str; 9] =
    ["always", "never", "often", "sometimes", "usually", "really", "just", "still", "also"];
const PLURAL_QUANTIFIERS: [&str; 16] = [
    "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "many", "several", "few", "both", "these",
    "those", "various",
];
const SINGULAR_DETERMINERS: [&str; 8] = ["a", "an", "one", "this", "that", "each", "every", "another"];
const BARE_NOUN_IDIOMS: [&str; 14] = [
    "school",
    "class",
    "church",
    "bed",
    "home",
    "work",
    "college",
    "town",
    "lunch",
    "dinner",
    "breakfast",
    "time",
    "hospital",
    "university",
];
const LINKING_VERBS: [&str; 8] = ["look", "feel", "seem", "sound", "taste", "smell", "get", "become"];
const PAST_NOUNS: [&str; 13] = [
    "night", "week", "month", "year", "weekend", "time", "summer", "winter", "spring", "fall", "semester", "monday",
    "friday",
];
const ADJ_TO_ADV: [(&str, &str); 11] = [
    ("quick", "quickly"),
    ("slow", "slowly"),
    ("careful", "carefully"),
    ("quiet", "quietly"),
    ("loud", "loudly"),
    ("clear", "clearly"),
    ("fluent", "fluently"),
    ("easy", "easily"),
    ("bad", "badly"),
    ("good", "well"),
    ("natural", "naturally"),
];
const TOO_TARGETS: [&str; 9] = ["much", "many", "late", "early", "big", "small", "hard", "expensive", "difficult"];

struct Ctx<'a> {
    lex: &'a Lexicon,
    tokens: &'a [&'a str],
    lower: Vec<String>,
    tags: Vec<Pos>,
    issues: Vec<GrammarIssue>,
    flagged_verbs: BTreeSet<usize>,
}

impl Ctx<'_> {
    fn push(&mut self, rule: &str, begin: usize, end: usize, suggestion: Option<String>) {
        let category =
            self.lex.rule_categories.get(rule).and_then(|c| c.parse().ok()).unwrap_or(GrammarCategory::Other);
        self.issues.push(GrammarIssue { rule_id: rule.to_string(), category, span: (begin, end), suggestion });
    }

    fn w(&self, i: usize) -> &str {
        &self.lower[i]
    }

    /// Skips frequency adverbs and "not" starting at `i`.
    fn skip_adverbs(&self, mut i: usize, end: usize) -> usize {
        while i < end
            && (FREQUENCY_ADVERBS.contains(&self.w(i)) || self.w(i) == "not" || self.lex.fillers.contains(self.w(i)))
        {
            i += 1;
        }
        i
    }

    fn verb_form(&self, i: usize) -> Option<VerbForm> {
        morphology::verb_form(self.lex, &self.lower[i])
    }

    fn is_plural_noun(&self, i: usize) -> bool {
        if self.tags[i] != Pos::Noun {
            return false;
        }
        let w = self.w(i);
        if self.lex.irregular_singulars.contains_key(w) {
            return true;
        }
        let lemma = morphology::lemmatize(self.lex, w, Pos::Noun);
        lemma != w && self.lex.is_known_noun(&lemma)
    }

    fn is_singular_count_noun(&self, i: usize) -> bool {
        self.tags[i] == Pos::Noun && self.lex.countability.get(self.w(i)) == Some(&Countability::Count)
    }
}

pub(crate) fn check(lex: &Lexicon, tokens: &[&str]) -> Vec<GrammarIssue> {
    let tags = pos::tag(lex, tokens);
    let mut ctx = Ctx {
        lex,
        tokens,
        lower: tokens.iter().map(|t| t.to_lowercase()).collect(),
        tags,
        issues: Vec::new(),
        flagged_verbs: BTreeSet::new(),
    };
    for range in split_token_sentences(tokens) {
        let (s, e) = (range.start, range.end);
        casing(&mut ctx, s, e);
        punctuation(&mut ctx, s, e);
        disfluency(&mut ctx, s, e);
        homophones(&mut ctx, s, e);
        verb_tense(&mut ctx, s, e);
        agreement(&mut ctx, s, e);
        verb_form(&mut ctx, s, e);
        copula_bare_verb(&mut ctx, s, e);
        articles(&mut ctx, s, e);
        noun_number(&mut ctx, s, e);
        prepositions(&mut ctx, s, e);
        pronouns(&mut ctx, s, e);
        word_form(&mut ctx, s, e);
        word_order(&mut ctx, s, e);
    }
    let mut issues = ctx.issues;
    issues.sort_by_key(|i| (i.span.0, i.span.1));
    // one issue per (span, category)
    issues.dedup_by(|a, b| a.span == b.span && a.category == b.category);
    issues
}

fn casing(ctx: &mut Ctx, s: usize, e: usize) {
    let mut first_word = true;
    for i in s..e {
        let tok = ctx.tokens[i];
        if is_punct(tok) {
            continue;
        }
        if tok == "i" || tok.starts_with("i'") {
            ctx.push("RL_LOWERCASE_I", i, i + 1, Some(format!("I{}", &tok[1..])));
        } else if first_word && tok.chars().next().is_some_and(char::is_lowercase) {
            let mut c = tok.chars();
            let fixed: String = c.next().into_iter().flat_map(char::to_uppercase).chain(c).collect();
            ctx.push("RL_SENTENCE_START_CASE", i, i + 1, Some(fixed));
        }
        first_word = false;
    }
}

fn punctuation(ctx: &mut Ctx, s: usize, e: usize) {
    for i in s + 1..e {
        if is_punct(ctx.tokens[i]) && ctx.tokens[i] == ctx.tokens[i - 1] {
            ctx.push("RL_DOUBLE_PUNCT", i, i + 1, Some(String::new()));
        }
    }
}

fn disfluency(ctx: &mut Ctx, s: usize, e: usize) {
    for i in s..e {
        if ctx.lex.fillers.contains(ctx.w(i)) {
            ctx.push("RL_FILLER", i, i + 1, Some(String::new()));
        } else if i > s && !is_punct(ctx.w(i)) && ctx.w(i) == ctx.w(i - 1) {
            ctx.push("RL_WORD_REPEAT", i, i + 1, Some(String::new()));
        }
    }
}

fn homophones(ctx: &mut Ctx, s: usize, e: usize) {
    for i in s..e.saturating_sub(1) {
        let next = ctx.lower[i + 1].clone();
        match ctx.w(i) {
            "their" if COPULAS.contains(&next.as_str()) => ctx.push("RL_THEIR_THERE", i, i + 1, Some("there".into())),
            "your" if matches!(next.as_str(), "welcome" | "right" | "going" | "not") => {
                ctx.push("RL_YOUR_YOURE", i, i + 1, Some("you're".into()))
            }
            "to" if TOO_TARGETS.contains(&next.as_str())
                && (i + 2 >= e || is_punct(ctx.w(i + 2)) || ctx.tags[i + 2] != Pos::Noun) =>
            {
                ctx.push("RL_TO_TOO", i, i + 1, Some("too".into()))
            }
            _ => {}
        }
    }
}

fn past_marker(ctx: &Ctx, s: usize, e: usize) -> bool {
    (s..e).any(|i| {
        matches!(ctx.w(i), "yesterday" | "ago")
            || (ctx.w(i) == "last" && i + 1 < e && PAST_NOUNS.contains(&ctx.w(i + 1)))
    })
}

fn finite_present(ctx: &Ctx, i: usize, s: usize) -> bool {
    if ctx.tags[i] != Pos::Verb {
        return false;
    }
    let prev = (i > s).then(|| ctx.w(i - 1));
    if prev.is_some_and(|p| MODALS.contains(&p) || p == "to" || COPULAS.contains(&p)) {
        return false;
    }
    match ctx.w(i) {
        "am" | "is" | "are" => true,
        _ => {
            let after_subject = (s..i)
                .rev()
                .find(|&p| !FREQUENCY_ADVERBS.contains(&ctx.w(p)))
                .is_some_and(|p| SUBJECT_PRONOUNS.contains(&ctx.w(p)) || ctx.tags[p] == Pos::Noun);
            after_subject && matches!(ctx.verb_form(i), Some(VerbForm::Base | VerbForm::ThirdSingular))
        }
    }
}

fn verb_tense(ctx: &mut Ctx, s: usize, e: usize) {
    if !past_marker(ctx, s, e) {
        return;
    }
    let has_past = (s..e).any(|i| {
        ctx.tags[i] == Pos::Verb && matches!(ctx.verb_form(i), Some(VerbForm::Past | VerbForm::PastOrParticiple))
    });
    if has_past {
        return;
    }
    if let Some(i) = (s..e).find(|&i| finite_present(ctx, i, s)) {
        let lemma = morphology::lemmatize(ctx.lex, ctx.w(i), Pos::Verb);
        let past = match ctx.w(i) {
            "am" | "is" => "was".to_string(),
            "are" => "were".to_string(),
            _ => morphology::past_of(ctx.lex, &lemma),
        };
        ctx.flagged_verbs.insert(i);
        ctx.push("RL_PAST_MARKER", i, i + 1, Some(past));
    }
}

fn agreement(ctx: &mut Ctx, s: usize, e: usize) {
    for i in s..e {
        let subj = ctx.w(i).to_string();
        // a determiner + noun subject opening the sentence ("My sister work ...")
        let noun_subject = i == s + 1
            && matches!(ctx.w(s), "my" | "his" | "her" | "our" | "their" | "your" | "the" | "this" | "that")
            && ctx.tags[i] == Pos::Noun;
        let third = THIRD_PERSON.contains(&subj.as_str()) || (noun_subject && !ctx.is_plural_noun(i));
        let non_third = matches!(subj.as_str(), "i" | "you" | "we" | "they");
        if !third && !non_third {
            continue;
        }
        // "you"/"it" are subjects only clause-initially or after a conjunction/adverb
        if matches!(subj.as_str(), "you" | "it") && i > s {
            let prev = ctx.tags[i - 1];
            if matches!(prev, Pos::Verb | Pos::Adp) {
                continue;
            }
        }
        let j = ctx.skip_adverbs(i + 1, e);
        if j >= e || ctx.tags[j] != Pos::Verb || ctx.flagged_verbs.contains(&j) {
            continue;
        }
        let verb = ctx.w(j).to_string();
        if MODALS.contains(&verb.as_str()) {
            continue;
        }
        let form = ctx.verb_form(j);
        let fix = if third {
            match verb.as_str() {
                "am" | "are" => Some(("RL_SVA_BE", "is".to_string())),
                "were" => Some(("RL_SVA_BE", "was".to_string())),
                "don't" => Some(("RL_SVA_THIRD_PERSON", "doesn't".to_string())),
                "have" => Some(("RL_SVA_THIRD_PERSON", "has".to_string())),
                "do" => Some(("RL_SVA_THIRD_PERSON", "does".to_string())),
                _ if form == Some(VerbForm::Base) => {
                    let lemma = morphology::lemmatize(ctx.lex, &verb, Pos::Verb);
                    Some(("RL_SVA_THIRD_PERSON", morphology::third_singular(&lemma)))
                }
                _ => None,
            }
        } else {
            match (subj.as_str(), verb.as_str()) {
                ("i", "am") => None,
                ("i", "is" | "are") => Some(("RL_SVA_BE", "am".to_string())),
                ("i", "were") => Some(("RL_SVA_BE", "was".to_string())),
                (_, "is") => Some(("RL_SVA_BE", "are".to_string())),
                (_, "am") => Some(("RL_SVA_BE", "are".to_string())),
                ("i", "was") => None,
                (_, "was") => Some(("RL_SVA_BE", "were".to_string())),
                (_, "doesn't") => Some(("RL_SVA_NON_THIRD", "don't".to_string())),
                _ if form == Some(VerbForm::ThirdSingular) => {
                    let lemma = morphology::lemmatize(ctx.lex, &verb, Pos::Verb);
                    Some(("RL_SVA_NON_THIRD", lemma))
                }
                _ => None,
            }
        };
        if let Some((rule, suggestion)) = fix {
            ctx.flagged_verbs.insert(j);
            ctx.push(rule, j, j + 1, Some(suggestion));
        }
    }
}

fn verb_form(ctx: &mut Ctx, s: usize, e: usize) {
    for i in s..e {
        let w = ctx.w(i).to_string();
        let perfect = matches!(w.as_str(), "have" | "has" | "had");
        let modal = MODALS.contains(&w.as_str());
        let infinitive = w == "to";
        if !(perfect || modal || infinitive) {
            continue;
        }
        let j = ctx.skip_adverbs(i + 1, e);
        if j >= e || ctx.tags[j] != Pos::Verb || ctx.flagged_verbs.contains(&j) {
            continue;
        }
        let lemma = morphology::lemmatize(ctx.lex, ctx.w(j), Pos::Verb);
        let form = ctx.verb_form(j);
        let issue = if perfect {
            match form {
                Some(VerbForm::Past) => Some(("RL_PERFECT_PARTICIPLE", morphology::participle_of(ctx.lex, &lemma))),
                Some(VerbForm::Base)
                    if ctx.lex.irregular(&lemma).is_some()
                        && !matches!(lemma.as_str(), "be" | "have" | "do")
                        && morphology::participle_of(ctx.lex, &lemma) != lemma =>
                {
                    Some(("RL_PERFECT_PARTICIPLE", morphology::participle_of(ctx.lex, &lemma)))
                }
                _ => None,
            }
        } else if modal {
            match form {
                Some(
                    VerbForm::ThirdSingular
                    | VerbForm::Past
                    | VerbForm::Participle
                    | VerbForm::PastOrParticiple
                    | VerbForm::Gerund,
                ) if !matches!(ctx.w(j), "been" | "being") => Some(("RL_MODAL_BASE", lemma)),
                _ => None,
            }
        } else {
            match form {
                Some(VerbForm::ThirdSingular | VerbForm::Past | VerbForm::Participle) => {
                    Some(("RL_INFINITIVE_BASE", lemma))
                }
                _ => None,
            }
        };
        if let Some((rule, suggestion)) = issue {
            ctx.flagged_verbs.insert(j);
            ctx.push(rule, j, j + 1, Some(suggestion));
        }
    }
}

/// "I am agree": a copula in front of a stative verb that never works as an adjective.
fn copula_bare_verb(ctx: &mut Ctx, s: usize, e: usize) {
    const STATIVE: [&str; 9] =
        ["agree", "disagree", "understand", "know", "want", "need", "believe", "remember", "prefer"];
    for i in s..e {
        if !matches!(ctx.w(i), "am" | "is" | "are" | "was" | "were") {
            continue;
        }
        let j = ctx.skip_adverbs(i + 1, e);
        if j < e && STATIVE.contains(&ctx.w(j)) && !ctx.flagged_verbs.contains(&j) {
            ctx.flagged_verbs.insert(j);
            ctx.push("RL_COPULA_BARE_VERB", i, i + 1, Some(String::new()));
        }
    }
}

fn vowel_sound(word: &str) -> bool {
    const CONSONANT_SOUND: [&str; 6] = ["uni", "use", "usu", "eu", "one", "once"];
    const VOWEL_SOUND: [&str; 4] = ["hour", "honest", "honor", "heir"];
    if VOWEL_SOUND.iter().any(|p| word.starts_with(p)) {
        return true;
    }
    if CONSONANT_SOUND.iter().any(|p| word.starts_with(p)) {
        return false;
    }
    word.starts_with(['a', 'e', 'i', 'o', 'u'])
}

fn articles(ctx: &mut Ctx, s: usize, e: usize) {
    for i in s..e {
        let w = ctx.w(i);
        if (w == "a" || w == "an") && i + 1 < e && !is_punct(ctx.w(i + 1)) {
            let next = ctx.w(i + 1);
            if w == "a" && vowel_sound(next) {
                ctx.push("RL_A_AN", i, i + 1, Some("an".into()));
            } else if w == "an" && !vowel_sound(next) && next.chars().all(char::is_alphabetic) {
                ctx.push("RL_A_AN", i, i + 1, Some("a".into()));
            }
        }
    }
    // missing determiner before a singular count noun
    for i in s..e {
        if !ctx.is_singular_count_noun(i) || BARE_NOUN_IDIOMS.contains(&ctx.w(i)) {
            continue;
        }
        if i + 1 < e && ctx.tags[i + 1] == Pos::Noun {
            continue;
        }
        let mut p = i;
        while p > s && ctx.tags[p - 1] == Pos::Adj {
            p -= 1;
        }
        let licensed = p > s && matches!(ctx.tags[p - 1], Pos::Verb | Pos::Adp) && !COPULAS.contains(&ctx.w(p - 1));
        if licensed {
            let noun = ctx.tokens[p..=i].join(" ");
            let art = if vowel_sound(ctx.w(p)) { "an" } else { "a" };
            ctx.push("RL_MISSING_ARTICLE", p, i + 1, Some(format!("{art} {noun}")));
        }
    }
}

fn noun_number(ctx: &mut Ctx, s: usize, e: usize) {
    for i in s..e {
        let w = ctx.w(i).to_string();
        let plural_q = PLURAL_QUANTIFIERS.contains(&w.as_str()) || w.parse::<u64>().is_ok_and(|n| n > 1);
        let singular_q = SINGULAR_DETERMINERS.contains(&w.as_str());
        if plural_q || singular_q {
            let mut j = i + 1;
            while j < e && ctx.tags[j] == Pos::Adj {
                j += 1;
            }
            if j >= e {
                continue;
            }
            if plural_q && ctx.is_singular_count_noun(j) {
                let pl =
                    ctx.lex.irregular_plurals.get(ctx.w(j)).cloned().unwrap_or_else(|| morphology::plural_s(ctx.w(j)));
                ctx.push("RL_PLURAL_AFTER_NUMBER", j, j + 1, Some(pl));
            } else if singular_q && ctx.is_plural_noun(j) {
                let sing = morphology::lemmatize(ctx.lex, ctx.w(j), Pos::Noun);
                ctx.push("RL_SINGULAR_AFTER_DET", j, j + 1, Some(sing));
            }
        }
        if ctx.tags[i] == Pos::Noun {
            let lemma = morphology::lemmatize(ctx.lex, &w, Pos::Noun);
            if lemma != w && ctx.lex.countability.get(&lemma) == Some(&Countability::Mass) {
                ctx.push("RL_MASS_PLURAL", i, i + 1, Some(lemma));
            }
        }
    }
}

fn prepositions(ctx: &mut Ctx, s: usize, e: usize) {
    for i in s..e.saturating_sub(1) {
        let head = morphology::base_form(ctx.lex, ctx.w(i));
        let key = (head.clone(), ctx.w(i + 1).to_string());
        let key_surface = (ctx.w(i).to_string(), ctx.w(i + 1).to_string());
        let fix = ctx.lex.preposition_rules.get(&key).or_else(|| ctx.lex.preposition_rules.get(&key_surface)).cloned();
        if let Some(replacement) = fix {
            let suggestion = if replacement.is_empty() {
                ctx.tokens[i].to_string()
            } else {
                format!("{} {}", ctx.tokens[i], replacement)
            };
            ctx.push("RL_VERB_PREPOSITION", i, i + 2, Some(suggestion));
        }
    }
}

fn pronouns(ctx: &mut Ctx, s: usize, e: usize) {
    let first = (s..e).find(|&i| !is_punct(ctx.w(i)));
    if let Some(i) = first {
        let w = ctx.w(i);
        let subject = match w {
            "me" => Some("I"),
            "him" => Some("he"),
            "us" => Some("we"),
            "them" => Some("they"),
            _ => None,
        };
        let j = ctx.skip_adverbs(i + 1, e);
        let verb_follows = j < e && ctx.tags[j] == Pos::Verb;
        let and_follows = i + 1 < e && ctx.w(i + 1) == "and";
        if let Some(sub) = subject {
            if verb_follows || and_follows {
                ctx.push("RL_OBJECT_PRONOUN_SUBJECT", i, i + 1, Some(sub.into()));
            }
        }
    }
    for i in s + 2..e {
        if ctx.w(i) == "i" && ctx.w(i - 1) == "and" {
            let after_prep = (s..i - 1).rev().take(3).any(|p| ctx.tags[p] == Pos::Adp);
            if after_prep {
                ctx.push("RL_OBJECT_PRONOUN_SUBJECT", i, i + 1, Some("me".into()));
            }
        }
    }
}

fn word_form(ctx: &mut Ctx, s: usize, e: usize) {
    for i in s..e {
        let Some(&(_, adv)) = ADJ_TO_ADV.iter().find(|(a, _)| *a == ctx.w(i)) else {
            continue;
        };
        let boundary = i + 1 >= e || matches!(ctx.tags[i + 1], Pos::Punct | Pos::Cconj);
        if !boundary || i == s {
            continue;
        }
        let mut v = i - 1;
        if matches!(ctx.tags[v], Pos::Noun | Pos::Pron) && v > s {
            v -= 1;
        }
        let verb = ctx.w(v);
        let lemma = morphology::lemmatize(ctx.lex, verb, Pos::Verb);
        if ctx.tags[v] == Pos::Verb
            && !COPULAS.contains(&verb)
            && !LINKING_VERBS.contains(&lemma.as_str())
            && !MODALS.contains(&verb)
        {
            ctx.push("RL_ADJ_FOR_ADV", i, i + 1, Some(adv.into()));
        }
    }
}

fn word_order(ctx: &mut Ctx, s: usize, e: usize) {
    let Some(i) = (s..e).find(|&i| !is_punct(ctx.w(i))) else {
        return;
    };
    if matches!(ctx.w(i), "always" | "never" | "often" | "usually" | "sometimes")
        && i + 2 < e
        && SUBJECT_PRONOUNS.contains(&ctx.w(i + 1))
        && ctx.tags[i + 2] == Pos::Verb
    {
        let fixed = format!("{} {}", ctx.tokens[i + 1], ctx.lower[i]);
        ctx.push("RL_ADV_BEFORE_SUBJECT", i, i + 2, Some(fixed));
    }
}
