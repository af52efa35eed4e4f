use std::collections::BTreeSet;

use super::lexicon::Lexicon;
use super::{
    grammar, mask, morphology, pos, sentences, similarity, syllables, GrammarIssue, LanguageOracle, OracleError, Pos,
    VerbForm,
};

/// Rule-based oracle backed entirely by the bundled tables.
#[derive(Debug)]
pub struct BaselineOracle {
    lex: Lexicon,
}

impl BaselineOracle {
    pub fn new() -> Self {
        BaselineOracle { lex: Lexicon::bundled() }
    }
}

impl Default for BaselineOracle {
    fn default() -> Self {
        Self::new()
    }
}

impl LanguageOracle for BaselineOracle {
    fn check_grammar(&self, tokens: &[&str]) -> Vec<GrammarIssue> {
        grammar::check(&self.lex, tokens)
    }

    fn predict_masked(&self, tokens: &[&str], mask_index: usize, top_k: usize) -> Result<Vec<String>, OracleError> {
        mask::predict(&self.lex, tokens, mask_index, top_k)
    }

    fn similarity(&self, a: &str, b: &str) -> Result<f64, OracleError> {
        similarity::similarity(&self.lex, a, b)
    }

    fn tag_pos(&self, tokens: &[&str]) -> Vec<Pos> {
        pos::tag(&self.lex, tokens)
    }

    fn count_syllables(&self, word: &str) -> Result<u32, OracleError> {
        syllables::count_syllables(word)
    }

    fn split_sentences(&self, text: &str) -> Vec<String> {
        sentences::split_sentences(text)
    }

    fn lemmatize(&self, word: &str, pos: Pos) -> String {
        morphology::lemmatize(&self.lex, word, pos)
    }

    fn variants(&self, word: &str) -> BTreeSet<String> {
        morphology::variants(&self.lex, word)
    }

    fn base_form(&self, word: &str) -> String {
        morphology::base_form(&self.lex, word)
    }

    fn verb_form(&self, word: &str) -> Option<VerbForm> {
        morphology::verb_form(&self.lex, word)
    }

    fn is_hesitation(&self, word: &str) -> bool {
        self.lex.fillers.contains(&word.to_lowercase())
    }

    fn is_stopword(&self, word: &str) -> bool {
        self.lex.stopwords.contains(&word.to_lowercase())
    }
}
