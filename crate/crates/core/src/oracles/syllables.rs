use super::OracleError;

fn is_vowel(word: &[char], i: usize) -> bool {
    match word[i] {
        'a' | 'e' | 'i' | 'o' | 'u' => true,
        // "y" is a vowel except word-initially ("yes", "you")
        'y' => i > 0,
        _ => false,
    }
}

/// Vowel-group count with a silent final "e" removed, except after consonant + "l"
/// ("table") or when removing it would leave no syllable. Never below one.
pub(crate) fn count_syllables(word: &str) -> Result<u32, OracleError> {
    if word.is_empty() || !word.chars().all(char::is_alphabetic) {
        return Err(OracleError::NotAWord(word.to_string()));
    }
    let w: Vec<char> = word.to_lowercase().chars().collect();
    let mut groups = 0u32;
    let mut prev_vowel = false;
    for i in 0..w.len() {
        let v = is_vowel(&w, i);
        if v && !prev_vowel {
            groups += 1;
        }
        prev_vowel = v;
    }
    let n = w.len();
    if n >= 2 && w[n - 1] == 'e' && !is_vowel(&w, n - 2) {
        let consonant_le = n >= 3 && w[n - 2] == 'l' && !is_vowel(&w, n - 3);
        if !consonant_le && groups > 1 {
            groups -= 1;
        }
    }
    Ok(groups.max(1))
}
