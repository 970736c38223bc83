/// Lowercases, splits on Unicode whitespace and strips punctuation from both
/// ends of each token. Internal punctuation (`don't`, `stop-me`) survives.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|raw| raw.trim_matches(is_punctuation).to_lowercase())
        .filter(|t| !t.is_empty())
        .collect()
}

fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{2018}'..='\u{201F}' | '\u{2010}'..='\u{2015}' | '\u{2026}' | '«' | '»' | '¡' | '¿'
        )
}
