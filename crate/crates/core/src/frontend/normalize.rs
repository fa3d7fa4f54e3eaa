use std::fmt;

use unicode_normalization::UnicodeNormalization;

use super::cardinal::{expand_cardinal, MAX_CARDINAL};
use super::FrontendError;

const DIGIT_NAMES: [&str; 10] = [
    "cero", "uno", "dos", "tres", "cuatro", "cinco", "seis", "siete", "ocho", "nueve",
];

/// Lowercase Spanish text over `a-z`, `á é í ó ú ü ñ` and single spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NormalizedText(String);

impl NormalizedText {
    /// Validates an already-normalized string.
    pub fn parse(text: &str) -> Result<Self, FrontendError> {
        check_alphabet(text)?;
        if text.starts_with(' ') || text.ends_with(' ') || text.contains("  ") {
            return Err(FrontendError::BadSpacing);
        }
        Ok(Self(text.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.0.split(' ').filter(|w| !w.is_empty())
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl AsRef<str> for NormalizedText {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NormalizedText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_alphabet_letter(c: char) -> bool {
    c.is_ascii_lowercase() || matches!(c, 'á' | 'é' | 'í' | 'ó' | 'ú' | 'ü' | 'ñ')
}

/// Rejects any character that is neither an alphabet letter nor a space.
pub(crate) fn check_alphabet(text: &str) -> Result<(), FrontendError> {
    match text
        .chars()
        .enumerate()
        .find(|&(_, c)| c != ' ' && !is_alphabet_letter(c))
    {
        Some((position, ch)) => Err(FrontendError::InvalidCharacter { ch, position }),
        None => Ok(()),
    }
}

// Latin letters outside the alphabet that have an obvious Spanish reading.
fn fold_foreign(c: char) -> Option<char> {
    Some(match c {
        'à' | 'â' | 'ä' | 'ã' | 'å' => 'a',
        'è' | 'ê' | 'ë' => 'e',
        'ì' | 'î' | 'ï' => 'i',
        'ò' | 'ô' | 'ö' | 'õ' => 'o',
        'ù' | 'û' => 'u',
        'ç' => 'c',
        'ý' | 'ÿ' => 'y',
        _ => return None,
    })
}

fn spell_digits(digits: &str) -> String {
    // Groups beyond the cardinal range are read digit by digit.
    match digits.parse::<u32>() {
        Ok(n) if n <= MAX_CARDINAL && digits.len() <= 6 => {
            expand_cardinal(n).expect("value checked against range")
        }
        _ => digits
            .bytes()
            .map(|b| DIGIT_NAMES[(b - b'0') as usize])
            .collect::<Vec<_>>()
            .join(" "),
    }
}

/// Lowercases, spells out digit groups, drops punctuation and collapses
/// whitespace.
///
/// Punctuation and symbols act as word separators, so "hola,mundo" becomes
/// "hola mundo". Letters that cannot be mapped onto the alphabet are dropped.
pub fn normalize_text(raw: &str) -> NormalizedText {
    let composed: String = raw.nfc().collect();

    // Digit groups first so that "42." keeps its number before the period is
    // stripped.
    let mut expanded = String::with_capacity(composed.len());
    let mut digits = String::new();
    for c in composed.chars() {
        if c.is_ascii_digit() {
            digits.push(c);
            continue;
        }
        if !digits.is_empty() {
            expanded.push(' ');
            expanded.push_str(&spell_digits(&digits));
            expanded.push(' ');
            digits.clear();
        }
        expanded.push(c);
    }
    if !digits.is_empty() {
        expanded.push(' ');
        expanded.push_str(&spell_digits(&digits));
    }

    let mut out = String::with_capacity(expanded.len());
    let mut pending_space = false;
    for c in expanded.chars().flat_map(char::to_lowercase) {
        let mapped = if is_alphabet_letter(c) {
            Some(c)
        } else {
            fold_foreign(c)
        };
        match mapped {
            Some(letter) => {
                if pending_space && !out.is_empty() {
                    out.push(' ');
                }
                pending_space = false;
                out.push(letter);
            }
            None if c.is_alphabetic() => {}
            None => pending_space = true,
        }
    }
    NormalizedText(out)
}
