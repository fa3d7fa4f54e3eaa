//! Rule-based Spanish grapheme-to-phoneme conversion (Castilian, distinción,
//! yeísmo).
//!
//! Each word is converted in three steps: graphemes are rewritten into
//! consonant and vowel units using digraph and context rules, unstressed
//! `i`/`u` next to another vowel become glides, and a stress marker is placed
//! before the nucleus of the stressed syllable.

use super::inventory::{PhonemeInventory, PhonemeSequence, STRESS, WORD_BOUNDARY};
use super::normalize::check_alphabet;
use super::FrontendError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Unit {
    Consonant(&'static [&'static str]),
    Vowel(Vowel),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Vowel {
    /// One of a e i o u.
    base: char,
    accented: bool,
    glide: bool,
}

impl Vowel {
    fn strong(self) -> bool {
        matches!(self.base, 'a' | 'e' | 'o')
    }

    /// Strong or written with an accent: can never be a glide.
    fn firm(self) -> bool {
        self.strong() || self.accented
    }
}

fn vowel_of(c: char) -> Option<Vowel> {
    let (base, accented) = match c {
        'a' | 'e' | 'i' | 'o' | 'u' => (c, false),
        'á' => ('a', true),
        'é' => ('e', true),
        'í' => ('i', true),
        'ó' => ('o', true),
        'ú' => ('u', true),
        'ü' => ('u', false),
        _ => return None,
    };
    Some(Vowel {
        base,
        accented,
        glide: false,
    })
}

fn is_front(c: Option<char>) -> bool {
    matches!(c, Some('e' | 'i' | 'é' | 'í'))
}

fn is_vowel_letter(c: Option<char>) -> bool {
    c.and_then(vowel_of).is_some()
}

const P: &[&str] = &["p"];
const T: &[&str] = &["t"];
const K: &[&str] = &["k"];
const B: &[&str] = &["b"];
const D: &[&str] = &["d"];
const G: &[&str] = &["g"];
const F: &[&str] = &["f"];
const S: &[&str] = &["s"];
const X: &[&str] = &["x"];
const THETA: &[&str] = &["θ"];
const CH: &[&str] = &["tʃ"];
const M: &[&str] = &["m"];
const N: &[&str] = &["n"];
const NY: &[&str] = &["ɲ"];
const L: &[&str] = &["l"];
const YY: &[&str] = &["ʝ"];
const TRILL: &[&str] = &["r"];
const TAP: &[&str] = &["ɾ"];
const W: &[&str] = &["w"];
const KS: &[&str] = &["k", "s"];

fn to_units(word: &[char]) -> Vec<Unit> {
    let mut units = Vec::with_capacity(word.len());
    let at = |i: usize| word.get(i).copied();
    let mut i = 0;
    while i < word.len() {
        let c = word[i];
        let next = at(i + 1);
        let mut step = 1;
        let unit = match c {
            'b' | 'v' => Some(Unit::Consonant(B)),
            'c' if next == Some('h') => {
                step = 2;
                Some(Unit::Consonant(CH))
            }
            'c' if is_front(next) => Some(Unit::Consonant(THETA)),
            'c' => Some(Unit::Consonant(K)),
            'd' => Some(Unit::Consonant(D)),
            'f' => Some(Unit::Consonant(F)),
            'g' if next == Some('u') && is_front(at(i + 2)) => {
                // gue, gui: silent u
                step = 2;
                Some(Unit::Consonant(G))
            }
            'g' if is_front(next) => Some(Unit::Consonant(X)),
            'g' => Some(Unit::Consonant(G)),
            'h' => None,
            'j' => Some(Unit::Consonant(X)),
            'k' => Some(Unit::Consonant(K)),
            'l' if next == Some('l') => {
                step = 2;
                Some(Unit::Consonant(YY))
            }
            'l' => Some(Unit::Consonant(L)),
            'm' => Some(Unit::Consonant(M)),
            'n' => Some(Unit::Consonant(N)),
            'ñ' => Some(Unit::Consonant(NY)),
            'p' => Some(Unit::Consonant(P)),
            'q' => {
                if next == Some('u') {
                    step = 2;
                }
                Some(Unit::Consonant(K))
            }
            'r' if next == Some('r') => {
                step = 2;
                Some(Unit::Consonant(TRILL))
            }
            'r' if i == 0 || matches!(word[i - 1], 'l' | 'n' | 's') => {
                Some(Unit::Consonant(TRILL))
            }
            'r' => Some(Unit::Consonant(TAP)),
            's' => Some(Unit::Consonant(S)),
            't' => Some(Unit::Consonant(T)),
            'w' => Some(Unit::Consonant(W)),
            'x' => Some(Unit::Consonant(KS)),
            'y' if is_vowel_letter(next) => Some(Unit::Consonant(YY)),
            // Not before a vowel, y is read as the vowel i.
            'y' => Some(Unit::Vowel(Vowel {
                base: 'i',
                accented: false,
                glide: false,
            })),
            'z' => Some(Unit::Consonant(THETA)),
            v => vowel_of(v).map(Unit::Vowel),
        };
        units.extend(unit);
        i += step;
    }
    units
}

fn vowel_at(units: &[Unit], i: Option<usize>) -> Option<Vowel> {
    match i.and_then(|i| units.get(i)) {
        Some(Unit::Vowel(v)) => Some(*v),
        _ => None,
    }
}

fn mark_glides(units: &mut [Unit]) {
    for k in 0..units.len() {
        let Unit::Vowel(v) = units[k] else { continue };
        if v.firm() {
            continue;
        }
        let prev = vowel_at(units, k.checked_sub(1));
        let next = vowel_at(units, Some(k + 1));
        let glide = next.is_some_and(Vowel::firm)
            || prev.is_some_and(|p| p.firm())
            || next.is_some_and(|n| !n.firm());
        if let Unit::Vowel(v) = &mut units[k] {
            v.glide = glide;
        }
    }
}

fn stressed_nucleus(units: &[Unit], last_letter: char) -> Option<usize> {
    let nuclei: Vec<usize> = units
        .iter()
        .enumerate()
        .filter_map(|(i, u)| match u {
            Unit::Vowel(v) if !v.glide => Some(i),
            _ => None,
        })
        .collect();
    if nuclei.is_empty() {
        return None;
    }
    let accented = nuclei
        .iter()
        .rev()
        .find(|&&i| matches!(units[i], Unit::Vowel(v) if v.accented));
    if let Some(&i) = accented {
        return Some(i);
    }
    let penultimate = matches!(last_letter, 'a' | 'e' | 'i' | 'o' | 'u' | 'n' | 's');
    if penultimate && nuclei.len() >= 2 {
        Some(nuclei[nuclei.len() - 2])
    } else {
        nuclei.last().copied()
    }
}

fn word_to_phonemes(word: &str, out: &mut Vec<String>) -> Result<(), FrontendError> {
    let letters: Vec<char> = word.chars().collect();
    let mut units = to_units(&letters);
    if units.is_empty() {
        return Err(FrontendError::UnpronounceableWord(word.to_string()));
    }
    mark_glides(&mut units);
    let last = *letters.last().expect("non-empty word");
    let stress = stressed_nucleus(&units, last);
    if stress.is_none() {
        // No vowel at all: the marker leads the word so every word still
        // carries exactly one.
        out.push(STRESS.to_string());
    }
    for (i, unit) in units.iter().enumerate() {
        match unit {
            Unit::Consonant(symbols) => out.extend(symbols.iter().map(|s| s.to_string())),
            Unit::Vowel(v) if v.glide => {
                out.push(if v.base == 'u' { "w" } else { "j" }.to_string())
            }
            Unit::Vowel(v) => {
                if stress == Some(i) {
                    out.push(STRESS.to_string());
                }
                out.push(v.base.to_string());
            }
        }
    }
    Ok(())
}

/// Converts normalized text into phonemes, separating words with `#`.
///
/// Every emitted symbol is checked against `inventory`.
pub fn grapheme_to_phoneme(
    text: impl AsRef<str>,
    inventory: &PhonemeInventory,
) -> Result<PhonemeSequence, FrontendError> {
    let text = text.as_ref();
    check_alphabet(text)?;
    let mut symbols = Vec::new();
    for (i, word) in text.split(' ').filter(|w| !w.is_empty()).enumerate() {
        if i > 0 {
            symbols.push(WORD_BOUNDARY.to_string());
        }
        word_to_phonemes(word, &mut symbols)?;
    }
    if let Some(s) = symbols.iter().find(|s| !inventory.contains(s)) {
        return Err(FrontendError::UnknownSymbol(s.clone()));
    }
    Ok(PhonemeSequence::new(symbols))
}
