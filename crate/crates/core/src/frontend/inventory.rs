use std::collections::HashMap;
use std::fmt;

use super::FrontendError;

pub const STRESS: &str = "ˈ";
pub const WORD_BOUNDARY: &str = "#";

const CASTILIAN: [&str; 27] = [
    "a", "e", "i", "o", "u", // vowels
    "p", "t", "k", "b", "d", "g", "f", "s", "x", "θ", "tʃ", "m", "n", "ɲ", "l", "ʝ", "r", "ɾ",
    "w", "j", // consonants and glides
    STRESS, WORD_BOUNDARY,
];

/// Ordered phoneme symbols. The CTC blank is not a symbol; its id is
/// `len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhonemeInventory {
    symbols: Vec<String>,
    index: HashMap<String, usize>,
}

impl PhonemeInventory {
    pub fn new<I, S>(symbols: I) -> Result<Self, FrontendError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(symbols.len());
        for (id, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(FrontendError::BadInventorySymbol(s.clone()));
            }
            if index.insert(s.clone(), id).is_some() {
                return Err(FrontendError::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Self { symbols, index })
    }

    /// Castilian Spanish with distinción and yeísmo, plus stress and
    /// word-boundary markers.
    pub fn castilian() -> Self {
        Self::new(CASTILIAN).expect("built-in inventory is well formed")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn blank_id(&self) -> usize {
        self.symbols.len()
    }

    pub fn id_of(&self, symbol: &str) -> Option<usize> {
        self.index.get(symbol).copied()
    }

    pub fn symbol(&self, id: usize) -> Option<&str> {
        self.symbols.get(id).map(String::as_str)
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.index.contains_key(symbol)
    }

    /// One symbol per line; line index is the id.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.symbols {
            out.push_str(s);
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, FrontendError> {
        Self::new(text.lines().map(str::trim_end))
    }
}

impl Default for PhonemeInventory {
    fn default() -> Self {
        Self::castilian()
    }
}

/// Phoneme symbols for one utterance, including stress and boundary markers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PhonemeSequence {
    symbols: Vec<String>,
}

impl PhonemeSequence {
    pub fn new(symbols: Vec<String>) -> Self {
        Self { symbols }
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn to_ids(&self, inventory: &PhonemeInventory) -> Result<Vec<usize>, FrontendError> {
        self.symbols
            .iter()
            .map(|s| {
                inventory
                    .id_of(s)
                    .ok_or_else(|| FrontendError::UnknownSymbol(s.clone()))
            })
            .collect()
    }

    /// Splits on word-boundary markers.
    pub fn words(&self) -> impl Iterator<Item = &[String]> {
        self.symbols.split(|s| s == WORD_BOUNDARY)
    }

    /// Parses the space-separated form produced by `Display`.
    pub fn parse(line: &str, inventory: &PhonemeInventory) -> Result<Self, FrontendError> {
        let symbols = line
            .split_whitespace()
            .map(|s| {
                if inventory.contains(s) {
                    Ok(s.to_string())
                } else {
                    Err(FrontendError::UnknownSymbol(s.to_string()))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { symbols })
    }
}

impl fmt::Display for PhonemeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbols.join(" "))
    }
}
