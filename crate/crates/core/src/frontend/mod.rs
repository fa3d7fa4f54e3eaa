//! Spanish text normalization and grapheme-to-phoneme conversion.

mod cardinal;
mod g2p;
mod inventory;
mod normalize;

pub use cardinal::{expand_cardinal, MAX_CARDINAL};
pub use g2p::grapheme_to_phoneme;
pub use inventory::{PhonemeInventory, PhonemeSequence, STRESS, WORD_BOUNDARY};
pub use normalize::{normalize_text, NormalizedText};

#[derive(Debug, thiserror::Error)]
pub enum FrontendError {
    #[error("cardinal {0} outside 0..=999999")]
    CardinalOutOfRange(u32),
    #[error("character {ch:?} at position {position} is outside the normalized alphabet")]
    InvalidCharacter { ch: char, position: usize },
    #[error("leading, trailing or repeated spaces in normalized text")]
    BadSpacing,
    #[error("word {0:?} has no pronounceable letters")]
    UnpronounceableWord(String),
    #[error("symbol {0:?} is not in the phoneme inventory")]
    UnknownSymbol(String),
    #[error("duplicate inventory symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("invalid inventory symbol {0:?}")]
    BadInventorySymbol(String),
}
